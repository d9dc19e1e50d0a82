#include "tmev/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "tmev/errors.hpp"

namespace tmev::graph {

using lang::ContractIR;
using lang::Expr;
using lang::FunctionIR;
using lang::Stmt;
using lang::VarKind;

const char* node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Entry: return "entry";
    case NodeKind::Return: return "return";
    case NodeKind::Assign: return "assign";
    case NodeKind::CompoundAssign: return "compound_assign";
    case NodeKind::Branch: return "branch";
    case NodeKind::Decl: return "decl";
  }
  return "?";
}

const char* edge_kind_name(EdgeKind k) {
  switch (k) {
    case EdgeKind::Data: return "data";
    case EdgeKind::Control: return "control";
    case EdgeKind::InterprocDefUse: return "interproc_def_use";
  }
  return "?";
}

namespace {

std::vector<Stmt> unroll_body(const std::vector<Stmt>& body, int unroll) {
  std::vector<Stmt> out;
  for (const auto& s : body) {
    if (s.kind == Stmt::Kind::While) {
      for (int i = 0; i < unroll; ++i) {
        Stmt guarded;
        guarded.kind = Stmt::Kind::If;
        guarded.loc = s.loc;
        guarded.expr = s.expr->clone();
        guarded.then_body = unroll_body(s.then_body, unroll);
        out.push_back(std::move(guarded));
      }
      continue;
    }
    Stmt copy = s.clone();
    copy.then_body = unroll_body(s.then_body, unroll);
    copy.else_body = unroll_body(s.else_body, unroll);
    out.push_back(std::move(copy));
  }
  return out;
}

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

// Name kinds visible inside one function.
struct Scope {
  const ContractIR* contract;
  std::map<std::string, VarKind> locals;  // params + declared locals

  bool is_state(const std::string& n) const {
    return !locals.count(n) && contract->find_state_var(n) != nullptr;
  }
  bool is_address(const std::string& n) const {
    auto it = locals.find(n);
    if (it != locals.end()) return it->second == VarKind::Address;
    const auto* sv = contract->find_state_var(n);
    return sv && sv->kind == VarKind::Address;
  }
};

// Reads feeding a statement.  Address values (mapping keys, msg.sender)
// carry no supply data and are not tracked; a mapping access reads the
// mapping itself, field-insensitively.
void collect_uses(const Expr& e, const Scope& sc, std::vector<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
    case Expr::Kind::BoolLit:
    case Expr::Kind::MsgSender:
      return;
    case Expr::Kind::Ident:
      if (!sc.is_address(e.name)) push_unique(out, e.name);
      return;
    case Expr::Kind::Index:
      push_unique(out, e.name);
      return;
    case Expr::Kind::Unary:
      collect_uses(*e.lhs, sc, out);
      return;
    case Expr::Kind::Binary:
      collect_uses(*e.lhs, sc, out);
      collect_uses(*e.rhs, sc, out);
      return;
  }
}

struct Flattener {
  FlatFunction& ff;
  Scope sc;

  void add(NodeKind kind, const Stmt* s,
           const std::vector<std::pair<int, bool>>& guards) {
    FlatNode n;
    n.kind = kind;
    n.stmt = s;
    n.guard_chain = guards;
    ff.nodes.push_back(std::move(n));
  }

  void fill_rw(FlatNode& n, const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::LocalDecl:
        collect_uses(*s.expr, sc, n.uses);
        n.defs.push_back(s.name);
        sc.locals.emplace(s.name, s.decl_kind);
        break;
      case Stmt::Kind::Assign:
        collect_uses(*s.expr, sc, n.uses);
        n.defs.push_back(s.lhs.name);
        break;
      case Stmt::Kind::CompoundAssign:
        collect_uses(*s.expr, sc, n.uses);
        push_unique(n.uses, s.lhs.name);  // reads what it updates
        n.defs.push_back(s.lhs.name);
        break;
      case Stmt::Kind::If:
      case Stmt::Kind::While:
        collect_uses(*s.expr, sc, n.uses);
        break;
      case Stmt::Kind::Return:
        collect_uses(*s.expr, sc, n.uses);
        break;
    }
    for (const auto& u : n.uses)
      if (sc.is_state(u)) n.state_uses.push_back(u);
    for (const auto& d : n.defs)
      if (sc.is_state(d)) n.state_defs.push_back(d);
  }

  void body(const std::vector<Stmt>& stmts,
            std::vector<std::pair<int, bool>>& guards) {
    for (const auto& s : stmts) {
      switch (s.kind) {
        case Stmt::Kind::If: {
          int idx = static_cast<int>(ff.nodes.size());
          add(NodeKind::Branch, &s, guards);
          fill_rw(ff.nodes[idx], s);
          guards.emplace_back(idx, true);
          body(s.then_body, guards);
          guards.back().second = false;
          body(s.else_body, guards);
          guards.pop_back();
          break;
        }
        case Stmt::Kind::While:
          // unreachable: loops were unrolled
          break;
        default: {
          NodeKind k = NodeKind::Assign;
          if (s.kind == Stmt::Kind::LocalDecl) k = NodeKind::Decl;
          else if (s.kind == Stmt::Kind::CompoundAssign)
            k = NodeKind::CompoundAssign;
          else if (s.kind == Stmt::Kind::Return) k = NodeKind::Return;
          int idx = static_cast<int>(ff.nodes.size());
          add(k, &s, guards);
          fill_rw(ff.nodes[idx], s);
          break;
        }
      }
    }
  }
};

FlatFunction flatten_function(const ContractIR& c, const FunctionIR& fn,
                              const GraphConfig& cfg) {
  FlatFunction ff;
  ff.fn = &fn;
  ff.unrolled = unroll_body(fn.body, cfg.unroll);
  Flattener fl{ff, Scope{&c, {}}};
  for (const auto& p : fn.params) fl.sc.locals.emplace(p.name, p.kind);
  FlatNode entry;
  entry.kind = NodeKind::Entry;
  for (const auto& p : fn.params) entry.defs.push_back(p.name);
  ff.nodes.push_back(std::move(entry));
  std::vector<std::pair<int, bool>> guards;
  fl.body(ff.unrolled, guards);
  return ff;
}

// Reaching-definitions pass over an already flattened function.
// Definition site -1 stands for the value held at function entry
// (parameters resolve to the entry node instead).
struct EdgePass {
  const FlatFunction& ff;
  const ContractIR& contract;
  size_t next = 1;
  std::map<std::string, std::set<int>> env = {};
  std::vector<PDGEdge> edges = {};
  std::vector<std::pair<std::string, int>> origins = {};

  void run() {
    for (const auto& v : contract.state_vars) env[v.name] = {-1};
    for (const auto& p : ff.fn->params) env[p.name] = {0};
    body_range(ff.unrolled);
  }

  void body_range(const std::vector<Stmt>& stmts) {
    for (const auto& s : stmts) visit(s);
  }

  void visit(const Stmt& s) {
    int idx = static_cast<int>(next++);
    const FlatNode& n = ff.nodes[idx];
    if (!n.guard_chain.empty())
      edges.push_back({n.guard_chain.back().first, idx, EdgeKind::Control});
    for (const auto& u : n.uses) {
      auto it = env.find(u);
      if (it == env.end()) continue;
      for (int def : it->second) {
        if (def < 0)
          origins.emplace_back(u, idx);
        else
          edges.push_back({def, idx, EdgeKind::Data});
      }
    }
    if (s.kind == Stmt::Kind::If) {
      auto saved = env;
      body_range(s.then_body);
      auto after_then = env;
      env = saved;
      body_range(s.else_body);
      for (auto& [name, defs] : after_then)
        env[name].insert(defs.begin(), defs.end());
      return;
    }
    for (const auto& d : n.defs) {
      bool weak = false;
      if (s.kind == Stmt::Kind::Assign || s.kind == Stmt::Kind::CompoundAssign)
        weak = s.lhs.is_mapping_access();  // other keys keep their defs
      if (weak)
        env[d].insert(idx);
      else
        env[d] = {idx};
    }
  }
};

}  // namespace

IntraResult intra_pdg(const ContractIR& contract, const FunctionIR& fn,
                      const GraphConfig& cfg) {
  FlatFunction ff = flatten_function(contract, fn, cfg);
  EdgePass ep{ff, contract};
  ep.run();
  IntraResult r;
  for (size_t i = 0; i < ff.nodes.size(); ++i)
    r.nodes.push_back(
        {static_cast<int>(i), fn.name, static_cast<int>(i), ff.nodes[i].kind});
  r.edges = std::move(ep.edges);
  r.state_origins = std::move(ep.origins);
  return r;
}

int Tsdg::gid(const std::string& function, int local) const {
  return base_id.at(function) + local;
}

const FlatNode& Tsdg::flat_node(int id) const {
  const PDGNode& n = node(id);
  return flat.at(n.function).nodes.at(n.stmt_ref);
}

std::map<int, std::vector<PDGEdge>> Tsdg::incoming_index() const {
  std::map<int, std::vector<PDGEdge>> in;
  for (const auto& e : edges) in[e.dst].push_back(e);
  return in;
}

Tsdg construct_tsdg(const ContractIR& contract, const GraphConfig& cfg) {
  const FunctionIR* bo = contract.find_function("balanceOf");
  if (!bo) throw MissingBalanceOf(contract.name);

  Tsdg g;
  g.contract = &contract;

  // cheap pre-scan: flatten everything once to index definition sites
  std::map<std::string, FlatFunction> flat_all;
  std::map<std::string, std::vector<std::pair<std::string, int>>> def_sites;
  for (const auto& fn : contract.functions) {
    FlatFunction ff = flatten_function(contract, fn, cfg);
    for (size_t i = 0; i < ff.nodes.size(); ++i)
      for (const auto& v : ff.nodes[i].state_defs)
        def_sites[v].emplace_back(fn.name, static_cast<int>(i));
    flat_all.emplace(fn.name, std::move(ff));
  }

  struct Adj {
    std::vector<std::vector<int>> in_data, in_ctl;
    std::vector<std::vector<std::string>> origins_at;
  };
  std::map<std::string, Adj> adj;
  std::map<std::pair<std::string, int>, std::set<int>> pending;
  std::set<std::tuple<int, int>> interproc_seen;

  auto build = [&](const std::string& fname) {
    if (g.base_id.count(fname)) return;
    FlatFunction& ff = flat_all.at(fname);
    EdgePass ep{ff, contract};
    ep.run();
    g.intra_builds[fname] += 1;
    int base = static_cast<int>(g.nodes.size());
    g.base_id[fname] = base;
    Adj a;
    a.in_data.resize(ff.nodes.size());
    a.in_ctl.resize(ff.nodes.size());
    a.origins_at.resize(ff.nodes.size());
    for (size_t i = 0; i < ff.nodes.size(); ++i) {
      g.nodes.push_back({base + static_cast<int>(i), fname,
                         static_cast<int>(i), ff.nodes[i].kind});
      for (const auto& v : ff.nodes[i].state_defs)
        g.var_index[v].defs.push_back(base + static_cast<int>(i));
      for (const auto& v : ff.nodes[i].state_uses)
        g.var_index[v].uses.push_back(base + static_cast<int>(i));
    }
    for (const auto& e : ep.edges) {
      g.edges.push_back({base + e.src, base + e.dst, e.kind});
      if (e.kind == EdgeKind::Data)
        a.in_data[e.dst].push_back(e.src);
      else
        a.in_ctl[e.dst].push_back(e.src);
    }
    for (const auto& [v, reader] : ep.origins) a.origins_at[reader].push_back(v);
    adj.emplace(fname, std::move(a));
    g.flat.emplace(fname, std::move(ff));
    // interproc edges recorded before this function was built
    for (size_t i = 0; i < g.flat.at(fname).nodes.size(); ++i) {
      auto it = pending.find({fname, static_cast<int>(i)});
      if (it == pending.end()) continue;
      for (int dst : it->second) {
        int src = base + static_cast<int>(i);
        if (interproc_seen.insert({src, dst}).second)
          g.edges.push_back({src, dst, EdgeKind::InterprocDefUse});
      }
      pending.erase(it);
    }
  };

  std::deque<std::pair<std::string, int>> wl;
  std::set<std::pair<std::string, int>> enqueued;
  std::set<std::string> considered;
  auto enqueue = [&](const std::string& f, int idx) {
    if (enqueued.insert({f, idx}).second) wl.emplace_back(f, idx);
  };

  build("balanceOf");
  for (size_t i = 0; i < g.flat.at("balanceOf").nodes.size(); ++i)
    if (g.flat.at("balanceOf").nodes[i].kind == NodeKind::Return) {
      g.roots.push_back(g.gid("balanceOf", static_cast<int>(i)));
      enqueue("balanceOf", static_cast<int>(i));
    }

  while (!wl.empty()) {
    auto [fname, start] = wl.front();
    wl.pop_front();
    build(fname);
    const Adj& a = adj.at(fname);

    // backward slice within the function
    std::set<int> seen;
    std::deque<int> stack{start};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      if (!seen.insert(cur).second) continue;
      for (int p : a.in_data[cur]) stack.push_back(p);
      if (cfg.track_control_origins)
        for (int p : a.in_ctl[cur]) stack.push_back(p);
    }

    for (int local : seen) {
      for (const auto& v : a.origins_at[local]) {
        int reader = g.gid(fname, local);
        auto ds = def_sites.find(v);
        if (ds != def_sites.end()) {
          for (const auto& [f2, i2] : ds->second) {
            if (g.base_id.count(f2)) {
              int src = g.gid(f2, i2);
              if (interproc_seen.insert({src, reader}).second)
                g.edges.push_back({src, reader, EdgeKind::InterprocDefUse});
            } else {
              pending[{f2, i2}].insert(reader);
            }
          }
        }
        if (considered.insert(v).second && ds != def_sites.end())
          for (const auto& [f2, i2] : ds->second) enqueue(f2, i2);
      }
    }
  }

  return g;
}

std::string export_text(const Tsdg& g) {
  std::ostringstream os;
  for (const auto& n : g.nodes)
    os << "N " << n.id << " " << n.function << " " << n.stmt_ref << " "
       << node_kind_name(n.kind) << "\n";
  std::vector<PDGEdge> es = g.edges;
  std::sort(es.begin(), es.end(), [](const PDGEdge& a, const PDGEdge& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.dst != b.dst) return a.dst < b.dst;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  for (const auto& e : es)
    os << "E " << e.src << " " << e.dst << " " << edge_kind_name(e.kind)
       << "\n";
  return os.str();
}

}  // namespace tmev::graph
