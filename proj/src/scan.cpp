#include "tmev/scan.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "tmev/errors.hpp"
#include "tmev/parser.hpp"
#include "tmev/pretty.hpp"

namespace tmev::scan {

namespace {

constexpr long kFixtureSearchCap = 2187;  // 3^7 scalar combinations
constexpr long kComboCap = 3125;          // 5^5 argument combinations

const char* kAccounts[3] = {"acct0", "acct1", "acct2"};
const int kHolderAmounts[3] = {10000, 25000, 65000};

bool is_arg_or_comp(const graph::PDGNode& n) {
  return n.kind == graph::NodeKind::Entry ||
         n.kind == graph::NodeKind::CompoundAssign;
}

bool is_bool_op(const std::string& op) {
  return op == "||" || op == "&&" || op == "==" || op == "!=" || op == "<" ||
         op == "<=" || op == ">" || op == ">=";
}

// The condition an execution must satisfy to take the `taken` side of a
// branch, as an expression; comparisons are flipped rather than wrapped
// so that `!pause` untaken reads `pause != 0`.
lang::ExprPtr constraint_expr(const lang::Expr& cond, bool taken) {
  using K = lang::Expr::Kind;
  if (taken) {
    if (cond.kind == K::Unary && cond.op == "!") return cond.clone();
    if (cond.kind == K::Binary && is_bool_op(cond.op)) return cond.clone();
    if (cond.kind == K::BoolLit) return cond.clone();
    return lang::make_binary("!=", cond.clone(), lang::make_int(0));
  }
  if (cond.kind == K::Unary && cond.op == "!")
    return constraint_expr(*cond.lhs, true);
  if (cond.kind == K::Binary) {
    static const std::map<std::string, std::string> kFlip = {
        {"==", "!="}, {"!=", "=="}, {"<", ">="},
        {">=", "<"},  {">", "<="},  {"<=", ">"}};
    auto it = kFlip.find(cond.op);
    if (it != kFlip.end())
      return lang::make_binary(it->second, cond.lhs->clone(),
                               cond.rhs->clone());
    if (cond.op == "&&" || cond.op == "||")
      return lang::make_unary("!", cond.clone());
  }
  if (cond.kind == K::BoolLit) return lang::make_bool(!cond.bool_value);
  return lang::make_binary("==", cond.clone(), lang::make_int(0));
}

void rename_state_vars(lang::Expr& e, const lang::ContractIR& contract,
                       const std::function<int(const std::string&)>& version) {
  using K = lang::Expr::Kind;
  switch (e.kind) {
    case K::Ident:
    case K::Index:
      if (contract.find_state_var(e.name))
        e.name += "_" + std::to_string(version(e.name));
      if (e.kind == K::Index && e.lhs)
        rename_state_vars(*e.lhs, contract, version);
      break;
    case K::Unary:
      rename_state_vars(*e.lhs, contract, version);
      break;
    case K::Binary:
      rename_state_vars(*e.lhs, contract, version);
      rename_state_vars(*e.rhs, contract, version);
      break;
    default:
      break;
  }
}

// Truthiness required of versioned symbols for the path to execute;
// two opposite demands on one symbol make the stitch infeasible.
void collect_truth_demand(const lang::Expr& cond, bool truthy,
                          std::map<std::string, std::set<bool>>& demanded) {
  using K = lang::Expr::Kind;
  if (cond.kind == K::Unary && cond.op == "!") {
    collect_truth_demand(*cond.lhs, !truthy, demanded);
    return;
  }
  if (cond.kind == K::Ident) {
    auto& d = demanded[cond.name];
    d.insert(truthy);
    if (d.size() == 2)
      throw InfeasibleStitch("branch conditions require " + cond.name +
                             " to be both zero and nonzero");
    return;
  }
  if (cond.kind == K::Binary) {
    if ((cond.op == "&&" && truthy) || (cond.op == "||" && !truthy)) {
      collect_truth_demand(*cond.lhs, truthy, demanded);
      collect_truth_demand(*cond.rhs, truthy, demanded);
      return;
    }
    if (cond.op == "==" || cond.op == "!=") {
      const lang::Expr* id = nullptr;
      if (cond.lhs->kind == K::Ident && cond.rhs->kind == K::IntLit &&
          cond.rhs->int_value == 0)
        id = cond.lhs.get();
      else if (cond.rhs->kind == K::Ident && cond.lhs->kind == K::IntLit &&
               cond.lhs->int_value == 0)
        id = cond.rhs.get();
      if (id) {
        bool req = (cond.op == "!=") == truthy;
        auto& d = demanded[id->name];
        d.insert(req);
        if (d.size() == 2)
          throw InfeasibleStitch("branch conditions require " + id->name +
                                 " to be both zero and nonzero");
      }
    }
  }
}

std::set<std::string> state_writes(const graph::Tsdg& g,
                                   const std::string& function) {
  std::set<std::string> w;
  auto it = g.flat.find(function);
  if (it == g.flat.end()) return w;
  for (const auto& n : it->second.nodes)
    w.insert(n.state_defs.begin(), n.state_defs.end());
  return w;
}

struct AccountDelta {
  Int pre;
  Int post;
};

// A shared multiplicative g over the accounts holding a balance before
// or after: post_a * pre_b == post_b * pre_a for every pair, and no
// empty account gains a balance.
bool shared_ratio(const std::vector<AccountDelta>& d) {
  for (const auto& a : d)
    if (a.pre == 0 && a.post != 0) return false;
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = i + 1; j < d.size(); ++j)
      if (d[i].post * d[j].pre != d[j].post * d[i].pre) return false;
  return true;
}

bool shared_difference(const std::vector<AccountDelta>& d) {
  for (size_t i = 1; i < d.size(); ++i)
    if (d[i].post - d[i].pre != d[0].post - d[0].pre) return false;
  return true;
}

}  // namespace

const char* path_class_name(PathClass c) {
  switch (c) {
    case PathClass::Candidate: return "candidate";
    case PathClass::Tsc1: return "tsc1";
    case PathClass::Tsc1AndTsc2: return "tsc1_and_tsc2";
    case PathClass::Rejected: return "rejected";
  }
  return "?";
}

PathClass path_class_from_name(const std::string& s) {
  if (s == "candidate") return PathClass::Candidate;
  if (s == "tsc1") return PathClass::Tsc1;
  if (s == "tsc1_and_tsc2") return PathClass::Tsc1AndTsc2;
  if (s == "rejected") return PathClass::Rejected;
  throw FixtureError("unknown path classification: " + s);
}

std::vector<TPath> discover_tpaths(const graph::Tsdg& g, int depth) {
  std::map<int, std::vector<int>> preds;
  for (const auto& e : g.edges) preds[e.dst].push_back(e.src);
  for (auto& [dst, v] : preds) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::vector<TPath> out;
  for (int root : g.roots) {
    std::set<int> visited{root};
    std::vector<int> walk{root};  // root .. current node
    int span = 1;                 // functions the walk passes through

    std::function<void(int)> descend = [&](int node) {
      if (is_arg_or_comp(g.node(node))) {
        TPath p;
        p.root = root;
        p.source = node;
        p.node_chain.assign(walk.rbegin(), walk.rend());
        for (int id : p.node_chain) {
          const std::string& f = g.node(id).function;
          if (p.call_sequence.empty() || p.call_sequence.back() != f)
            p.call_sequence.push_back(f);
        }
        out.push_back(std::move(p));
      }
      auto it = preds.find(node);
      if (it == preds.end()) return;
      for (int s : it->second) {
        if (visited.count(s)) continue;
        int grow = g.node(s).function != g.node(node).function ? 1 : 0;
        if (span + grow > depth) continue;
        visited.insert(s);
        walk.push_back(s);
        span += grow;
        descend(s);
        span -= grow;
        walk.pop_back();
      }
    };
    descend(root);
  }
  return out;
}

TPath stitch_execution_path(const TPath& path, const graph::Tsdg& g) {
  const lang::ContractIR& contract = *g.contract;
  TPath p = path;
  p.constraints.clear();

  std::map<std::string, std::set<std::string>> writes;
  for (const auto& f : p.call_sequence)
    if (!writes.count(f)) writes[f] = state_writes(g, f);

  std::map<std::string, std::set<bool>> demanded;
  std::set<std::pair<int, std::string>> seen;
  int call = 0;
  for (size_t i = 0; i < p.node_chain.size(); ++i) {
    int id = p.node_chain[i];
    const graph::PDGNode& node = g.node(id);
    if (i > 0 && node.function != g.node(p.node_chain[i - 1]).function) ++call;

    auto version = [&](const std::string& var) {
      int v = 0;
      for (int j = 0; j < call; ++j)
        if (writes.at(p.call_sequence[j]).count(var)) ++v;
      return v;
    };

    const graph::FlatFunction& ff = g.flat.at(node.function);
    for (auto [branch, taken] : g.flat_node(id).guard_chain) {
      lang::ExprPtr cond = ff.nodes[branch].stmt->expr->clone();
      rename_state_vars(*cond, contract, version);
      collect_truth_demand(*cond, taken, demanded);
      PathConstraint c;
      c.call_index = call;
      c.function = node.function;
      c.text = lang::pretty_expr(*constraint_expr(*cond, taken));
      if (seen.insert({c.call_index, c.text}).second)
        p.constraints.push_back(std::move(c));
    }
  }
  return p;
}

sim::ChainState make_scan_fixture(std::shared_ptr<const lang::SourceUnit> unit,
                                  const std::string& contract_name) {
  sim::TokenInstance tok = sim::make_interpreted_token(unit, contract_name);
  for (const auto& sv : tok.code->state_vars)
    if (sv.kind == lang::VarKind::MapAddressUint)
      for (int i = 0; i < 3; ++i)
        tok.mappings[sv.name][kAccounts[i]] = kHolderAmounts[i];

  sim::ChainState st;
  for (const char* a : kAccounts) st.native_accounts.insert(a);
  const std::string id = tok.code->name;
  st.tokens[id] = std::move(tok);

  auto distinct_holders = [&]() {
    Int b[3];
    try {
      for (int i = 0; i < 3; ++i)
        b[i] = sim::query_balance(st, id, kAccounts[i]);
    } catch (const SimFault&) {
      return false;
    }
    return b[0] > 0 && b[1] > 0 && b[2] > 0 && b[0] != b[1] && b[0] != b[2] &&
           b[1] != b[2];
  };
  if (distinct_holders()) return st;

  // Declared scalar state may pin balanceOf to a degenerate value (a
  // pause flag set, a zero multiplier).  Search nearby assignments,
  // declared value first, and keep the first that separates holders.
  sim::TokenInstance& t = st.tokens.at(id);
  std::vector<std::string> names;
  std::vector<std::vector<Int>> cands;
  for (const auto& sv : t.code->state_vars) {
    if (sv.kind == lang::VarKind::MapAddressUint) continue;
    Int declared = t.scalars.count(sv.name) ? t.scalars.at(sv.name) : Int(0);
    std::vector<Int> c{declared};
    for (Int v : {Int(0), Int(1)})
      if (std::find(c.begin(), c.end(), v) == c.end()) c.push_back(v);
    names.push_back(sv.name);
    cands.push_back(std::move(c));
  }

  std::vector<size_t> idx(names.size(), 0);
  for (long tried = 0; !names.empty() && tried < kFixtureSearchCap; ++tried) {
    for (size_t i = 0; i < names.size(); ++i)
      t.scalars[names[i]] = cands[i][idx[i]];
    if (distinct_holders()) return st;
    int k = static_cast<int>(idx.size()) - 1;
    while (k >= 0 && ++idx[k] == cands[k].size()) idx[k--] = 0;
    if (k < 0) break;
  }
  for (size_t i = 0; i < names.size(); ++i)
    t.scalars[names[i]] = cands[i][0];
  return st;
}

PathClass validate_tsc(TPath& path, const lang::ContractIR& contract,
                       const sim::ChainState& fixture) {
  std::string token_id;
  for (const auto& [id, t] : fixture.tokens)
    if (t.model == sim::TokenInstance::Model::Interpreted && t.code &&
        t.code->name == contract.name)
      token_id = id;
  if (token_id.empty())
    throw FixtureError("fixture holds no token for contract " + contract.name);

  std::vector<sim::Address> accounts(fixture.native_accounts.begin(),
                                     fixture.native_accounts.end());
  const sim::Address sender = accounts.front();
  const sim::Address addr_arg = accounts.size() > 1 ? accounts[1] : accounts[0];

  auto rejected = [&](const std::string& why) {
    path.classification = PathClass::Rejected;
    path.reject_reason = why;
    path.g_form.clear();
    path.witness.clear();
    return path.classification;
  };

  std::vector<std::string> calls = path.call_sequence;
  if (!calls.empty() && calls.back() == "balanceOf") calls.pop_back();
  if (calls.empty()) return rejected("no calls precede balanceOf");

  std::vector<const lang::FunctionIR*> fns;
  std::vector<std::vector<std::string>> slots;
  for (const auto& name : calls) {
    const lang::FunctionIR* f = contract.find_function(name);
    if (!f) return rejected("unknown function " + name);
    fns.push_back(f);
    for (const auto& prm : f->params) {
      if (prm.kind == lang::VarKind::Address)
        slots.push_back({addr_arg});
      else if (prm.kind == lang::VarKind::Bool)
        slots.push_back({"0", "1"});
      else
        slots.push_back({"0", "1", "2", "10", "1000"});
    }
  }

  std::map<sim::Address, Int> pre;
  Int sum0 = 0;
  for (const auto& a : accounts) {
    pre[a] = sim::query_balance(fixture, token_id, a);
    sum0 += pre[a];
  }

  int strength = 0;  // 1 = tsc1, 2 = tsc1_and_tsc2
  std::vector<WitnessCall> witness;
  std::string g_form;
  bool any_ok = false;
  std::string first_fault;

  std::vector<size_t> idx(slots.size(), 0);
  for (long tried = 0; tried < kComboCap; ++tried) {
    sim::ChainState st = fixture;
    std::vector<WitnessCall> combo;
    bool fault = false;
    size_t slot = 0;
    for (size_t ci = 0; ci < calls.size() && !fault; ++ci) {
      WitnessCall wc{calls[ci], {}};
      for (size_t pi = 0; pi < fns[ci]->params.size(); ++pi, ++slot)
        wc.args.push_back(slots[slot][idx[slot]]);
      try {
        sim::token_call(st, token_id, sender, wc.function, wc.args);
      } catch (const SimFault& e) {
        fault = true;
        if (first_fault.empty()) first_fault = e.what();
      }
      combo.push_back(std::move(wc));
    }

    if (!fault) {
      std::vector<AccountDelta> deltas;
      Int sum1 = 0;
      bool read_ok = true;
      try {
        for (const auto& a : accounts) {
          Int b = sim::query_balance(st, token_id, a);
          sum1 += b;
          if (pre[a] != 0 || b != 0) deltas.push_back({pre[a], b});
        }
      } catch (const SimFault& e) {
        read_ok = false;
        if (first_fault.empty()) first_fault = e.what();
      }
      if (read_ok) {
        any_ok = true;
        if (sum1 != sum0) {
          int cls = 1;
          std::string g;
          if (shared_ratio(deltas)) {
            cls = 2;
            g = "ratio";
          } else if (shared_difference(deltas)) {
            cls = 2;
            g = "difference";
          }
          if (cls > strength) {
            strength = cls;
            witness = combo;
            g_form = g;
          }
          if (strength == 2) break;
        }
      }
    }

    int k = static_cast<int>(idx.size()) - 1;
    while (k >= 0 && ++idx[k] == slots[k].size()) idx[k--] = 0;
    if (k < 0) break;
  }

  if (strength == 0)
    return rejected(any_ok
                        ? "no argument in the search set changes total supply"
                        : "every simulated execution faulted: " + first_fault);
  path.classification =
      strength == 2 ? PathClass::Tsc1AndTsc2 : PathClass::Tsc1;
  path.g_form = g_form;
  path.witness = std::move(witness);
  path.reject_reason.clear();
  return path.classification;
}

TscReport scan_contract(const std::string& source, const ScanOptions& opt,
                        const std::string& source_name) {
  auto unit =
      std::make_shared<const lang::SourceUnit>(lang::parse(source, source_name));
  const lang::ContractIR& contract = unit->contracts.front();
  graph::Tsdg g = graph::construct_tsdg(contract, opt.graph);

  TscReport rep;
  rep.contract = contract.name;

  sim::ChainState fixture;
  bool have_fixture = false;
  for (const TPath& found : discover_tpaths(g, opt.depth)) {
    TPath p;
    try {
      p = stitch_execution_path(found, g);
    } catch (const InfeasibleStitch& e) {
      p = found;
      p.classification = PathClass::Rejected;
      p.reject_reason = e.what();
      rep.tpaths.push_back(std::move(p));
      continue;
    }
    if (!have_fixture) {
      fixture = make_scan_fixture(unit, contract.name);
      have_fixture = true;
    }
    validate_tsc(p, contract, fixture);
    rep.tpaths.push_back(std::move(p));
  }

  for (const TPath& p : rep.tpaths) {
    ++rep.tsc_kind_summary[path_class_name(p.classification)];
    if (p.classification == PathClass::Tsc1 ||
        p.classification == PathClass::Tsc1AndTsc2)
      rep.tsc_token = true;
  }
  return rep;
}

}  // namespace tmev::scan
