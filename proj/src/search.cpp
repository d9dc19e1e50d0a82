#include "tmev/search.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tmev/errors.hpp"
#include "tmev/parser.hpp"

namespace tmev::search {

using sim::Address;
using sim::ChainState;
using sim::PoolInstance;
using sim::TokenInstance;

namespace {

constexpr const char* kTemplateNames[] = {
    "B0",       "B1",      "B2_minus", "B2_plus",
    "D1_minus", "D1_plus", "D2_minus", "D2_plus"};

const char* slot_name(Slot s) {
  switch (s) {
    case Slot::PoolP: return "pool_p";
    case Slot::PoolQ: return "pool_q";
    case Slot::PoolZ: return "pool_z";
    case Slot::Token: return "token";
  }
  return "?";
}

Leg leg(Actor a, Slot s, Action c) { return Leg{a, s, c}; }

bool is_cpmm(PoolInstance::Kind k) {
  return k == PoolInstance::Kind::BalanceCpmm ||
         k == PoolInstance::Kind::ReserveCpmm;
}

std::vector<Leg> assembled_legs(const Template& t, bool extended) {
  std::vector<Leg> out;
  if (extended)
    out.push_back(leg(Actor::Searcher, Slot::PoolZ, Action::SwapXY));
  out.insert(out.end(), t.legs.begin(), t.legs.end());
  if (extended)
    out.push_back(leg(Actor::Searcher, Slot::PoolZ, Action::SwapYX));
  return out;
}

// Searcher amounts are named by input token role and leg position:
// dX0, dY2, dZ0, ...  The z venue pairs (Z, Y), so SwapXY there takes Z.
std::vector<std::string> searcher_symbols(const std::vector<Leg>& legs) {
  std::vector<std::string> out;
  for (size_t i = 0; i < legs.size(); ++i) {
    if (legs[i].actor != Actor::Searcher) continue;
    char role = legs[i].action == Action::SwapYX ? 'Y'
                : legs[i].slot == Slot::PoolZ    ? 'Z'
                                                 : 'X';
    out.push_back(std::string("d") + role + std::to_string(i));
  }
  return out;
}

// ---- static feasibility over a bounded range -------------------------------

std::optional<Int> eval_const(const lang::Expr& e,
                              const std::map<std::string, Int>& env) {
  using K = lang::Expr::Kind;
  switch (e.kind) {
    case K::IntLit: return e.int_value;
    case K::BoolLit: return Int(e.bool_value ? 1 : 0);
    case K::Ident: {
      auto it = env.find(e.name);
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case K::MsgSender:
    case K::Index: return std::nullopt;
    case K::Unary: {
      auto v = eval_const(*e.lhs, env);
      if (!v) return std::nullopt;
      if (e.op == "!") return Int(*v == 0 ? 1 : 0);
      return -*v;
    }
    case K::Binary: {
      auto a = eval_const(*e.lhs, env);
      auto b = eval_const(*e.rhs, env);
      if (!a || !b) return std::nullopt;
      const std::string& op = e.op;
      if (op == "||") return Int((*a != 0 || *b != 0) ? 1 : 0);
      if (op == "&&") return Int((*a != 0 && *b != 0) ? 1 : 0);
      if (op == "==") return Int(*a == *b ? 1 : 0);
      if (op == "!=") return Int(*a != *b ? 1 : 0);
      if (op == "<") return Int(*a < *b ? 1 : 0);
      if (op == "<=") return Int(*a <= *b ? 1 : 0);
      if (op == ">") return Int(*a > *b ? 1 : 0);
      if (op == ">=") return Int(*a >= *b ? 1 : 0);
      if (op == "+") return *a + *b;
      if (op == "-") return *a - *b;
      if (op == "*") return *a * *b;
      if (op == "/") {
        if (*b == 0) return std::nullopt;
        return floor_div(*a, *b);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

void collect_idents(const lang::Expr& e, std::set<std::string>& out) {
  if (e.kind == lang::Expr::Kind::Ident) out.insert(e.name);
  if (e.lhs) collect_idents(*e.lhs, out);
  if (e.rhs) collect_idents(*e.rhs, out);
}

// Conjunction satisfiable with every free variable in {0, 1, 2}.
// Anything the little evaluator cannot decide passes.
bool constraints_satisfiable(const std::vector<scan::PathConstraint>& cs) {
  std::vector<lang::ExprPtr> exprs;
  std::set<std::string> vars;
  for (const auto& c : cs) {
    try {
      exprs.push_back(lang::parse_expression(c.text));
    } catch (const SyntaxError&) {
      return true;
    }
    collect_idents(*exprs.back(), vars);
  }
  if (exprs.empty()) return true;
  if (vars.size() > 6) return true;
  std::vector<std::string> names(vars.begin(), vars.end());
  std::vector<int> a(names.size(), 0);
  for (;;) {
    std::map<std::string, Int> env;
    for (size_t i = 0; i < names.size(); ++i) env[names[i]] = a[i];
    bool all = true;
    for (const auto& e : exprs) {
      auto v = eval_const(*e, env);
      if (!v) return true;
      if (*v == 0) {
        all = false;
        break;
      }
    }
    if (all) return true;
    int k = static_cast<int>(a.size()) - 1;
    while (k >= 0 && ++a[k] == 3) a[k--] = 0;
    if (k < 0) return false;
  }
}

// ---- constraint assembly ----------------------------------------------------

void credit_token(TokenInstance& t, const Address& a, const Int& amount) {
  switch (t.model) {
    case TokenInstance::Model::BuiltinErc20: t.balances[a] += amount; break;
    case TokenInstance::Model::BuiltinRebase:
      if (t.scale > 0) t.base[a] += ceil_div(amount * sim::rebase_unit(), t.scale);
      break;
    case TokenInstance::Model::Interpreted:
      if (!t.code) break;
      for (const auto& sv : t.code->state_vars)
        if (sv.kind == lang::VarKind::MapAddressUint) t.mappings[sv.name][a] = amount;
      break;
  }
}

Int pricing_y_depth(const ChainState& st, const std::string& pool_id,
                    const PoolInstance& p) {
  if (p.kind == PoolInstance::Kind::ReserveCpmm) return p.ry;
  return sim::query_balance(st, p.token_y, pool_id);
}

std::string join_prefix(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) {
    out += s;
    out += ',';
  }
  return out;
}

// Trigger call and the same-sender calls expected before it.  Empty
// trigger means the constraint has no watchable key.
std::pair<std::string, std::vector<std::string>> sequence_key(
    const StaticConstraint& sc) {
  if (sc.template_id == TemplateId::B0) return {"swap_xy", {}};
  std::vector<std::string> calls = sc.tpath.call_sequence;
  if (!calls.empty() && calls.back() == "balanceOf") calls.pop_back();
  if (calls.empty()) return {"", {}};
  std::string trigger = calls.back();
  calls.pop_back();
  return {trigger, calls};
}

std::string watch_target(const StaticConstraint& sc) {
  if (sc.template_id == TemplateId::B0) return sc.pool_bindings.at("pool_p");
  return sc.token;
}

void render_static(StaticConstraint& sc, const ChainState& st) {
  const Template& tmpl = template_catalog()[static_cast<int>(sc.template_id)];
  auto legs = assembled_legs(tmpl, sc.extended);
  sc.symbolic_vars = searcher_symbols(legs);
  size_t sym = 0;
  for (size_t i = 0; i < legs.size(); ++i) {
    std::ostringstream os;
    os << "tx" << i << ": ";
    if (legs[i].actor == Actor::Victim) {
      if (legs[i].action == Action::TscCall) {
        auto [trigger, prefix] = sequence_key(sc);
        os << "victim " << sc.token << "." << trigger;
        if (!prefix.empty()) os << " after " << join_prefix(prefix);
      } else {
        os << "victim swap_xy(" << sc.pool_bindings.at("pool_p") << ")";
      }
    } else {
      const std::string& pool = sc.pool_bindings.at(slot_name(legs[i].slot));
      bool xy = legs[i].action == Action::SwapXY;
      const PoolInstance& p = st.pools.at(pool);
      bool lend = p.kind == PoolInstance::Kind::LendingFixed;
      os << (xy ? (lend ? "lend_borrow(" : "swap_xy(")
                : (lend ? "lend_repay(" : "swap_yx("))
         << pool << ", " << sc.symbolic_vars[sym++] << ")";
    }
    sc.relations.push_back(os.str());
  }
  for (const auto& c : sc.tpath.constraints) {
    std::ostringstream os;
    os << "require[" << c.call_index << "]: " << c.text;
    sc.relations.push_back(os.str());
  }
  if (!sc.tpath.g_form.empty())
    sc.relations.push_back("supply: " + sc.tpath.g_form);
  sc.objective = "maximize final_x(searcher) - initial_x(searcher)";
}

// ---- staged bundle execution -------------------------------------------------

Int quote_out(const ChainState& st, const std::string& pool_id, bool x_to_y,
              const Int& in) {
  const PoolInstance& p = st.pools.at(pool_id);
  if (in <= 0) return 0;
  if (p.kind == PoolInstance::Kind::LendingFixed) {
    if (p.price_num <= 0 || p.price_den <= 0) return 0;
    return x_to_y ? floor_div(in * p.price_num, p.price_den)
                  : floor_div(in * p.price_den, p.price_num);
  }
  Int rx, ry;
  if (p.kind == PoolInstance::Kind::ReserveCpmm) {
    rx = p.rx;
    ry = p.ry;
  } else {
    rx = sim::query_balance(st, p.token_x, pool_id);
    ry = sim::query_balance(st, p.token_y, pool_id);
  }
  if (rx <= 0 || ry <= 0) return 0;
  Int r_in = x_to_y ? rx : ry;
  Int r_out = x_to_y ? ry : rx;
  Int eff = floor_div(in * (10000 - p.fee_bps), 10000);
  return floor_div(r_out * eff, r_in + eff);
}

// Smallest input whose quoted output covers `need`; -1 when no input
// can (CPMM output is bounded by the reserve).
Int min_input_for(const ChainState& st, const std::string& pool_id,
                  bool x_to_y, const Int& need) {
  if (need <= 0) return 0;
  Int hi = 1;
  for (int guard = 0; quote_out(st, pool_id, x_to_y, hi) < need; ++guard) {
    if (guard > 200) return -1;
    hi *= 2;
  }
  Int lo = 1;
  while (lo < hi) {
    Int mid = (lo + hi) / 2;
    if (quote_out(st, pool_id, x_to_y, mid) >= need)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

Int exec_swap(ChainState& st, const std::string& pool_id, const Address& sender,
              bool x_to_y, const Int& amount) {
  const PoolInstance& p = st.pools.at(pool_id);
  if (p.kind == PoolInstance::Kind::LendingFixed)
    return sim::lend_exchange(st, pool_id, sender, x_to_y, amount);
  return x_to_y ? sim::swap_xy(st, pool_id, sender, amount)
                : sim::swap_yx(st, pool_id, sender, amount);
}

std::string swap_fn(const ChainState& st, const std::string& pool_id,
                    bool x_to_y) {
  bool lend =
      st.pools.at(pool_id).kind == PoolInstance::Kind::LendingFixed;
  if (lend) return x_to_y ? "lend_borrow" : "lend_repay";
  return x_to_y ? "swap_xy" : "swap_yx";
}

void run_tx(ChainState& st, const sim::Tx& tx) {
  auto arg = [&](size_t i) -> Int {
    if (i >= tx.args.size()) throw RuntimeFault(tx.function + ": missing argument");
    return from_dec(tx.args[i]);
  };
  if (st.pools.count(tx.target)) {
    if (tx.function == "swap_xy") { sim::swap_xy(st, tx.target, tx.sender, arg(0)); return; }
    if (tx.function == "swap_yx") { sim::swap_yx(st, tx.target, tx.sender, arg(0)); return; }
    if (tx.function == "lend_borrow") { sim::lend_exchange(st, tx.target, tx.sender, true, arg(0)); return; }
    if (tx.function == "lend_repay") { sim::lend_exchange(st, tx.target, tx.sender, false, arg(0)); return; }
    if (tx.function == "add_liquidity") {
      sim::add_liquidity_inactive(st, tx.target, tx.sender, static_cast<int>(arg(0)), arg(1));
      return;
    }
    if (tx.function == "remove_liquidity") {
      sim::remove_liquidity_inactive(st, tx.target, tx.sender, static_cast<int>(arg(0)), arg(1));
      return;
    }
    throw RuntimeFault("unknown pool function: " + tx.function);
  }
  sim::token_call(st, tx.target, tx.sender, tx.function, tx.args);
}

struct EvalOutcome {
  bool ok = false;
  Int profit = 0;     // raw searcher token_x delta
  Int objective = 0;  // profit, plus valued residual token_y if enabled
  std::vector<sim::Tx> bundle;
  std::map<std::string, Int> args;
};

struct VenueIds {
  std::string p, q, z, xtok, ztok;
};

VenueIds resolve_venues(const DynamicConstraint& dc) {
  VenueIds v;
  const auto& b = dc.sc.pool_bindings;
  if (auto it = b.find("pool_p"); it != b.end()) v.p = it->second;
  if (auto it = b.find("pool_q"); it != b.end()) v.q = it->second;
  if (auto it = b.find("pool_z"); it != b.end()) v.z = it->second;
  const std::string& any = v.p.empty() ? v.q : v.p;
  v.xtok = dc.state.pools.at(any).token_x;
  if (!v.z.empty()) v.ztok = dc.state.pools.at(v.z).token_x;
  return v;
}

EvalOutcome build_and_eval(const DynamicConstraint& dc,
                           const SearchOptions& opt, const Int& v) {
  EvalOutcome ev;
  if (v < 1) return ev;
  ChainState st = dc.state;
  const Address& s = opt.searcher;
  const StaticConstraint& sc = dc.sc;
  const VenueIds ven = resolve_venues(dc);
  const std::string& ytok =
      sc.template_id == TemplateId::B0 ? st.pools.at(ven.p).token_y : sc.token;

  Int x0 = sim::query_balance(st, ven.xtok, s);
  Int y0 = sim::query_balance(st, ytok, s);
  Int z0 = sc.extended ? sim::query_balance(st, ven.ztok, s) : 0;

  try {
    auto push = [&](const std::string& pool, bool xy, const Int& amt,
                    const std::string& sym) -> Int {
      Int out = exec_swap(st, pool, s, xy, amt);
      ev.bundle.push_back({s, pool, swap_fn(st, pool, xy), {to_dec(amt)}});
      ev.args[sym] = amt;
      return out;
    };
    auto victims = [&] {
      for (const auto& tx : dc.victim_txs) {
        run_tx(st, tx);
        ev.bundle.push_back(tx);
      }
    };
    auto y_gain = [&]() { return sim::query_balance(st, ytok, s) - y0; };

    switch (sc.template_id) {
      case TemplateId::B0:
      case TemplateId::B1:
      case TemplateId::D1_plus:
      case TemplateId::D2_plus: {
        const std::string& buy =
            sc.template_id == TemplateId::D2_plus ? ven.q : ven.p;
        const std::string& sell =
            (sc.template_id == TemplateId::B0 || sc.template_id == TemplateId::B1)
                ? ven.p
                : ven.q;
        push(buy, true, v, "dX0");
        victims();
        Int gain = y_gain();
        if (gain < 1) return ev;
        push(sell, false, gain, "dY2");
        break;
      }
      case TemplateId::B2_plus:
      case TemplateId::B2_minus: {
        const std::string& buy =
            sc.template_id == TemplateId::B2_plus ? ven.p : ven.q;
        const std::string& sell =
            sc.template_id == TemplateId::B2_plus ? ven.q : ven.p;
        victims();
        push(buy, true, v, "dX1");
        Int gain = y_gain();
        if (gain < 1) return ev;
        push(sell, false, gain, "dY2");
        break;
      }
      case TemplateId::D1_minus:
      case TemplateId::D2_minus: {
        const std::string& sell =
            sc.template_id == TemplateId::D1_minus ? ven.p : ven.q;
        Int zbuy = 0;
        if (sc.extended) {
          Int g = push(ven.z, true, v, "dZ0");
          if (g < 1) return ev;
          push(sell, false, g, "dY1");
        } else {
          push(sell, false, v, "dY0");
        }
        victims();
        Int need_y = 0;
        if (sc.extended) {
          Int zdef = z0 - sim::query_balance(st, ven.ztok, s);
          zbuy = min_input_for(st, ven.z, false, zdef);
          if (zbuy < 0) return ev;
          need_y += zbuy;
        }
        Int ydef = y0 - sim::query_balance(st, ytok, s);
        if (ydef > 0) need_y += ydef;
        if (need_y < 1) return ev;
        Int dx2 = min_input_for(st, ven.q, true, need_y);
        if (dx2 < 1) return ev;
        push(ven.q, true, dx2, sc.extended ? "dX3" : "dX2");
        if (sc.extended && zbuy >= 1) push(ven.z, false, zbuy, "dY4");
        break;
      }
    }

    if (sim::query_balance(st, ytok, s) < y0) return ev;
    if (sc.extended && sim::query_balance(st, ven.ztok, s) < z0) return ev;
    ev.profit = sim::query_balance(st, ven.xtok, s) - x0;
    ev.objective = ev.profit;
    if (opt.value_residual_y) {
      Int extra = sim::query_balance(st, ytok, s) - y0;
      const std::string& venue = ven.q.empty() ? ven.p : ven.q;
      if (extra > 0) ev.objective += quote_out(st, venue, false, extra);
    }
    ev.ok = true;
  } catch (const SimFault&) {
    return EvalOutcome{};
  }
  return ev;
}

std::string first_input_token(const DynamicConstraint& dc) {
  const VenueIds ven = resolve_venues(dc);
  if (dc.sc.extended) return dc.state.pools.at(dc.sc.pool_bindings.at("pool_z")).token_x;
  const Template& tmpl =
      template_catalog()[static_cast<int>(dc.sc.template_id)];
  for (const auto& l : tmpl.legs) {
    if (l.actor != Actor::Searcher) continue;
    if (l.action == Action::SwapYX)
      return dc.sc.template_id == TemplateId::B0
                 ? dc.state.pools.at(ven.p).token_y
                 : dc.sc.token;
    return ven.xtok;
  }
  return ven.xtok;
}

}  // namespace

const char* template_name(TemplateId id) {
  return kTemplateNames[static_cast<int>(id)];
}

TemplateId template_from_name(const std::string& s) {
  for (int i = 0; i < 8; ++i)
    if (s == kTemplateNames[i]) return static_cast<TemplateId>(i);
  throw FixtureError("unknown template id: " + s);
}

const std::vector<Template>& template_catalog() {
  static const std::vector<Template> catalog = [] {
    using A = Actor;
    using S = Slot;
    using C = Action;
    std::vector<Template> v;
    v.push_back({TemplateId::B0,
                 {leg(A::Searcher, S::PoolP, C::SwapXY),
                  leg(A::Victim, S::PoolP, C::SwapXY),
                  leg(A::Searcher, S::PoolP, C::SwapYX)},
                 false});
    v.push_back({TemplateId::B1,
                 {leg(A::Searcher, S::PoolP, C::SwapXY),
                  leg(A::Victim, S::Token, C::TscCall),
                  leg(A::Searcher, S::PoolP, C::SwapYX)},
                 false});
    v.push_back({TemplateId::B2_minus,
                 {leg(A::Victim, S::Token, C::TscCall),
                  leg(A::Searcher, S::PoolQ, C::SwapXY),
                  leg(A::Searcher, S::PoolP, C::SwapYX)},
                 false});
    v.push_back({TemplateId::B2_plus,
                 {leg(A::Victim, S::Token, C::TscCall),
                  leg(A::Searcher, S::PoolP, C::SwapXY),
                  leg(A::Searcher, S::PoolQ, C::SwapYX)},
                 false});
    v.push_back({TemplateId::D1_minus,
                 {leg(A::Searcher, S::PoolP, C::SwapYX),
                  leg(A::Victim, S::Token, C::TscCall),
                  leg(A::Searcher, S::PoolQ, C::SwapXY)},
                 true});
    v.push_back({TemplateId::D1_plus,
                 {leg(A::Searcher, S::PoolP, C::SwapXY),
                  leg(A::Victim, S::Token, C::TscCall),
                  leg(A::Searcher, S::PoolQ, C::SwapYX)},
                 false});
    v.push_back({TemplateId::D2_minus,
                 {leg(A::Searcher, S::PoolQ, C::SwapYX),
                  leg(A::Victim, S::Token, C::TscCall),
                  leg(A::Searcher, S::PoolQ, C::SwapXY)},
                 true});
    v.push_back({TemplateId::D2_plus,
                 {leg(A::Searcher, S::PoolQ, C::SwapXY),
                  leg(A::Victim, S::Token, C::TscCall),
                  leg(A::Searcher, S::PoolQ, C::SwapYX)},
                 false});
    return v;
  }();
  return catalog;
}

bool pool_is_pitex(const ChainState& st, const std::string& pool_id,
                   int tick) {
  auto pit = st.pools.find(pool_id);
  if (pit == st.pools.end()) return false;
  const PoolInstance& p = pit->second;
  if (!st.tokens.count(p.token_y)) return false;
  Int ry = pricing_y_depth(st, pool_id, p);
  if (ry <= 0) return false;
  Int dy = std::max<Int>(1, ry / 1000);
  Int dy2 = std::max<Int>(1, ry / 100);

  ChainState probe = st;
  const Address prober = "__pitex_prober__";
  probe.native_accounts.insert(prober);
  credit_token(probe.tokens.at(p.token_y), prober, dy + dy2 + 1);
  try {
    return sim::pitex_insensitive(probe, pool_id, dy, dy2, tick);
  } catch (const SimFault&) {
    return false;
  }
}

scan::TscReport builtin_rebase_report(const std::string& token_id) {
  scan::TscReport r;
  r.contract = token_id;
  r.tsc_token = true;
  for (const char* fn : {"rebase", "rebase_div"}) {
    scan::TPath p;
    p.call_sequence = {fn, "balanceOf"};
    p.classification = scan::PathClass::Tsc1AndTsc2;
    p.g_form = "ratio";
    r.tpaths.push_back(std::move(p));
    r.tsc_kind_summary["tsc1_and_tsc2"] += 1;
  }
  return r;
}

std::vector<StaticConstraint> gen_static_constraints(
    const std::vector<scan::TscReport>& reports, const ChainState& st) {
  std::vector<StaticConstraint> out;
  std::map<std::string, bool> pitex_memo;
  auto insensitive = [&](const std::string& id) {
    auto it = pitex_memo.find(id);
    if (it == pitex_memo.end())
      it = pitex_memo.emplace(id, pool_is_pitex(st, id)).first;
    return it->second;
  };

  for (const auto& [pid, p] : st.pools) {
    if (!is_cpmm(p.kind)) continue;
    StaticConstraint sc;
    sc.template_id = TemplateId::B0;
    sc.token = p.token_y;
    sc.pool_bindings["pool_p"] = pid;
    render_static(sc, st);
    out.push_back(std::move(sc));
  }

  for (const auto& rep : reports) {
    if (!rep.tsc_token) continue;
    const std::string& token = rep.contract;
    if (!st.tokens.count(token)) continue;

    std::vector<std::string> p_any, p_sensitive, q_ins, z_pools;
    for (const auto& [pid, p] : st.pools) {
      if (p.token_y != token) continue;
      bool ins = (is_cpmm(p.kind) ||
                  p.kind == PoolInstance::Kind::LendingFixed) &&
                 insensitive(pid);
      if (is_cpmm(p.kind)) {
        p_any.push_back(pid);
        z_pools.push_back(pid);
        if (!ins) p_sensitive.push_back(pid);
      }
      if (ins && p.kind != PoolInstance::Kind::BalanceCpmm) q_ins.push_back(pid);
    }

    for (const auto& path : rep.tpaths) {
      if (path.classification != scan::PathClass::Tsc1 &&
          path.classification != scan::PathClass::Tsc1AndTsc2)
        continue;
      if (!constraints_satisfiable(path.constraints)) continue;

      auto emit = [&](TemplateId id, const std::string& p_id,
                      const std::string& q_id) {
        StaticConstraint sc;
        sc.template_id = id;
        sc.token = token;
        sc.tpath = path;
        if (!p_id.empty()) sc.pool_bindings["pool_p"] = p_id;
        if (!q_id.empty()) sc.pool_bindings["pool_q"] = q_id;
        render_static(sc, st);
        out.push_back(sc);

        const Template& tmpl = template_catalog()[static_cast<int>(id)];
        if (!tmpl.extendable) return;
        const std::string& xtok =
            st.pools.at(p_id.empty() ? q_id : p_id).token_x;
        for (const auto& z : z_pools) {
          if (z == p_id || z == q_id) continue;
          if (st.pools.at(z).token_x == xtok) continue;
          StaticConstraint ext = out.back();
          ext.extended = true;
          ext.relations.clear();
          ext.pool_bindings["pool_z"] = z;
          render_static(ext, st);
          out.push_back(std::move(ext));
        }
      };

      for (const auto& p_id : p_sensitive) emit(TemplateId::B1, p_id, "");
      for (const auto& q_id : q_ins) {
        for (const auto& p_id : p_any) {
          if (st.pools.at(p_id).token_x != st.pools.at(q_id).token_x) continue;
          emit(TemplateId::B2_minus, p_id, q_id);
          emit(TemplateId::B2_plus, p_id, q_id);
          emit(TemplateId::D1_minus, p_id, q_id);
          emit(TemplateId::D1_plus, p_id, q_id);
        }
        emit(TemplateId::D2_minus, "", q_id);
        emit(TemplateId::D2_plus, "", q_id);
      }
    }
  }
  return out;
}

std::vector<WatchEntry> build_watchlist(
    const std::vector<StaticConstraint>& constraints) {
  std::map<std::string, WatchEntry> grouped;
  for (const auto& sc : constraints) {
    auto [trigger, prefix] = sequence_key(sc);
    if (trigger.empty()) continue;
    const std::string target = watch_target(sc);
    std::string key = target + '\x1f' + trigger + '\x1f' + join_prefix(prefix);
    WatchEntry& e = grouped[key];
    if (e.target.empty()) {
      e.target = target;
      e.function = trigger;
      e.call_prefix = prefix;
    }
    e.constraints.push_back(sc);
  }
  std::vector<WatchEntry> out;
  out.reserve(grouped.size());
  for (auto& [k, e] : grouped) out.push_back(std::move(e));
  return out;
}

std::vector<Match> watch_and_match(const std::vector<MempoolTx>& stream,
                                   const std::vector<WatchEntry>& watchlist,
                                   int window) {
  std::vector<Match> out;
  for (size_t i = 0; i < stream.size(); ++i) {
    const MempoolTx& cand = stream[i];
    for (const auto& entry : watchlist) {
      if (cand.tx.target != entry.target || cand.tx.function != entry.function)
        continue;
      std::vector<MempoolTx> prefix;
      bool complete = true;
      int need = static_cast<int>(entry.call_prefix.size()) - 1;
      for (int j = static_cast<int>(i) - 1;
           need >= 0 && j >= 0 && j >= static_cast<int>(i) - window; --j) {
        const MempoolTx& back = stream[j];
        if (back.tx.target == entry.target &&
            back.tx.sender == cand.tx.sender &&
            back.tx.function == entry.call_prefix[need]) {
          prefix.push_back(back);
          --need;
        }
      }
      if (need >= 0) complete = false;
      if (!complete) continue;
      std::reverse(prefix.begin(), prefix.end());
      out.push_back({cand, std::move(prefix), entry});
    }
  }
  return out;
}

DynamicConstraint instantiate_dynamic(const StaticConstraint& sc,
                                      const Match& m, const ChainState& st) {
  for (const auto& [slot, pid] : sc.pool_bindings)
    if (!st.pools.count(pid))
      throw StaleState("pool " + pid + " bound to " + slot +
                       " is missing from the fixture");
  if (sc.template_id != TemplateId::B0 && !st.tokens.count(sc.token))
    throw StaleState("token " + sc.token + " is missing from the fixture");

  DynamicConstraint dc;
  dc.sc = sc;
  dc.state = st;
  for (const auto& ptx : m.prefix) dc.victim_txs.push_back(ptx.tx);
  dc.victim_txs.push_back(m.trigger.tx);
  dc.victim_tx_id = m.trigger.id;

  for (size_t k = 0; k < dc.victim_txs.size(); ++k) {
    const auto& tx = dc.victim_txs[k];
    for (size_t j = 0; j < tx.args.size(); ++j) {
      try {
        Int v = from_dec(tx.args[j]);
        dc.bound["v" + std::to_string(k) + "_arg" + std::to_string(j)] = v;
        if (k + 1 == dc.victim_txs.size() && !dc.bound.count("t"))
          dc.bound["t"] = v;
      } catch (const std::exception&) {
      }
    }
  }
  for (const auto& [slot, pid] : sc.pool_bindings) {
    const PoolInstance& p = st.pools.at(pid);
    switch (p.kind) {
      case PoolInstance::Kind::ReserveCpmm:
        dc.bound[slot + "_rx"] = p.rx;
        dc.bound[slot + "_ry"] = p.ry;
        break;
      case PoolInstance::Kind::LendingFixed:
        dc.bound[slot + "_num"] = p.price_num;
        dc.bound[slot + "_den"] = p.price_den;
        break;
      default:
        dc.bound[slot + "_bx"] = sim::query_balance(st, p.token_x, pid);
        dc.bound[slot + "_by"] = sim::query_balance(st, p.token_y, pid);
        break;
    }
  }
  dc.free_symbols = sc.symbolic_vars;
  return dc;
}

std::optional<MevPlan> solve(const DynamicConstraint& dc,
                             const SearchOptions& opt) {
  Int avail =
      sim::query_balance(dc.state, first_input_token(dc), opt.searcher);
  Int hi = std::min(opt.budget, avail);
  if (hi < 1) return std::nullopt;

  int evals = 0;
  std::map<Int, std::optional<Int>> memo;
  auto objective_at = [&](const Int& x) -> std::optional<Int> {
    auto it = memo.find(x);
    if (it != memo.end()) return it->second;
    if (++evals > opt.max_evals)
      throw SolverTimeout("hit the evaluation cap of " +
                          std::to_string(opt.max_evals));
    EvalOutcome out = build_and_eval(dc, opt, x);
    std::optional<Int> r =
        out.ok ? std::optional<Int>(out.objective) : std::nullopt;
    memo.emplace(x, r);
    return r;
  };

  Int best_x = 0;
  std::optional<Int> best;
  auto consider = [&](const Int& x) {
    auto p = objective_at(x);
    if (!p) return;
    if (!best || *p > *best || (*p == *best && x < best_x)) {
      best = *p;
      best_x = x;
    }
  };

  Int a = 1, b = hi;
  consider(a);
  consider(b);
  for (int it = 0; it < 256 && b - a > 8; ++it) {
    Int m1 = a + (b - a) * 382 / 1000;
    Int m2 = a + (b - a) * 618 / 1000;
    auto p1 = objective_at(m1);
    auto p2 = objective_at(m2);
    consider(m1);
    consider(m2);
    bool right_wins = p2 && (!p1 || *p2 > *p1);
    if (right_wins)
      a = m1;
    else
      b = m2;
  }
  for (Int x = a; x <= b; ++x) consider(x);

  for (int r = 0; r < opt.refine_iters; ++r) {
    if (!best) break;
    Int prev = *best;
    Int lo = std::max<Int>(1, best_x - 50);
    Int hi2 = std::min<Int>(hi, best_x + 50);
    for (Int x = lo; x <= hi2; ++x) consider(x);
    if (*best - prev < 1) break;
  }

  if (!best || *best <= 0) return std::nullopt;

  EvalOutcome out = build_and_eval(dc, opt, best_x);
  if (!out.ok) return std::nullopt;
  sim::BundleResult replay = sim::exec_bundle(dc.state, out.bundle);
  if (replay.reverted) return std::nullopt;
  const VenueIds ven = resolve_venues(dc);
  Int replay_profit =
      sim::query_balance(replay.state, ven.xtok, opt.searcher) -
      sim::query_balance(dc.state, ven.xtok, opt.searcher);
  if (replay_profit != out.profit) return std::nullopt;
  if (replay_profit <= 0 && out.objective <= 0) return std::nullopt;

  MevPlan plan;
  plan.template_id = dc.sc.template_id;
  plan.token = dc.sc.token;
  plan.victim_tx_id = dc.victim_tx_id;
  plan.searcher = opt.searcher;
  plan.pool_bindings = dc.sc.pool_bindings;
  plan.bundle = std::move(out.bundle);
  plan.solved_args = std::move(out.args);
  plan.profit = replay_profit;
  return plan;
}

const MevPlan* tournament(const std::vector<MevPlan>& plans) {
  const MevPlan* best = nullptr;
  for (const auto& p : plans) {
    if (p.profit <= 0) continue;
    if (!best) {
      best = &p;
      continue;
    }
    if (p.profit != best->profit) {
      if (p.profit > best->profit) best = &p;
      continue;
    }
    if (p.bundle.size() != best->bundle.size()) {
      if (p.bundle.size() < best->bundle.size()) best = &p;
      continue;
    }
    if (std::string(template_name(p.template_id)) <
        template_name(best->template_id))
      best = &p;
  }
  return best;
}

std::vector<MevPlan> run_search(const ChainState& st,
                                const std::vector<scan::TscReport>& reports,
                                const std::vector<MempoolTx>& mempool,
                                const SearchOptions& opt,
                                std::vector<std::string>* warnings) {
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  std::vector<scan::TscReport> all = reports;
  std::set<std::string> covered;
  for (const auto& r : all) covered.insert(r.contract);
  for (const auto& [id, tok] : st.tokens)
    if (tok.model == TokenInstance::Model::BuiltinRebase && !covered.count(id))
      all.push_back(builtin_rebase_report(id));

  auto constraints = gen_static_constraints(all, st);
  auto watchlist = build_watchlist(constraints);
  auto matches = watch_and_match(mempool, watchlist, opt.window);

  std::vector<MevPlan> out;
  for (const auto& m : matches) {
    std::vector<MevPlan> candidates;
    for (const auto& sc : m.entry.constraints) {
      try {
        DynamicConstraint dc = instantiate_dynamic(sc, m, st);
        if (auto plan = solve(dc, opt)) candidates.push_back(std::move(*plan));
      } catch (const StaleState& e) {
        warn(std::string("skipped ") + template_name(sc.template_id) +
             " for " + m.trigger.id + ": " + e.what());
      } catch (const SolverTimeout& e) {
        warn(std::string("solver timeout on ") +
             template_name(sc.template_id) + " for " + m.trigger.id + ": " +
             e.what());
      }
    }
    if (const MevPlan* w = tournament(candidates)) out.push_back(*w);
  }
  return out;
}

}  // namespace tmev::search
