#include "tmev/sim.hpp"

#include <algorithm>
#include <optional>

#include "tmev/errors.hpp"

namespace tmev::sim {

using lang::ContractIR;
using lang::Expr;
using lang::FunctionIR;
using lang::Stmt;
using lang::VarKind;

Int rebase_unit() {
  static const Int unit = Int("1000000000000000000");
  return unit;
}

const char* pool_kind_name(PoolInstance::Kind k) {
  switch (k) {
    case PoolInstance::Kind::BalanceCpmm: return "balance_cpmm";
    case PoolInstance::Kind::ReserveCpmm: return "reserve_cpmm";
    case PoolInstance::Kind::LendingFixed: return "lending_fixed";
    case PoolInstance::Kind::ConcTick: return "conc_tick";
  }
  return "?";
}

PoolInstance::Kind pool_kind_from_name(const std::string& s) {
  if (s == "balance_cpmm") return PoolInstance::Kind::BalanceCpmm;
  if (s == "reserve_cpmm") return PoolInstance::Kind::ReserveCpmm;
  if (s == "lending_fixed") return PoolInstance::Kind::LendingFixed;
  if (s == "conc_tick") return PoolInstance::Kind::ConcTick;
  throw RuntimeFault("unknown pool kind: " + s);
}

namespace {

const Int& num_of(const RtValue& v) {
  if (const Int* p = std::get_if<Int>(&v)) return *p;
  throw RuntimeFault("address value used as a number");
}

const Address& addr_of(const RtValue& v) {
  if (const Address* p = std::get_if<Address>(&v)) return *p;
  throw RuntimeFault("numeric value used as an address");
}

Int parse_amount(const std::string& s) {
  try {
    return from_dec(s);
  } catch (const std::exception&) {
    throw RuntimeFault("malformed integer argument: " + s);
  }
}

Int div_checked(const Int& a, const Int& b) {
  if (b == 0) throw RuntimeFault("division by zero");
  return floor_div(a, b);
}

// ---- TokenLang interpreter -------------------------------------------

struct Interp {
  const ContractIR& code;
  TokenInstance& tok;
  Address sender;
  long steps = 0;

  std::map<std::string, RtValue> locals = {};
  std::map<std::string, VarKind> local_kinds = {};

  void tick() {
    if (++steps > kStepBudget) throw RuntimeFault("step budget exceeded");
  }

  RtValue eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        return e.int_value;
      case Expr::Kind::BoolLit:
        return Int(e.bool_value ? 1 : 0);
      case Expr::Kind::MsgSender:
        return sender;
      case Expr::Kind::Ident: {
        auto it = locals.find(e.name);
        if (it != locals.end()) return it->second;
        auto st = tok.scalars.find(e.name);
        if (st != tok.scalars.end()) return st->second;
        throw RuntimeFault("unbound name: " + e.name);
      }
      case Expr::Kind::Index: {
        Address key = addr_of(eval(*e.lhs));
        const auto& m = tok.mappings[e.name];
        auto it = m.find(key);
        return it == m.end() ? Int(0) : it->second;
      }
      case Expr::Kind::Unary: {
        if (e.op == "!") return Int(num_of(eval(*e.lhs)) == 0 ? 1 : 0);
        return Int(-num_of(eval(*e.lhs)));
      }
      case Expr::Kind::Binary:
        return eval_binary(e);
    }
    throw RuntimeFault("unreachable expression kind");
  }

  RtValue eval_binary(const Expr& e) {
    if (e.op == "&&") {
      if (num_of(eval(*e.lhs)) == 0) return Int(0);
      return Int(num_of(eval(*e.rhs)) != 0 ? 1 : 0);
    }
    if (e.op == "||") {
      if (num_of(eval(*e.lhs)) != 0) return Int(1);
      return Int(num_of(eval(*e.rhs)) != 0 ? 1 : 0);
    }
    RtValue lv = eval(*e.lhs);
    RtValue rv = eval(*e.rhs);
    if (e.op == "==" || e.op == "!=") {
      bool both_addr = std::holds_alternative<Address>(lv) &&
                       std::holds_alternative<Address>(rv);
      bool eq = both_addr ? addr_of(lv) == addr_of(rv)
                          : num_of(lv) == num_of(rv);
      return Int((e.op == "==") == eq ? 1 : 0);
    }
    const Int& a = num_of(lv);
    const Int& b = num_of(rv);
    if (e.op == "<") return Int(a < b ? 1 : 0);
    if (e.op == "<=") return Int(a <= b ? 1 : 0);
    if (e.op == ">") return Int(a > b ? 1 : 0);
    if (e.op == ">=") return Int(a >= b ? 1 : 0);
    if (e.op == "+") return a + b;
    if (e.op == "-") return a - b;
    if (e.op == "*") return a * b;
    if (e.op == "/") return div_checked(a, b);
    throw RuntimeFault("unknown operator: " + e.op);
  }

  void check_kind(VarKind k, const RtValue& v, const std::string& name) {
    if (k == VarKind::Address) {
      addr_of(v);
      return;
    }
    const Int& n = num_of(v);
    if ((k == VarKind::Uint || k == VarKind::MapAddressUint) && n < 0)
      throw RuntimeFault("negative value stored into uint " + name);
  }

  void store(const lang::LValue& lv, RtValue v) {
    if (lv.is_mapping_access()) {
      Address key = addr_of(eval(*lv.key));
      check_kind(VarKind::MapAddressUint, v, lv.name);
      tok.mappings[lv.name][key] = std::get<Int>(v);
      return;
    }
    auto lk = local_kinds.find(lv.name);
    if (lk != local_kinds.end()) {
      check_kind(lk->second, v, lv.name);
      locals[lv.name] = std::move(v);
      return;
    }
    const lang::StateVar* sv = code.find_state_var(lv.name);
    if (!sv) throw RuntimeFault("unbound name: " + lv.name);
    check_kind(sv->kind, v, lv.name);
    tok.scalars[lv.name] = std::get<Int>(v);
  }

  Int load(const lang::LValue& lv) {
    if (lv.is_mapping_access()) {
      Address key = addr_of(eval(*lv.key));
      const auto& m = tok.mappings[lv.name];
      auto it = m.find(key);
      return it == m.end() ? Int(0) : it->second;
    }
    auto it = locals.find(lv.name);
    if (it != locals.end()) return num_of(it->second);
    auto st = tok.scalars.find(lv.name);
    if (st != tok.scalars.end()) return st->second;
    throw RuntimeFault("unbound name: " + lv.name);
  }

  // returns the function's result once a Return executes
  std::optional<RtValue> exec_block(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
      tick();
      switch (s.kind) {
        case Stmt::Kind::LocalDecl: {
          RtValue v = eval(*s.expr);
          check_kind(s.decl_kind, v, s.name);
          locals[s.name] = std::move(v);
          local_kinds[s.name] = s.decl_kind;
          break;
        }
        case Stmt::Kind::Assign:
          store(s.lhs, eval(*s.expr));
          break;
        case Stmt::Kind::CompoundAssign: {
          Int cur = load(s.lhs);
          Int rhs = num_of(eval(*s.expr));
          Int next;
          if (s.op == "+=") next = cur + rhs;
          else if (s.op == "-=") next = cur - rhs;
          else if (s.op == "*=") next = cur * rhs;
          else next = div_checked(cur, rhs);
          store(s.lhs, RtValue(next));
          break;
        }
        case Stmt::Kind::If: {
          auto r = num_of(eval(*s.expr)) != 0 ? exec_block(s.then_body)
                                              : exec_block(s.else_body);
          if (r) return r;
          break;
        }
        case Stmt::Kind::While:
          while (num_of(eval(*s.expr)) != 0) {
            tick();
            if (auto r = exec_block(s.then_body)) return r;
          }
          break;
        case Stmt::Kind::Return:
          return eval(*s.expr);
      }
    }
    return std::nullopt;
  }

  std::vector<RtValue> call(const std::string& fn,
                            const std::vector<std::string>& raw_args) {
    const FunctionIR* f = code.find_function(fn);
    if (!f) throw RuntimeFault("unknown function: " + fn);
    if (f->params.size() != raw_args.size())
      throw RuntimeFault(fn + " expects " + std::to_string(f->params.size()) +
                         " arguments");
    for (size_t i = 0; i < f->params.size(); ++i) {
      const lang::Param& p = f->params[i];
      RtValue v;
      if (p.kind == VarKind::Address) {
        v = raw_args[i];
      } else if (raw_args[i] == "true") {
        v = Int(1);
      } else if (raw_args[i] == "false") {
        v = Int(0);
      } else {
        v = parse_amount(raw_args[i]);
      }
      check_kind(p.kind, v, p.name);
      locals[p.name] = std::move(v);
      local_kinds[p.name] = p.kind;
    }
    auto r = exec_block(f->body);
    if (r) return {*r};
    return {};
  }
};

// ---- token models ------------------------------------------------------

Int builtin_balance(const TokenInstance& t, const Address& a) {
  if (t.model == TokenInstance::Model::BuiltinErc20) {
    auto it = t.balances.find(a);
    return it == t.balances.end() ? Int(0) : it->second;
  }
  auto it = t.base.find(a);
  if (it == t.base.end()) return Int(0);
  return floor_div(it->second * t.scale, rebase_unit());
}

void move_amount(std::map<Address, Int>& bal, const Address& from,
                 const Address& to, const Int& amount) {
  Int& src = bal[from];
  if (src < amount)
    throw InsufficientBalance(from + " holds " + to_dec(src) + ", needs " +
                              to_dec(amount));
  src -= amount;
  bal[to] += amount;
}

const TokenInstance& get_token(const ChainState& st, const std::string& id) {
  auto it = st.tokens.find(id);
  if (it == st.tokens.end()) throw RuntimeFault("unknown token: " + id);
  return it->second;
}

TokenInstance& get_token(ChainState& st, const std::string& id) {
  return const_cast<TokenInstance&>(
      get_token(static_cast<const ChainState&>(st), id));
}

const PoolInstance& get_pool(const ChainState& st, const std::string& id) {
  auto it = st.pools.find(id);
  if (it == st.pools.end()) throw RuntimeFault("unknown pool: " + id);
  return it->second;
}

PoolInstance& get_pool(ChainState& st, const std::string& id) {
  return const_cast<PoolInstance&>(
      get_pool(static_cast<const ChainState&>(st), id));
}

void transfer_token(ChainState& st, const std::string& token,
                    const Address& from, const Address& to,
                    const Int& amount) {
  token_call(st, token, from, "transfer", {to, to_dec(amount)});
}

}  // namespace

TokenInstance make_interpreted_token(
    std::shared_ptr<const lang::SourceUnit> unit,
    const std::string& contract_name) {
  TokenInstance t;
  t.model = TokenInstance::Model::Interpreted;
  t.unit = std::move(unit);
  if (contract_name.empty()) {
    t.code = &t.unit->contracts.at(0);
  } else {
    t.code = nullptr;
    for (const auto& c : t.unit->contracts)
      if (c.name == contract_name) t.code = &c;
    if (!t.code)
      throw RuntimeFault("no contract named " + contract_name);
  }
  for (const auto& sv : t.code->state_vars) {
    if (sv.kind == VarKind::MapAddressUint) continue;
    Int v = 0;
    if (sv.has_init)
      v = sv.kind == VarKind::Bool ? Int(sv.init_bool ? 1 : 0) : sv.init_int;
    t.scalars[sv.name] = v;
  }
  return t;
}

Int query_balance(const ChainState& st, const std::string& token,
                  const Address& account) {
  const TokenInstance& t = get_token(st, token);
  if (t.model != TokenInstance::Model::Interpreted)
    return builtin_balance(t, account);
  TokenInstance scratch = t;  // balanceOf may be impure; never leak writes
  Interp in{*scratch.code, scratch, account};
  auto out = in.call("balanceOf", {account});
  if (out.empty()) throw RuntimeFault("balanceOf returned nothing");
  return num_of(out[0]);
}

std::set<Address> account_universe(const ChainState& st) {
  std::set<Address> all = st.native_accounts;
  for (const auto& [id, p] : st.pools) all.insert(id);
  return all;
}

std::vector<Address> holder_accounts(const ChainState& st,
                                     const std::string& token) {
  std::vector<Address> out;
  for (const auto& a : account_universe(st))
    if (query_balance(st, token, a) != 0) out.push_back(a);
  return out;
}

Int total_supply(const ChainState& st, const std::string& token) {
  Int sum = 0;
  for (const auto& a : account_universe(st)) sum += query_balance(st, token, a);
  return sum;
}

std::vector<RtValue> token_call(ChainState& st, const std::string& token,
                                const Address& sender, const std::string& fn,
                                const std::vector<std::string>& args) {
  TokenInstance& t = get_token(st, token);

  if (t.model == TokenInstance::Model::Interpreted) {
    Interp in{*t.code, t, sender};
    return in.call(fn, args);
  }

  auto expect_args = [&](size_t n) {
    if (args.size() != n)
      throw RuntimeFault(fn + " expects " + std::to_string(n) + " arguments");
  };

  if (fn == "balanceOf") {
    expect_args(1);
    return {builtin_balance(t, args[0])};
  }
  if (fn == "transfer") {
    expect_args(2);
    Int amount = parse_amount(args[1]);
    if (amount < 0) throw RuntimeFault("negative transfer amount");
    if (t.model == TokenInstance::Model::BuiltinErc20) {
      move_amount(t.balances, sender, args[0], amount);
    } else {
      if (t.scale == 0) throw RuntimeFault("division by zero");
      Int base_amt = floor_div(amount * rebase_unit(), t.scale);
      move_amount(t.base, sender, args[0], base_amt);
    }
    return {};
  }
  if (t.model == TokenInstance::Model::BuiltinRebase && fn == "rebase") {
    expect_args(1);
    Int f = parse_amount(args[0]);
    if (f < 0) throw RuntimeFault("negative rebase factor");
    t.scale *= f;
    return {};
  }
  if (t.model == TokenInstance::Model::BuiltinRebase && fn == "rebase_div") {
    expect_args(1);
    Int d = parse_amount(args[0]);
    if (d <= 0) throw RuntimeFault("rebase divisor must be positive");
    t.scale = floor_div(t.scale, d);
    return {};
  }
  throw RuntimeFault("unknown function: " + fn);
}

// ---- pools ---------------------------------------------------------------

namespace {

// (rX, rY) as seen by the pool's pricing formula
std::pair<Int, Int> pricing_reserves(const ChainState& st,
                                     const std::string& pool_id,
                                     const PoolInstance& p) {
  if (p.kind == PoolInstance::Kind::ReserveCpmm) return {p.rx, p.ry};
  return {query_balance(st, p.token_x, pool_id),
          query_balance(st, p.token_y, pool_id)};
}

Int swap_dir(ChainState& st, const std::string& pool_id, const Address& sender,
             const Int& amount_in, bool x_to_y) {
  PoolInstance& p = get_pool(st, pool_id);
  if (p.kind == PoolInstance::Kind::LendingFixed)
    throw RuntimeFault("lending pool has no swap entry point");
  if (amount_in <= 0) throw InsufficientTrade("swap amount must be positive");

  auto [rx, ry] = pricing_reserves(st, pool_id, p);
  if (rx == 0 || ry == 0) throw EmptyPool(pool_id + " has an empty side");
  const Int& r_in = x_to_y ? rx : ry;
  const Int& r_out = x_to_y ? ry : rx;
  Int eff = floor_div(amount_in * (10000 - p.fee_bps), 10000);
  Int out = floor_div(r_out * eff, r_in + eff);

  const std::string& t_in = x_to_y ? p.token_x : p.token_y;
  const std::string& t_out = x_to_y ? p.token_y : p.token_x;
  transfer_token(st, t_in, sender, pool_id, amount_in);
  transfer_token(st, t_out, pool_id, sender, out);

  if (p.kind == PoolInstance::Kind::ReserveCpmm) {
    if (x_to_y) {
      p.rx += eff;
      p.ry -= out;
    } else {
      p.ry += eff;
      p.rx -= out;
    }
  }
  return out;
}

}  // namespace

Int swap_xy(ChainState& st, const std::string& pool, const Address& sender,
            const Int& dx) {
  return swap_dir(st, pool, sender, dx, true);
}

Int swap_yx(ChainState& st, const std::string& pool, const Address& sender,
            const Int& dy) {
  return swap_dir(st, pool, sender, dy, false);
}

Int lend_exchange(ChainState& st, const std::string& pool,
                  const Address& sender, bool borrow, const Int& amount) {
  PoolInstance& p = get_pool(st, pool);
  if (p.kind != PoolInstance::Kind::LendingFixed)
    throw RuntimeFault(pool + " is not a lending pool");
  if (amount <= 0) throw InsufficientTrade("amount must be positive");
  if (p.price_num <= 0 || p.price_den <= 0)
    throw RuntimeFault("lending price must be positive");

  const std::string& t_in = borrow ? p.token_x : p.token_y;
  const std::string& t_out = borrow ? p.token_y : p.token_x;
  Int counter = borrow ? floor_div(amount * p.price_num, p.price_den)
                       : floor_div(amount * p.price_den, p.price_num);
  if (query_balance(st, t_out, pool) < counter)
    throw InsufficientPoolLiquidity(pool + " cannot pay " + to_dec(counter));
  transfer_token(st, t_in, sender, pool, amount);
  transfer_token(st, t_out, pool, sender, counter);
  return counter;
}

namespace {

const std::pair<Int, Int>& tick_price(const PoolInstance& p,
                                      const std::string& pool, int tick) {
  if (p.kind != PoolInstance::Kind::ConcTick)
    throw RuntimeFault(pool + " has no ticks");
  if (tick < 0 || tick >= static_cast<int>(p.tick_prices.size()))
    throw RuntimeFault("tick out of range");
  return p.tick_prices[tick];
}

}  // namespace

Int add_liquidity_inactive(ChainState& st, const std::string& pool,
                           const Address& sender, int tick, const Int& dy) {
  PoolInstance& p = get_pool(st, pool);
  const auto& [num, den] = tick_price(p, pool, tick);
  if (tick == p.active_tick)
    throw ActiveTickError("tick " + std::to_string(tick) + " is active");
  if (dy <= 0) throw InsufficientTrade("amount must be positive");
  Int dl = floor_div(dy * num, den);
  if (query_balance(st, p.liq_token, pool) < dl)
    throw InsufficientPoolLiquidity(pool + " cannot mint " + to_dec(dl));
  transfer_token(st, p.token_y, sender, pool, dy);
  transfer_token(st, p.liq_token, pool, sender, dl);
  return dl;
}

Int remove_liquidity_inactive(ChainState& st, const std::string& pool,
                              const Address& sender, int tick, const Int& dl) {
  PoolInstance& p = get_pool(st, pool);
  const auto& [num, den] = tick_price(p, pool, tick);
  if (tick == p.active_tick)
    throw ActiveTickError("tick " + std::to_string(tick) + " is active");
  if (dl <= 0) throw InsufficientTrade("amount must be positive");
  Int dy = floor_div(dl * den, num);
  if (query_balance(st, p.token_y, pool) < dy)
    throw InsufficientPoolLiquidity(pool + " cannot pay " + to_dec(dy));
  transfer_token(st, p.liq_token, sender, pool, dl);
  transfer_token(st, p.token_y, pool, sender, dy);
  return dy;
}

// ---- bundles ---------------------------------------------------------------

namespace {

std::vector<RtValue> dispatch_tx(ChainState& st, const Tx& tx) {
  if (st.pools.count(tx.target)) {
    auto arg_int = [&](size_t i) { return parse_amount(tx.args.at(i)); };
    auto expect = [&](size_t n) {
      if (tx.args.size() != n)
        throw RuntimeFault(tx.function + " expects " + std::to_string(n) +
                           " arguments");
    };
    if (tx.function == "swap_xy") {
      expect(1);
      return {swap_xy(st, tx.target, tx.sender, arg_int(0))};
    }
    if (tx.function == "swap_yx") {
      expect(1);
      return {swap_yx(st, tx.target, tx.sender, arg_int(0))};
    }
    if (tx.function == "lend_borrow") {
      expect(1);
      return {lend_exchange(st, tx.target, tx.sender, true, arg_int(0))};
    }
    if (tx.function == "lend_repay") {
      expect(1);
      return {lend_exchange(st, tx.target, tx.sender, false, arg_int(0))};
    }
    if (tx.function == "add_liquidity") {
      expect(2);
      int tick = static_cast<int>(arg_int(0));
      return {add_liquidity_inactive(st, tx.target, tx.sender, tick,
                                     arg_int(1))};
    }
    if (tx.function == "remove_liquidity") {
      expect(2);
      int tick = static_cast<int>(arg_int(0));
      return {remove_liquidity_inactive(st, tx.target, tx.sender, tick,
                                        arg_int(1))};
    }
    throw RuntimeFault("unknown pool function: " + tx.function);
  }
  if (st.tokens.count(tx.target))
    return token_call(st, tx.target, tx.sender, tx.function, tx.args);
  throw RuntimeFault("unknown target: " + tx.target);
}

std::map<std::pair<Address, std::string>, Int> balance_sheet(
    const ChainState& st) {
  std::map<std::pair<Address, std::string>, Int> sheet;
  auto universe = account_universe(st);
  for (const auto& [tid, t] : st.tokens)
    for (const auto& a : universe) sheet[{a, tid}] = query_balance(st, tid, a);
  return sheet;
}

}  // namespace

BundleResult exec_bundle(const ChainState& st, const std::vector<Tx>& txs) {
  BundleResult res;
  if (txs.empty()) {
    res.state = st;
    res.reverted = true;
    res.fault_code = "empty_bundle";
    res.fault_msg = "bundle has no transactions";
    return res;
  }
  ChainState work = st;
  for (size_t i = 0; i < txs.size(); ++i) {
    ExecReceipt rc;
    auto before = balance_sheet(work);
    try {
      rc.outputs = dispatch_tx(work, txs[i]);
    } catch (const SimFault& f) {
      rc.ok = false;
      rc.fault_code = f.code;
      rc.fault_msg = f.what();
      res.receipts.push_back(std::move(rc));
      res.state = st;  // atomic: everything rolls back
      res.reverted = true;
      res.failed_index = static_cast<int>(i);
      res.fault_code = res.receipts.back().fault_code;
      res.fault_msg = res.receipts.back().fault_msg;
      return res;
    }
    auto after = balance_sheet(work);
    for (const auto& [key, v] : after) {
      Int prev = 0;
      auto it = before.find(key);
      if (it != before.end()) prev = it->second;
      if (v != prev) rc.balance_deltas[key] = v - prev;
    }
    res.receipts.push_back(std::move(rc));
  }
  work.block_number += 1;
  res.state = std::move(work);
  return res;
}

bool pitex_insensitive(const ChainState& st, const std::string& pool_id,
                       const Int& dy, const Int& dy2, int tick) {
  const PoolInstance& p = get_pool(st, pool_id);
  if (dy <= 0 || dy2 <= 0)
    throw InsufficientTrade("probe amounts must be positive");

  Address prober, donor;
  for (const auto& a : st.native_accounts) {
    Int bal = query_balance(st, p.token_y, a);
    if (prober.empty() && bal >= dy) {
      prober = a;
      if (bal >= dy + dy2 && donor.empty()) donor = a;
      continue;
    }
    if (donor.empty() && bal >= dy2) donor = a;
  }
  if (prober.empty())
    throw InsufficientBalance("no account can probe with " + to_dec(dy));
  if (donor.empty())
    throw InsufficientBalance("no account can donate " + to_dec(dy2));

  int probe_tick = tick;
  if (p.kind == PoolInstance::Kind::ConcTick && probe_tick < 0)
    probe_tick = p.active_tick;

  auto probe = [&](ChainState& s) -> Int {
    switch (p.kind) {
      case PoolInstance::Kind::BalanceCpmm:
      case PoolInstance::Kind::ReserveCpmm:
        return swap_yx(s, pool_id, prober, dy);
      case PoolInstance::Kind::LendingFixed:
        return lend_exchange(s, pool_id, prober, false, dy);
      case PoolInstance::Kind::ConcTick:
        if (probe_tick == s.pools.at(pool_id).active_tick)
          return swap_yx(s, pool_id, prober, dy);
        return add_liquidity_inactive(s, pool_id, prober, probe_tick, dy);
    }
    throw RuntimeFault("unreachable pool kind");
  };

  ChainState a = st;
  Int out1 = probe(a);

  ChainState b = st;
  transfer_token(b, p.token_y, donor, pool_id, dy2);
  Int out2 = probe(b);

  return out1 == out2;
}

}  // namespace tmev::sim
