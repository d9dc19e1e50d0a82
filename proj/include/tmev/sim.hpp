#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tmev/ast.hpp"
#include "tmev/ints.hpp"

namespace tmev::sim {

// Addresses, token ids and pool ids share one string namespace; pools
// hold tokens under their own id.
using Address = std::string;

// Runtime values: numbers (bool is 0/1) or opaque addresses.
using RtValue = std::variant<Int, Address>;

struct TokenInstance {
  enum class Model { Interpreted, BuiltinErc20, BuiltinRebase };
  Model model = Model::BuiltinErc20;

  // interpreted: code is shared and immutable, storage is per-instance
  std::shared_ptr<const lang::SourceUnit> unit;
  const lang::ContractIR* code = nullptr;
  std::map<std::string, Int> scalars;
  std::map<std::string, std::map<Address, Int>> mappings;

  // builtin_erc20
  std::map<Address, Int> balances;

  // builtin_rebase: balanceOf(a) = floor(base[a] * scale / 1e18)
  Int scale;
  std::map<Address, Int> base;
};

struct PoolInstance {
  enum class Kind { BalanceCpmm, ReserveCpmm, LendingFixed, ConcTick };
  Kind kind = Kind::ReserveCpmm;
  std::string token_x;
  std::string token_y;
  Int fee_bps = 0;

  // reserve_cpmm: internal accounting, untouched by direct transfers
  Int rx, ry;

  // lending_fixed: borrow pays amount X for floor(amount*num/den) Y
  Int price_num = 1;
  Int price_den = 1;

  // conc_tick: two ticks; the active one swaps as a constant-product
  // segment priced on live balances, the inactive one exchanges Y for
  // the liquidity token at the tick's fixed slope
  int active_tick = 0;
  std::vector<std::pair<Int, Int>> tick_prices;  // (num, den) per tick
  std::string liq_token;
};

const char* pool_kind_name(PoolInstance::Kind k);
PoolInstance::Kind pool_kind_from_name(const std::string& s);

struct ChainState {
  Int block_number = 0;
  std::map<std::string, TokenInstance> tokens;
  std::map<std::string, PoolInstance> pools;
  std::set<Address> native_accounts;
};

struct Tx {
  Address sender;
  std::string target;    // token id or pool id
  std::string function;
  std::vector<std::string> args;
};

struct ExecReceipt {
  bool ok = true;
  std::vector<RtValue> outputs;
  // (account, token) -> signed balance change caused by this tx
  std::map<std::pair<Address, std::string>, Int> balance_deltas;
  std::string fault_code;
  std::string fault_msg;
};

struct BundleResult {
  ChainState state;  // post-state; equals pre-state when reverted
  std::vector<ExecReceipt> receipts;
  bool reverted = false;
  int failed_index = -1;
  std::string fault_code;
  std::string fault_msg;
};

// Side-effect-free balance read; interpreted tokens run on a scratch
// copy of their storage.
Int query_balance(const ChainState& st, const std::string& token,
                  const Address& account);

// Declared accounts plus pool addresses.
std::set<Address> account_universe(const ChainState& st);

// Accounts in the universe with nonzero balance.
std::vector<Address> holder_accounts(const ChainState& st,
                                     const std::string& token);

Int total_supply(const ChainState& st, const std::string& token);

// Direct token entry point (transfer / balanceOf / rebase / contract
// functions).  Throws SimFault subclasses on revert.
std::vector<RtValue> token_call(ChainState& st, const std::string& token,
                                const Address& sender, const std::string& fn,
                                const std::vector<std::string>& args);

// Pool entry points.  All throw SimFault subclasses on revert.
Int swap_xy(ChainState& st, const std::string& pool, const Address& sender,
            const Int& dx);
Int swap_yx(ChainState& st, const std::string& pool, const Address& sender,
            const Int& dy);
Int lend_exchange(ChainState& st, const std::string& pool,
                  const Address& sender, bool borrow, const Int& amount);
Int add_liquidity_inactive(ChainState& st, const std::string& pool,
                           const Address& sender, int tick, const Int& dy);
Int remove_liquidity_inactive(ChainState& st, const std::string& pool,
                              const Address& sender, int tick, const Int& dl);

// Atomic bundle on a snapshot of `st`: any fault rolls everything back
// and the result carries the failing index and fault code.
BundleResult exec_bundle(const ChainState& st, const std::vector<Tx>& txs);

// Differential price-insensitivity test: compare swap_yx(dy) output
// with and without a prior direct transfer of dy2 to the pool address.
// For conc_tick, `tick` chooses the probed segment (inactive ticks are
// probed through add_liquidity); -1 means the pool's active tick.
bool pitex_insensitive(const ChainState& st, const std::string& pool,
                       const Int& dy, const Int& dy2, int tick = -1);

// Per-tx interpreter step budget for TokenLang contracts.
constexpr long kStepBudget = 10000;

Int rebase_unit();  // 10^18, the builtin_rebase fixed-point scale

// Fresh interpreted token with scalar state set to the declared
// initializers and empty mappings.  Empty contract name picks the
// unit's first contract.
TokenInstance make_interpreted_token(
    std::shared_ptr<const lang::SourceUnit> unit,
    const std::string& contract_name = "");

}  // namespace tmev::sim
