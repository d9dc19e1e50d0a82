#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tmev/ints.hpp"
#include "tmev/scan.hpp"
#include "tmev/sim.hpp"

namespace tmev::search {

// Bundle templates.  Enum order matches lexicographic name order, which
// the tournament uses as its final tie-break.
enum class TemplateId {
  B0,        // sandwich a whale swap on one pool
  B1,        // sandwich a TSC through one price-sensitive pool
  B2_minus,  // back-run a negative TSC: buy via q, sell via p
  B2_plus,   // back-run a positive TSC: buy via p, sell via q
  D1_minus,  // front-sell via p, restore via q after a negative TSC
  D1_plus,   // buy via p, sell via q after a positive TSC
  D2_minus,  // D1- with both swaps via q
  D2_plus,   // D1+ with both swaps via q
};

const char* template_name(TemplateId id);
TemplateId template_from_name(const std::string& s);

enum class Actor { Searcher, Victim };
enum class Slot { PoolP, PoolQ, PoolZ, Token };
enum class Action { SwapXY, SwapYX, TscCall };

struct Leg {
  Actor actor = Actor::Searcher;
  Slot slot = Slot::PoolP;
  Action action = Action::SwapXY;
};

struct Template {
  TemplateId id = TemplateId::B0;
  std::vector<Leg> legs;
  // D1-/D2- only: a Z->Y swap prepended and a Y->Z swap appended, both
  // through the pool_z venue.
  bool extendable = false;
};

const std::vector<Template>& template_catalog();

// A template crossed with concrete pool bindings and one tPath.  The
// relations are rendered for reports; solving replays the bundle.
struct StaticConstraint {
  TemplateId template_id = TemplateId::B0;
  bool extended = false;
  std::string token;
  scan::TPath tpath;  // default-constructed for B0 and builtin tokens
  std::map<std::string, std::string> pool_bindings;  // slot name -> pool id
  std::vector<std::string> symbolic_vars;
  std::vector<std::string> relations;
  std::string objective;
};

struct WatchEntry {
  std::string target;    // token id, or pool id for B0
  std::string function;  // trigger call
  std::vector<std::string> call_prefix;  // same-sender calls due earlier
  std::vector<StaticConstraint> constraints;
};

struct MempoolTx {
  std::string id;
  sim::Tx tx;
};

struct Match {
  MempoolTx trigger;
  std::vector<MempoolTx> prefix;
  WatchEntry entry;
};

struct DynamicConstraint {
  StaticConstraint sc;
  sim::ChainState state;
  std::vector<sim::Tx> victim_txs;  // prefix calls then the trigger
  std::string victim_tx_id;
  std::map<std::string, Int> bound;
  std::vector<std::string> free_symbols;
};

struct MevPlan {
  TemplateId template_id = TemplateId::B0;
  std::string token;
  std::string victim_tx_id;
  std::string searcher;
  std::map<std::string, std::string> pool_bindings;
  std::vector<sim::Tx> bundle;
  std::map<std::string, Int> solved_args;
  Int profit = 0;  // searcher's token_x delta, replay-verified
};

struct SearchOptions {
  sim::Address searcher = "searcher";
  Int budget = 0;
  int window = 16;
  int max_evals = 2000;
  int refine_iters = 20;
  bool value_residual_y = false;
};

// Differential insensitivity probe with a synthetic token_y holder, so
// fixtures need no pre-funded prober.  Faulting pools count as
// sensitive.  `tick` selects the probed segment of a conc_tick pool;
// -1 means its active tick.
bool pool_is_pitex(const sim::ChainState& st, const std::string& pool_id,
                   int tick = -1);

// Stand-in report for builtin_rebase tokens, which have no source to
// scan: rebase and rebase_div are ratio-form TSCs by construction.
scan::TscReport builtin_rebase_report(const std::string& token_id);

// Cross product of templates, TSC paths and pool bindings.  q slots
// take only insensitive pools; B1's p slot only sensitive ones; paths
// whose constraints cannot be satisfied over a bounded range are
// dropped.  B0 constraints are emitted per swap pool, independent of
// the reports.
std::vector<StaticConstraint> gen_static_constraints(
    const std::vector<scan::TscReport>& reports, const sim::ChainState& st);

std::vector<WatchEntry> build_watchlist(
    const std::vector<StaticConstraint>& constraints);

// Scans the stream in order.  A tx matches an entry when target and
// function agree and the entry's call prefix appears, same sender and
// in order, within the preceding `window` txs.
std::vector<Match> watch_and_match(const std::vector<MempoolTx>& stream,
                                   const std::vector<WatchEntry>& watchlist,
                                   int window = 16);

// Binds victim arguments and pool state; throws StaleState when a
// bound pool or token is missing from `st`.
DynamicConstraint instantiate_dynamic(const StaticConstraint& sc,
                                      const Match& m,
                                      const sim::ChainState& st);

// Maximizes profit over the first searcher amount in [1, budget] by
// golden-section search plus boundary probes and a unit-step sweep;
// derived leg amounts follow from replayed intermediate balances.
// Returns nothing when the best profit is not positive; throws
// SolverTimeout when max_evals replays are exhausted.
std::optional<MevPlan> solve(const DynamicConstraint& dc,
                             const SearchOptions& opt);

// Highest profit; ties fall to fewer bundle legs, then lexicographic
// template name, then generation order.  Null when empty.
const MevPlan* tournament(const std::vector<MevPlan>& plans);

// Full pipeline: one tournament winner per matched victim tx, in
// stream order.  Warnings (skipped constraints, solver timeouts) go to
// `warnings` when given.
std::vector<MevPlan> run_search(const sim::ChainState& st,
                                const std::vector<scan::TscReport>& reports,
                                const std::vector<MempoolTx>& mempool,
                                const SearchOptions& opt,
                                std::vector<std::string>* warnings = nullptr);

}  // namespace tmev::search
