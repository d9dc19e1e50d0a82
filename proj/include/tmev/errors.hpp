#pragma once

#include <stdexcept>
#include <string>

namespace tmev {

struct SyntaxError : std::runtime_error {
  int line, col;
  SyntaxError(int line_, int col_, const std::string& msg)
      : std::runtime_error("syntax error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

struct ValidationError : std::runtime_error {
  int line, col;
  ValidationError(int line_, int col_, const std::string& msg)
      : std::runtime_error("validation error at " + std::to_string(line_) +
                           ":" + std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

struct MissingBalanceOf : std::runtime_error {
  explicit MissingBalanceOf(const std::string& contract)
      : std::runtime_error("contract " + contract + " defines no balanceOf") {}
};

struct InfeasibleStitch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Transaction-level faults raised inside the simulator.  exec_bundle
// catches these and rolls the whole bundle back.
struct SimFault : std::runtime_error {
  std::string code;
  SimFault(std::string code_, const std::string& msg)
      : std::runtime_error(msg), code(std::move(code_)) {}
};

struct RuntimeFault : SimFault {
  explicit RuntimeFault(const std::string& msg)
      : SimFault("runtime_fault", msg) {}
};
struct InsufficientBalance : SimFault {
  explicit InsufficientBalance(const std::string& msg)
      : SimFault("insufficient_balance", msg) {}
};
struct EmptyPool : SimFault {
  explicit EmptyPool(const std::string& msg) : SimFault("empty_pool", msg) {}
};
struct InsufficientTrade : SimFault {
  explicit InsufficientTrade(const std::string& msg)
      : SimFault("insufficient_trade", msg) {}
};
struct InsufficientPoolLiquidity : SimFault {
  explicit InsufficientPoolLiquidity(const std::string& msg)
      : SimFault("insufficient_pool_liquidity", msg) {}
};
struct ActiveTickError : SimFault {
  explicit ActiveTickError(const std::string& msg)
      : SimFault("active_tick", msg) {}
};

struct BundleReverted : std::runtime_error {
  int failed_index;
  std::string fault_code;
  BundleReverted(int idx, std::string code, const std::string& msg)
      : std::runtime_error(msg), failed_index(idx), fault_code(std::move(code)) {}
};

struct StaleState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed scenario/bundle/config inputs.
struct FixtureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverTimeout : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tmev
