#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tmev/ast.hpp"

namespace tmev::graph {

enum class NodeKind { Entry, Return, Assign, CompoundAssign, Branch, Decl };
enum class EdgeKind { Data, Control, InterprocDefUse };

const char* node_kind_name(NodeKind k);
const char* edge_kind_name(EdgeKind k);

struct GraphConfig {
  int unroll = 1;  // while-loops expand to this many guarded copies
  bool track_control_origins = true;
};

struct PDGNode {
  int id;
  std::string function;
  int stmt_ref;  // index into the flattened unrolled body; entry is 0
  NodeKind kind;
};

struct PDGEdge {
  int src;
  int dst;
  EdgeKind kind;
};

struct FlatNode {
  NodeKind kind = NodeKind::Entry;
  const lang::Stmt* stmt = nullptr;  // null for the entry node
  // enclosing branches, outermost first: (branch flat index, taken side)
  std::vector<std::pair<int, bool>> guard_chain;
  std::vector<std::string> defs;        // names written
  std::vector<std::string> state_defs;  // subset of defs that are state vars
  std::vector<std::string> uses;        // names read (addresses excluded)
  std::vector<std::string> state_uses;  // subset of uses that are state vars
};

struct FlatFunction {
  const lang::FunctionIR* fn = nullptr;
  std::vector<lang::Stmt> unrolled;
  std::vector<FlatNode> nodes;  // [0] is the entry
};

struct IntraResult {
  std::vector<PDGNode> nodes;  // ids are flat indices
  std::vector<PDGEdge> edges;  // Data and Control only
  // state-variable reads that may observe the value held at function
  // entry: (variable, reader flat index)
  std::vector<std::pair<std::string, int>> state_origins;
};

// Program dependence graph of a single function.
IntraResult intra_pdg(const lang::ContractIR& contract,
                      const lang::FunctionIR& fn, const GraphConfig& cfg = {});

struct VarOcc {
  std::vector<int> defs;
  std::vector<int> uses;
};

// Whole-token supply dependence graph: the union of every intra-PDG
// reachable backward from balanceOf, joined by interprocedural def-use
// edges on state variables.
struct Tsdg {
  const lang::ContractIR* contract = nullptr;
  std::vector<PDGNode> nodes;  // dense, sorted by id
  std::vector<PDGEdge> edges;
  std::vector<int> roots;  // balanceOf return nodes
  std::map<std::string, VarOcc> var_index;

  std::map<std::string, FlatFunction> flat;  // built functions only
  std::map<std::string, int> base_id;
  std::map<std::string, int> intra_builds;  // edge passes per function

  int gid(const std::string& function, int local) const;
  const PDGNode& node(int id) const { return nodes.at(id); }
  const FlatNode& flat_node(int id) const;
  // incoming edges grouped by destination
  std::map<int, std::vector<PDGEdge>> incoming_index() const;
};

// Worklist construction seeded at balanceOf's returns.  Throws
// MissingBalanceOf.  The result borrows `contract`, which must outlive
// it.
Tsdg construct_tsdg(const lang::ContractIR& contract,
                    const GraphConfig& cfg = {});

// Line format: "N <id> <func> <stmt> <kind>" then "E <src> <dst> <kind>",
// nodes sorted by id, edges by (src, dst, kind).
std::string export_text(const Tsdg& g);

}  // namespace tmev::graph
