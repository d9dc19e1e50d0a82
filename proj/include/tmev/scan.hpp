#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tmev/ast.hpp"
#include "tmev/graph.hpp"
#include "tmev/sim.hpp"

namespace tmev::scan {

enum class PathClass { Candidate, Tsc1, Tsc1AndTsc2, Rejected };

const char* path_class_name(PathClass c);
PathClass path_class_from_name(const std::string& s);

// One branch condition that must hold for the chain to execute, with
// state variables renamed to versioned symbols (`pause_0`).  `text`
// parses back with lang::parse_expression.
struct PathConstraint {
  int call_index = 0;
  std::string function;
  std::string text;
};

struct WitnessCall {
  std::string function;
  std::vector<std::string> args;
};

// A supply-control execution path: the statement chain from a data
// source (function argument or compound assignment) to a balanceOf
// return, and the function-call sequence that drives it.
struct TPath {
  int root = -1;
  int source = -1;
  std::vector<int> node_chain;             // source first, root last
  std::vector<std::string> call_sequence;  // ends with balanceOf
  PathClass classification = PathClass::Candidate;
  std::vector<PathConstraint> constraints;
  std::string g_form;  // "ratio" or "difference" when tsc1_and_tsc2
  std::string reject_reason;
  std::vector<WitnessCall> witness;  // calls demonstrating a supply change
};

struct ScanOptions {
  int depth = 3;
  graph::GraphConfig graph;
};

struct TscReport {
  std::string contract;
  bool tsc_token = false;
  std::vector<TPath> tpaths;
  std::map<std::string, int> tsc_kind_summary;
};

// Backward spanning tree per balanceOf return; one TPath per tree node
// that is a function argument or compound assignment.  Paths spanning
// more than `depth` functions are dropped.
std::vector<TPath> discover_tpaths(const graph::Tsdg& g, int depth);

// Collects the guard conditions along the chain and renames state
// variables with per-call version subscripts.  Throws InfeasibleStitch
// when the conditions are syntactically contradictory.
TPath stitch_execution_path(const TPath& path, const graph::Tsdg& g);

// Chain state with three holders of distinct nonzero visible balance.
// Scalar state is searched away from the declared initializers when
// they leave balances degenerate.
sim::ChainState make_scan_fixture(std::shared_ptr<const lang::SourceUnit> unit,
                                  const std::string& contract_name);

// Runs the call sequence (without the final balanceOf) over a small
// argument search set and classifies the supply change.  Records the
// witness calls on the path.
PathClass validate_tsc(TPath& path, const lang::ContractIR& contract,
                       const sim::ChainState& fixture);

TscReport scan_contract(const std::string& source, const ScanOptions& opt = {},
                        const std::string& source_name = "<memory>");

}  // namespace tmev::scan
