#include <algorithm>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tmev/errors.hpp"
#include "tmev/graph.hpp"
#include "tmev/parser.hpp"

using namespace tmev;
using namespace tmev::graph;
using lang::ContractIR;
using lang::SourceUnit;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus_path(const std::string& name) {
  return std::string(TMEV_SOURCE_DIR) + "/corpus/" + name;
}

// Parsed units live for the whole test run so Tsdg's borrowed pointers
// stay valid.
std::vector<SourceUnit>& unit_pool() {
  static std::vector<SourceUnit> pool;
  return pool;
}

const ContractIR& load(const std::string& name) {
  unit_pool().push_back(lang::parse(read_file(corpus_path(name)), name));
  return unit_pool().back().contracts[0];
}

const ContractIR& from_source(const std::string& src) {
  unit_pool().push_back(lang::parse(src));
  return unit_pool().back().contracts[0];
}

bool has_edge(const std::vector<PDGEdge>& es, int src, int dst, EdgeKind k) {
  return std::any_of(es.begin(), es.end(), [&](const PDGEdge& e) {
    return e.src == src && e.dst == dst && e.kind == k;
  });
}

}  // namespace

TEST_CASE("intra PDG of a guarded balanceOf") {
  const ContractIR& c = load("listing3_chain.tok");
  IntraResult r = intra_pdg(c, *c.find_function("balanceOf"));

  // entry, decl u, branch, return u*ts, return 0
  REQUIRE(r.nodes.size() == 5);
  CHECK(r.nodes[0].kind == NodeKind::Entry);
  CHECK(r.nodes[1].kind == NodeKind::Decl);
  CHECK(r.nodes[2].kind == NodeKind::Branch);
  CHECK(r.nodes[3].kind == NodeKind::Return);
  CHECK(r.nodes[4].kind == NodeKind::Return);

  CHECK(r.edges.size() == 3);
  CHECK(has_edge(r.edges, 1, 3, EdgeKind::Data));
  CHECK(has_edge(r.edges, 2, 3, EdgeKind::Control));
  CHECK(has_edge(r.edges, 2, 4, EdgeKind::Control));
  // the address parameter is a key, not a data source
  CHECK(!has_edge(r.edges, 0, 1, EdgeKind::Data));

  std::set<std::pair<std::string, int>> origins(r.state_origins.begin(),
                                                r.state_origins.end());
  CHECK(origins ==
        std::set<std::pair<std::string, int>>{
            {"balance", 1}, {"pause", 2}, {"ts", 3}});
}

TEST_CASE("intra PDG of a constant function has no edges") {
  const ContractIR& c = load("constant_balance.tok");
  IntraResult r = intra_pdg(c, *c.find_function("balanceOf"));
  CHECK(r.nodes.size() == 2);
  CHECK(r.edges.empty());
  CHECK(r.state_origins.empty());
}

TEST_CASE("local chains forward through defs, scalars update strongly") {
  const ContractIR& c = from_source(
      "contract C {"
      "  int s = 0;"
      "  f(int x) {"
      "    int a = x;"
      "    int b = a + 1;"
      "    a = 7;"
      "    s = a + b;"
      "  }"
      "  balanceOf(address w) returns (int) { return s; }"
      "}");
  IntraResult r = intra_pdg(c, *c.find_function("f"));
  REQUIRE(r.nodes.size() == 5);
  CHECK(has_edge(r.edges, 0, 1, EdgeKind::Data));  // x -> a
  CHECK(has_edge(r.edges, 1, 2, EdgeKind::Data));  // a -> b
  CHECK(has_edge(r.edges, 2, 4, EdgeKind::Data));  // b -> s
  CHECK(has_edge(r.edges, 3, 4, EdgeKind::Data));  // reassigned a -> s
  // the first a is dead at the final read
  CHECK(!has_edge(r.edges, 1, 4, EdgeKind::Data));
}

TEST_CASE("branch merge keeps definitions from both arms") {
  const ContractIR& c = from_source(
      "contract C {"
      "  int s = 0;"
      "  f(int x) {"
      "    int a = 1;"
      "    if (x > 0) a = 2;"
      "    else a = 3;"
      "    s = a;"
      "  }"
      "  balanceOf(address w) returns (int) { return s; }"
      "}");
  IntraResult r = intra_pdg(c, *c.find_function("f"));
  // entry, decl, branch, assign, assign, assign-to-s
  REQUIRE(r.nodes.size() == 6);
  CHECK(has_edge(r.edges, 3, 5, EdgeKind::Data));
  CHECK(has_edge(r.edges, 4, 5, EdgeKind::Data));
  CHECK(!has_edge(r.edges, 1, 5, EdgeKind::Data));  // killed on both arms
  CHECK(has_edge(r.edges, 2, 3, EdgeKind::Control));
  CHECK(has_edge(r.edges, 2, 4, EdgeKind::Control));
  CHECK(!has_edge(r.edges, 2, 5, EdgeKind::Control));  // join is unguarded
}

TEST_CASE("merge keeps the pre-branch definition when one arm is empty") {
  const ContractIR& c = from_source(
      "contract C {"
      "  int s = 0;"
      "  f(int x) {"
      "    int a = 1;"
      "    if (x > 0) a = 2;"
      "    s = a;"
      "  }"
      "  balanceOf(address w) returns (int) { return s; }"
      "}");
  IntraResult r = intra_pdg(c, *c.find_function("f"));
  REQUIRE(r.nodes.size() == 5);
  CHECK(has_edge(r.edges, 1, 4, EdgeKind::Data));
  CHECK(has_edge(r.edges, 3, 4, EdgeKind::Data));
}

TEST_CASE("mapping writes are weak updates") {
  const ContractIR& c = load("erc20_plain.tok");
  IntraResult r = intra_pdg(c, *c.find_function("transfer"));
  REQUIRE(r.nodes.size() == 3);
  // second write still sees the entry state of the mapping
  std::set<std::pair<std::string, int>> origins(r.state_origins.begin(),
                                                r.state_origins.end());
  CHECK(origins == std::set<std::pair<std::string, int>>{{"balance", 1},
                                                         {"balance", 2}});
  CHECK(has_edge(r.edges, 1, 2, EdgeKind::Data));
}

TEST_CASE("while loops unroll into guarded copies") {
  const ContractIR& c = load("loop_rebase.tok");

  IntraResult one = intra_pdg(c, *c.find_function("rebaseLoop"));
  // entry, decl i, branch, ts += 1, i = i + 1
  REQUIRE(one.nodes.size() == 5);
  CHECK(one.nodes[2].kind == NodeKind::Branch);
  CHECK(one.nodes[3].kind == NodeKind::CompoundAssign);
  CHECK(has_edge(one.edges, 2, 3, EdgeKind::Control));
  CHECK(has_edge(one.edges, 2, 4, EdgeKind::Control));
  CHECK(has_edge(one.edges, 1, 2, EdgeKind::Data));  // i feeds the guard

  GraphConfig two;
  two.unroll = 2;
  IntraResult r2 = intra_pdg(c, *c.find_function("rebaseLoop"), two);
  REQUIRE(r2.nodes.size() == 8);
  // the second copy's guard reads i from both the decl and the first
  // copy's increment
  CHECK(has_edge(r2.edges, 1, 5, EdgeKind::Data));
  CHECK(has_edge(r2.edges, 4, 5, EdgeKind::Data));
  // second ts += 1 still reaches entry state because the first copy is
  // conditional
  std::set<std::pair<std::string, int>> origins(r2.state_origins.begin(),
                                                r2.state_origins.end());
  CHECK(origins.count({"ts", 3}) == 1);
  CHECK(origins.count({"ts", 6}) == 1);
}

TEST_CASE("whole-token graph wires the two-call supply chain") {
  const ContractIR& c = load("listing3_chain.tok");
  Tsdg g = construct_tsdg(c);

  // all four functions participate: rebase1/rebase2 by data, the pause
  // toggle by control
  REQUIRE(g.base_id.size() == 4);
  CHECK(g.nodes.size() == 11);
  CHECK(g.roots == std::vector<int>{3, 4});

  int rebase1_ca = g.gid("rebase1", 1);
  int rebase2_asg = g.gid("rebase2", 1);
  int pause_asg = g.gid("pauseTransfer", 1);
  CHECK(has_edge(g.edges, rebase1_ca, 3, EdgeKind::InterprocDefUse));
  CHECK(has_edge(g.edges, rebase2_asg, rebase1_ca, EdgeKind::InterprocDefUse));
  CHECK(has_edge(g.edges, pause_asg, 2, EdgeKind::InterprocDefUse));
  // repeated invocations of the same mutator chain through themselves
  CHECK(has_edge(g.edges, rebase1_ca, rebase1_ca, EdgeKind::InterprocDefUse));

  CHECK(g.var_index.at("ts").defs == std::vector<int>{rebase1_ca});
  CHECK(g.var_index.at("t1").defs == std::vector<int>{rebase2_asg});
  CHECK(g.var_index.at("balance").defs.empty());
}

TEST_CASE("control origins can be excluded") {
  const ContractIR& c = load("listing3_chain.tok");
  GraphConfig cfg;
  cfg.track_control_origins = false;
  Tsdg g = construct_tsdg(c, cfg);
  CHECK(g.base_id.count("rebase1") == 1);
  CHECK(g.base_id.count("rebase2") == 1);
  CHECK(g.base_id.count("pauseTransfer") == 0);
}

TEST_CASE("construction is lazy and builds each function once") {
  const ContractIR& c = load("erc20_plain.tok");
  Tsdg g = construct_tsdg(c);
  CHECK(g.base_id.count("approve") == 0);  // allowance never reaches balanceOf
  for (const auto& [fn, n] : g.intra_builds) {
    CAPTURE(fn);
    CHECK(n == 1);
  }
}

TEST_CASE("text export matches the pinned transfer-token graph") {
  const ContractIR& c = load("erc20_plain.tok");
  Tsdg g = construct_tsdg(c);
  std::string expect =
      read_file(std::string(TMEV_SOURCE_DIR) + "/tests/golden/erc20_plain.tsdg");
  CHECK(export_text(g) == expect);
}

TEST_CASE("four-call chain is fully wired") {
  const ContractIR& c = load("deep_chain4.tok");
  Tsdg g = construct_tsdg(c);
  REQUIRE(g.base_id.size() == 4);
  int bo_ret = g.gid("balanceOf", 2);
  int r1 = g.gid("rebase1", 1);
  int r2 = g.gid("rebase2", 1);
  int r3 = g.gid("rebase3", 1);
  CHECK(has_edge(g.edges, r1, bo_ret, EdgeKind::InterprocDefUse));
  CHECK(has_edge(g.edges, r2, r1, EdgeKind::InterprocDefUse));
  CHECK(has_edge(g.edges, r3, r2, EdgeKind::InterprocDefUse));
}

TEST_CASE("edges reference live nodes and interproc edges carry a variable") {
  for (const auto* name :
       {"listing3_chain.tok", "erc20_plain.tok", "deep_chain4.tok",
        "rebase_mult.tok", "pause_gated.tok", "fee_on_transfer.tok"}) {
    CAPTURE(name);
    const ContractIR& c = load(name);
    Tsdg g = construct_tsdg(c);
    int n = static_cast<int>(g.nodes.size());
    for (int i = 0; i < n; ++i) CHECK(g.nodes[i].id == i);
    for (const auto& e : g.edges) {
      CHECK(e.src >= 0);
      CHECK(e.dst >= 0);
      CHECK(e.src < n);
      CHECK(e.dst < n);
      if (e.kind != EdgeKind::InterprocDefUse) continue;
      const FlatNode& src = g.flat_node(e.src);
      const FlatNode& dst = g.flat_node(e.dst);
      bool shared = false;
      for (const auto& v : src.state_defs)
        shared = shared || std::find(dst.state_uses.begin(),
                                     dst.state_uses.end(),
                                     v) != dst.state_uses.end();
      CHECK(shared);
    }
  }
}

TEST_CASE("missing balanceOf is rejected") {
  const ContractIR& c = from_source(
      "contract C { int s = 0; f() { s += 1; } }");
  CHECK_THROWS_AS(construct_tsdg(c), MissingBalanceOf);
}

TEST_CASE("export is deterministic across constructions") {
  const ContractIR& c = load("listing3_chain.tok");
  Tsdg a = construct_tsdg(c);
  Tsdg b = construct_tsdg(c);
  CHECK(export_text(a) == export_text(b));
  CHECK(!export_text(a).empty());
}
