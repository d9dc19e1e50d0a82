#include "tmev/cli.hpp"

#include <atomic>
#include <iostream>
#include <thread>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "tmev/config.hpp"
#include "tmev/errors.hpp"
#include "tmev/fixture.hpp"
#include "tmev/report_io.hpp"
#include "tmev/scan.hpp"
#include "tmev/search.hpp"
#include "tmev/sim.hpp"

namespace tmev::cli {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kUsage = 2;

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    io::write_text_file(out_path, text);
}

std::string rt_to_string(const sim::RtValue& v) {
  if (std::holds_alternative<Int>(v)) return to_dec(std::get<Int>(v));
  return std::get<sim::Address>(v);
}

json receipt_to_json(const sim::ExecReceipt& r) {
  json j;
  j["ok"] = r.ok;
  j["outputs"] = json::array();
  for (const auto& v : r.outputs) j["outputs"].push_back(rt_to_string(v));
  j["balance_deltas"] = json::array();
  for (const auto& [key, delta] : r.balance_deltas)
    j["balance_deltas"].push_back({{"account", key.first},
                                   {"token", key.second},
                                   {"delta", to_dec(delta)}});
  j["fault_code"] = r.fault_code;
  j["fault_msg"] = r.fault_msg;
  return j;
}

struct ScanArgs {
  std::vector<std::string> paths;
  int depth = 3;
  int unroll = 1;
  std::string report_path;
};

int cmd_scan(const ScanArgs& a) {
  struct Task {
    std::string path;
    std::string source;
    bool readable = false;
    bool scanned = false;
    std::string error;
    scan::TscReport report;
  };
  std::vector<Task> tasks;
  bool io_error = false;
  for (const auto& path : a.paths) {
    Task t;
    t.path = path;
    try {
      t.source = io::read_text_file(path);
      t.readable = true;
    } catch (const FixtureError& e) {
      std::cerr << "tmev scan: " << e.what() << "\n";
      io_error = true;
    }
    tasks.push_back(std::move(t));
  }

  scan::ScanOptions opt;
  opt.depth = a.depth;
  opt.graph.unroll = a.unroll;

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      Task& t = tasks[i];
      if (!t.readable) continue;
      try {
        t.report = scan::scan_contract(t.source, opt, t.path);
        t.scanned = true;
      } catch (const std::exception& e) {
        t.error = e.what();
      }
    }
  };
  size_t width = std::min<size_t>(
      tasks.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (size_t i = 0; i + 1 < width; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<scan::TscReport> reports;
  int failed = 0, positive = 0;
  for (const Task& t : tasks) {
    if (!t.readable) continue;
    if (!t.scanned) {
      ++failed;
      std::cerr << "tmev scan: " << t.path << ": " << t.error << "\n";
      continue;
    }
    positive += t.report.tsc_token ? 1 : 0;
    reports.push_back(t.report);
  }
  emit(a.report_path, io::reports_to_string(reports));
  std::cerr << "scanned " << reports.size() << " contract(s): " << positive
            << " tsc_token, " << (reports.size() - positive)
            << " non_tsc_token";
  if (failed) std::cerr << ", " << failed << " failed";
  std::cerr << "\n";
  if (io_error) return kUsage;
  return failed ? kFindings : kOk;
}

struct SimArgs {
  std::string fixture;
  std::string bundle;
  std::string out_path;
};

int cmd_sim(const SimArgs& a) {
  sim::ChainState st = sim::load_scenario(a.fixture);
  auto txs = sim::load_bundle(a.bundle);
  sim::BundleResult res = sim::exec_bundle(st, txs);

  json j;
  j["reverted"] = res.reverted;
  j["failed_index"] = res.failed_index;
  j["fault_code"] = res.fault_code;
  j["fault_msg"] = res.fault_msg;
  j["receipts"] = json::array();
  for (const auto& r : res.receipts) j["receipts"].push_back(receipt_to_json(r));
  emit(a.out_path, j.dump(2) + "\n");

  if (res.reverted) {
    std::cerr << "bundle reverted at tx " << res.failed_index << ": "
              << res.fault_code << " (" << res.fault_msg << ")\n";
    return kFindings;
  }
  std::cerr << "bundle of " << txs.size() << " tx(s) executed\n";
  return kOk;
}

struct PitexArgs {
  std::string fixture;
  std::string pool;
  int tick = -1;
};

int cmd_pitex(const PitexArgs& a) {
  sim::ChainState st = sim::load_scenario(a.fixture);
  auto it = st.pools.find(a.pool);
  if (it == st.pools.end())
    throw FixtureError("pool " + a.pool + " is missing from the fixture");
  bool insensitive = search::pool_is_pitex(st, a.pool, a.tick);
  std::cout << (insensitive ? "insensitive" : "sensitive") << "\n";
  std::cerr << "pool " << a.pool << ": "
            << (insensitive ? "price-insensitive" : "price-sensitive")
            << "\n";
  return kOk;
}

struct SearchArgs {
  std::string fixture;
  std::vector<std::string> watch;
  std::string mempool;
  std::string out_path;
  search::SearchOptions opt;
};

int cmd_search(const SearchArgs& a) {
  sim::ChainState st = sim::load_scenario(a.fixture);
  std::vector<scan::TscReport> reports;
  for (const auto& path : a.watch) {
    auto batch = io::parse_reports(io::read_text_file(path));
    reports.insert(reports.end(), batch.begin(), batch.end());
  }
  std::vector<std::string> warnings;
  if (a.opt.budget == 0)
    warnings.push_back("budget is 0; no position can be sized (pass --budget)");
  std::vector<search::MempoolTx> mempool;
  if (!a.mempool.empty())
    mempool = io::parse_mempool_jsonl(io::read_text_file(a.mempool), &warnings);

  auto plans = search::run_search(st, reports, mempool, a.opt, &warnings);
  emit(a.out_path, io::plans_to_jsonl(plans));

  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << plans.size() << " plan(s) from " << mempool.size()
            << " mempool tx(s)\n";
  return kOk;
}

struct ReplayArgs {
  std::string fixture;
  std::string plans;
  std::string out_path;
};

int cmd_replay(const ReplayArgs& a) {
  sim::ChainState st = sim::load_scenario(a.fixture);
  auto plans = io::parse_plans_jsonl(io::read_text_file(a.plans));

  std::string out;
  int verified = 0;
  for (size_t i = 0; i < plans.size(); ++i) {
    const search::MevPlan& p = plans[i];
    json j;
    j["index"] = i;
    j["template"] = search::template_name(p.template_id);
    j["victim_tx_id"] = p.victim_tx_id;
    j["recorded_profit"] = to_dec(p.profit);
    j["replayed_profit"] = "";
    std::string detail;

    auto binding = p.pool_bindings.find("pool_p");
    if (binding == p.pool_bindings.end())
      binding = p.pool_bindings.find("pool_q");
    const sim::PoolInstance* pair = nullptr;
    if (binding == p.pool_bindings.end()) {
      detail = "plan has no pool binding";
    } else if (auto it = st.pools.find(binding->second); it == st.pools.end()) {
      detail = "pool " + binding->second + " is missing from the fixture";
    } else {
      pair = &it->second;
    }

    if (pair) {
      Int x0 = sim::query_balance(st, pair->token_x, p.searcher);
      Int y0 = sim::query_balance(st, pair->token_y, p.searcher);
      sim::BundleResult res = sim::exec_bundle(st, p.bundle);
      if (res.reverted) {
        detail = res.fault_code + " at tx " +
                 std::to_string(res.failed_index) + ": " + res.fault_msg;
      } else {
        Int dx = sim::query_balance(res.state, pair->token_x, p.searcher) - x0;
        Int dy = sim::query_balance(res.state, pair->token_y, p.searcher) - y0;
        j["replayed_profit"] = to_dec(dx);
        if (dx != p.profit)
          detail = "replayed profit " + to_dec(dx) + " != recorded " +
                   to_dec(p.profit);
        else if (dy < 0)
          detail = "bundle spends token_y (" + to_dec(dy) + ")";
      }
    }

    j["status"] = detail.empty() ? "verified" : "stale_state";
    j["detail"] = detail;
    out += j.dump() + "\n";
    if (detail.empty()) {
      ++verified;
    } else {
      std::cerr << "plan " << i << " ("
                << search::template_name(p.template_id)
                << "): " << detail << "\n";
    }
  }
  emit(a.out_path, out);
  std::cerr << "verified " << verified << " of " << plans.size()
            << " plan(s)\n";
  return verified == static_cast<int>(plans.size()) ? kOk : kFindings;
}

}  // namespace

int run(int argc, const char* const* argv) {
  Config cfg;
  try {
    cfg = load_config_from_env();
  } catch (const std::exception& e) {
    std::cerr << "tmev: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"token supply-control scanner and MEV search toolkit"};
  app.require_subcommand(1);
  int rc = kOk;

  ScanArgs sa;
  sa.depth = cfg.depth;
  sa.unroll = cfg.unroll;
  auto* scan_cmd =
      app.add_subcommand("scan", "detect supply-control paths in contracts");
  scan_cmd->add_option("paths", sa.paths, "TokenLang source files")
      ->required();
  scan_cmd->add_option("--depth", sa.depth, "max functions per path");
  scan_cmd->add_option("--unroll", sa.unroll, "loop unroll factor");
  scan_cmd->add_option("--report", sa.report_path,
                       "report file (default stdout)");
  scan_cmd->callback([&] { rc = cmd_scan(sa); });

  SimArgs ma;
  auto* sim_cmd = app.add_subcommand("sim", "execute a bundle on a fixture");
  sim_cmd->add_option("--fixture", ma.fixture, "scenario file")->required();
  sim_cmd->add_option("--bundle", ma.bundle, "bundle file")->required();
  sim_cmd->add_option("--out", ma.out_path, "receipts file (default stdout)");
  sim_cmd->callback([&] { rc = cmd_sim(ma); });

  PitexArgs pa;
  auto* pitex_cmd =
      app.add_subcommand("pitex", "classify a pool's price sensitivity");
  pitex_cmd->add_option("--fixture", pa.fixture, "scenario file")->required();
  pitex_cmd->add_option("pool", pa.pool, "pool id")->required();
  pitex_cmd->add_option("--tick", pa.tick,
                        "conc_tick segment to probe (-1 = active)");
  pitex_cmd->callback([&] { rc = cmd_pitex(pa); });

  SearchArgs ea;
  ea.opt.budget = cfg.budget;
  ea.opt.value_residual_y = cfg.value_residual_y;
  std::string budget_str;
  auto* search_cmd =
      app.add_subcommand("search", "match mempool txs and solve for MEV");
  search_cmd->add_option("--fixture", ea.fixture, "scenario file")->required();
  search_cmd->add_option("--watch", ea.watch, "scan report file(s)");
  search_cmd->add_option("--mempool", ea.mempool, "pending tx stream");
  search_cmd->add_option("--budget", budget_str, "max input, token_x units");
  search_cmd->add_option("--out", ea.out_path, "plans file (default stdout)");
  search_cmd->add_option("--searcher", ea.opt.searcher, "searcher account");
  search_cmd->add_option("--window", ea.opt.window,
                         "look-back span for prefix matching");
  search_cmd->add_flag("--value-residual-y", ea.opt.value_residual_y,
                       "count leftover token_y at spot toward the objective");
  search_cmd->callback([&] {
    if (!budget_str.empty()) {
      try {
        ea.opt.budget = from_dec(budget_str);
        if (ea.opt.budget < 0) throw FixtureError("");
      } catch (const std::exception&) {
        throw FixtureError("bad value for --budget: " + budget_str);
      }
    }
    rc = cmd_search(ea);
  });

  ReplayArgs ra;
  auto* replay_cmd =
      app.add_subcommand("replay", "re-execute plans and verify profits");
  replay_cmd->add_option("--fixture", ra.fixture, "scenario file")->required();
  replay_cmd->add_option("--plans", ra.plans, "plans file")->required();
  replay_cmd->add_option("--out", ra.out_path,
                         "verification file (default stdout)");
  replay_cmd->callback([&] { rc = cmd_replay(ra); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const FixtureError& e) {
    std::cerr << "tmev: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "tmev: " << e.what() << "\n";
    return kUsage;
  }
  return rc;
}

}  // namespace tmev::cli
