#include "tmev/report_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tmev/errors.hpp"

namespace tmev::io {

using nlohmann::json;

namespace {

json tpath_to_json(const scan::TPath& p) {
  json j;
  j["root"] = p.root;
  j["source"] = p.source;
  j["node_chain"] = p.node_chain;
  j["call_sequence"] = p.call_sequence;
  j["classification"] = scan::path_class_name(p.classification);
  j["g_form"] = p.g_form;
  j["reject_reason"] = p.reject_reason;
  j["constraints"] = json::array();
  for (const auto& c : p.constraints)
    j["constraints"].push_back({{"call_index", c.call_index},
                                {"function", c.function},
                                {"text", c.text}});
  j["witness"] = json::array();
  for (const auto& w : p.witness)
    j["witness"].push_back({{"function", w.function}, {"args", w.args}});
  return j;
}

scan::TPath tpath_from_json(const json& j) {
  scan::TPath p;
  p.root = j.at("root").get<int>();
  p.source = j.at("source").get<int>();
  p.node_chain = j.at("node_chain").get<std::vector<int>>();
  p.call_sequence = j.at("call_sequence").get<std::vector<std::string>>();
  p.classification =
      scan::path_class_from_name(j.at("classification").get<std::string>());
  p.g_form = j.value("g_form", "");
  p.reject_reason = j.value("reject_reason", "");
  for (const auto& c : j.value("constraints", json::array()))
    p.constraints.push_back({c.at("call_index").get<int>(),
                             c.at("function").get<std::string>(),
                             c.at("text").get<std::string>()});
  for (const auto& w : j.value("witness", json::array()))
    p.witness.push_back({w.at("function").get<std::string>(),
                         w.at("args").get<std::vector<std::string>>()});
  return p;
}

json report_to_json(const scan::TscReport& r) {
  json j;
  j["contract"] = r.contract;
  j["verdict"] = r.tsc_token ? "tsc_token" : "non_tsc_token";
  j["tsc_kind_summary"] = r.tsc_kind_summary;
  j["tpaths"] = json::array();
  for (const auto& p : r.tpaths) j["tpaths"].push_back(tpath_to_json(p));
  return j;
}

scan::TscReport report_from_json(const json& j) {
  scan::TscReport r;
  r.contract = j.at("contract").get<std::string>();
  r.tsc_token = j.at("verdict").get<std::string>() == "tsc_token";
  r.tsc_kind_summary =
      j.value("tsc_kind_summary", std::map<std::string, int>{});
  for (const auto& p : j.value("tpaths", json::array()))
    r.tpaths.push_back(tpath_from_json(p));
  return r;
}

// Int args may arrive as JSON integers; normalize to decimal strings.
std::string arg_to_string(const json& a) {
  if (a.is_string()) return a.get<std::string>();
  if (a.is_number_integer()) {
    if (a.is_number_unsigned()) return std::to_string(a.get<uint64_t>());
    return std::to_string(a.get<int64_t>());
  }
  throw FixtureError("argument must be a string or an integer");
}

std::vector<std::string> args_from_json(const json& j) {
  std::vector<std::string> out;
  for (const auto& a : j) out.push_back(arg_to_string(a));
  return out;
}

json tx_to_json(const sim::Tx& tx) {
  return {{"sender", tx.sender},
          {"target", tx.target},
          {"function", tx.function},
          {"args", tx.args}};
}

sim::Tx tx_from_json(const json& j) {
  sim::Tx tx;
  tx.sender = j.at("sender").get<std::string>();
  tx.target = j.at("target").get<std::string>();
  tx.function = j.at("function").get<std::string>();
  tx.args = args_from_json(j.at("args"));
  return tx;
}

json plan_to_json(const search::MevPlan& p) {
  json j;
  j["template"] = search::template_name(p.template_id);
  j["token"] = p.token;
  j["victim_tx_id"] = p.victim_tx_id;
  j["searcher"] = p.searcher;
  j["pool_bindings"] = p.pool_bindings;
  j["profit"] = to_dec(p.profit);
  json args = json::object();
  for (const auto& [k, v] : p.solved_args) args[k] = to_dec(v);
  j["solved_args"] = std::move(args);
  j["bundle"] = json::array();
  for (const auto& tx : p.bundle) j["bundle"].push_back(tx_to_json(tx));
  return j;
}

search::MevPlan plan_from_json(const json& j) {
  search::MevPlan p;
  p.template_id =
      search::template_from_name(j.at("template").get<std::string>());
  p.token = j.at("token").get<std::string>();
  p.victim_tx_id = j.at("victim_tx_id").get<std::string>();
  p.searcher = j.at("searcher").get<std::string>();
  p.pool_bindings =
      j.value("pool_bindings", std::map<std::string, std::string>{});
  p.profit = from_dec(j.at("profit").get<std::string>());
  if (auto it = j.find("solved_args"); it != j.end())
    for (const auto& [k, v] : it->items())
      p.solved_args[k] = from_dec(v.get<std::string>());
  for (const auto& tx : j.at("bundle")) p.bundle.push_back(tx_from_json(tx));
  return p;
}

json parse_or_throw(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw FixtureError("malformed JSON in " + what);
  return j;
}

}  // namespace

std::string reports_to_string(const std::vector<scan::TscReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return arr.dump(2) + "\n";
}

std::vector<scan::TscReport> parse_reports(const std::string& text) {
  json j = parse_or_throw(text, "report file");
  std::vector<scan::TscReport> out;
  try {
    if (j.is_object()) {
      out.push_back(report_from_json(j));
    } else if (j.is_array()) {
      for (const auto& r : j) out.push_back(report_from_json(r));
    } else {
      throw FixtureError("report file must hold an object or an array");
    }
  } catch (const json::exception& e) {
    throw FixtureError(std::string("bad report field: ") + e.what());
  }
  return out;
}

std::string plans_to_jsonl(const std::vector<search::MevPlan>& plans) {
  std::string out;
  for (const auto& p : plans) out += plan_to_json(p).dump() + "\n";
  return out;
}

std::vector<search::MevPlan> parse_plans_jsonl(const std::string& text) {
  std::vector<search::MevPlan> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(
          plan_from_json(parse_or_throw(line, "plan file")));
    } catch (const json::exception& e) {
      throw FixtureError("plan line " + std::to_string(lineno) + ": " +
                         e.what());
    }
  }
  return out;
}

std::vector<search::MempoolTx> parse_mempool_jsonl(
    const std::string& text, std::vector<std::string>* warnings) {
  std::vector<search::MempoolTx> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto warn = [&](const std::string& msg) {
    if (warnings)
      warnings->push_back("mempool line " + std::to_string(lineno) + ": " +
                          msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      warn("not a JSON object, skipped");
      continue;
    }
    try {
      search::MempoolTx tx;
      tx.id = j.at("id").get<std::string>();
      tx.tx.sender = j.at("sender").get<std::string>();
      tx.tx.target = j.at("target").get<std::string>();
      tx.tx.function = j.at("function").get<std::string>();
      tx.tx.args = args_from_json(j.value("args", json::array()));
      out.push_back(std::move(tx));
    } catch (const std::exception& e) {
      warn(std::string(e.what()) + ", skipped");
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FixtureError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FixtureError("cannot write " + path);
  out << text;
  if (!out.good()) throw FixtureError("short write to " + path);
}

}  // namespace tmev::io
