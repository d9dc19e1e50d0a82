#pragma once

#include <string>
#include <vector>

#include "tmev/scan.hpp"
#include "tmev/search.hpp"

namespace tmev::io {

// Scan reports travel as a JSON array (one object per contract); plans
// and mempool records as JSON lines.  All integers are decimal strings
// and keys serialize sorted, so identical inputs yield identical bytes.
// Layouts are documented in docs/formats.md.

std::string reports_to_string(const std::vector<scan::TscReport>& reports);
// Accepts either an array or a single report object.
std::vector<scan::TscReport> parse_reports(const std::string& text);

std::string plans_to_jsonl(const std::vector<search::MevPlan>& plans);
std::vector<search::MevPlan> parse_plans_jsonl(const std::string& text);

// Malformed lines are skipped; each appends one message to `warnings`.
std::vector<search::MempoolTx> parse_mempool_jsonl(
    const std::string& text, std::vector<std::string>* warnings = nullptr);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tmev::io
