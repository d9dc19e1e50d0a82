#pragma once

#include <string>

#include "tmev/ast.hpp"

namespace tmev::lang {

// Syntax only; no validation.
SourceUnit parse_unit(const std::string& source, const std::string& source_name);

// Checks name resolution, typing and return-path rules.
// Throws ValidationError on failure.
void validate(const SourceUnit& unit);

// parse = parse_unit + validate.
SourceUnit parse(const std::string& source, const std::string& source_name = "<memory>");

// Single expression, e.g. a path-constraint string from a scan report.
// Names are not resolved.
ExprPtr parse_expression(const std::string& source);

}  // namespace tmev::lang
