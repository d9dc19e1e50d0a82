#pragma once

#include <string>

#include "tmev/ast.hpp"

namespace tmev::lang {

// Canonical source form; parse(pretty_print(u)) is structurally equal
// to u.
std::string pretty_print(const SourceUnit& unit);
std::string pretty_print(const ContractIR& contract);
std::string pretty_expr(const Expr& e);

}  // namespace tmev::lang
