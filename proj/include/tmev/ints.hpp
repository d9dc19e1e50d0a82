#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace tmev {

// All on-chain quantities are arbitrary-precision signed integers.
using Int = boost::multiprecision::cpp_int;

// Division rounds toward negative infinity.  For the non-negative
// operands that dominate balance math this coincides with truncation.
// Divide-by-zero is reported by the caller's fault path; these helpers
// throw std::domain_error which call sites translate.
Int floor_div(const Int& a, const Int& b);
Int ceil_div(const Int& a, const Int& b);

// Integer sqrt (floor), used by closed-form sandwich optima.
Int isqrt(const Int& n);

std::string to_dec(const Int& v);
Int from_dec(const std::string& s);

}  // namespace tmev
