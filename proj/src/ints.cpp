#include "tmev/ints.hpp"

#include <stdexcept>

namespace tmev {

Int floor_div(const Int& a, const Int& b) {
  if (b == 0) throw std::domain_error("division by zero");
  Int q = a / b;  // truncates toward zero
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

Int ceil_div(const Int& a, const Int& b) {
  if (b == 0) throw std::domain_error("division by zero");
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) q += 1;
  return q;
}

Int isqrt(const Int& n) {
  if (n < 0) throw std::domain_error("isqrt of negative");
  if (n < 2) return n;
  Int x = n, y = (x + 1) / 2;
  while (y < x) {
    x = y;
    y = (x + n / x) / 2;
  }
  return x;
}

std::string to_dec(const Int& v) { return v.str(); }

Int from_dec(const std::string& s) { return Int(s); }

}  // namespace tmev
