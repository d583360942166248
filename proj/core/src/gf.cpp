#include "dnafb/gf.hpp"

#include <stdexcept>

namespace dnafb {

namespace {
// Primitive polynomials, low bits; index by k. Entry k includes the x^k term.
constexpr int kPrimitive[9] = {0, 0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x89, 0x11d};
}  // namespace

GaloisField::GaloisField(int bits) : bits_(bits), order_(1 << bits) {
  if (bits < 1 || bits > 8) throw std::invalid_argument("GaloisField: bits must be in 1..8");
  log_.assign(static_cast<std::size_t>(order_), 0);
  exp_.assign(static_cast<std::size_t>(2 * order_), 0);
  const int poly = kPrimitive[bits];
  int x = 1;
  for (int i = 0; i < order_ - 1; ++i) {
    exp_[static_cast<std::size_t>(i)] = x;
    exp_[static_cast<std::size_t>(i + order_ - 1)] = x;
    log_[static_cast<std::size_t>(x)] = i;
    x <<= 1;
    if (x & order_) x ^= poly;
  }
}

int GaloisField::mul(int a, int b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[static_cast<std::size_t>(log_[static_cast<std::size_t>(a)] +
                                       log_[static_cast<std::size_t>(b)])];
}

int GaloisField::inv(int a) const {
  if (a == 0) throw std::domain_error("GaloisField: inverse of 0");
  if (a == 1) return 1;
  return exp_[static_cast<std::size_t>(order_ - 1 - log_[static_cast<std::size_t>(a)])];
}

}  // namespace dnafb
