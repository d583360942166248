#pragma once

#include <cstdint>
#include <vector>

namespace dnafb {

/// Arithmetic over GF(2^k), k = 1..8, with a fixed primitive polynomial per k
/// (x^4 + x + 1 for the GF(16) used by the outer codes).
class GaloisField {
 public:
  explicit GaloisField(int bits);

  int bits() const { return bits_; }
  int order() const { return order_; }

  int add(int a, int b) const { return a ^ b; }
  int sub(int a, int b) const { return a ^ b; }
  int mul(int a, int b) const;
  int inv(int a) const;  // throws on a == 0
  int div(int a, int b) const { return mul(a, inv(b)); }

 private:
  int bits_;
  int order_;
  std::vector<int> log_;
  std::vector<int> exp_;
};

}  // namespace dnafb
