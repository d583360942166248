#include <cmath>
#include <set>

#include "doctest.h"
#include "dnafb/rng.hpp"

using namespace dnafb;

TEST_CASE("same seed gives the same stream") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("sub_seed separates streams") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 64; ++s)
    for (std::uint64_t t = 0; t < 64; ++t) seen.insert(sub_seed(s, t));
  CHECK(seen.size() == 64u * 64u);
  CHECK(sub_seed(7, 3) == sub_seed(7, 3));
  CHECK(sub_seed(7, 3) != sub_seed(3, 7));
}

TEST_CASE("uniform doubles live in [0,1) with the right mean") {
  Rng rng(99);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // std of the mean is 1/sqrt(12 n); allow 4 sigma
  CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("bounded integers are in range and roughly uniform") {
  Rng rng(7);
  const std::uint32_t bound = 7;
  std::vector<int> hist(bound, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const std::uint32_t v = rng.uniform_int(bound);
    REQUIRE(v < bound);
    ++hist[v];
  }
  const double expect = static_cast<double>(n) / bound;
  const double sigma = std::sqrt(expect * (1.0 - 1.0 / bound));
  for (int c : hist) CHECK(std::abs(c - expect) < 5 * sigma);
  CHECK(rng.uniform_int(1) == 0);
}
