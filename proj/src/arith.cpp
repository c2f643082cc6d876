#include "tbv/arith.hpp"

#include <boost/multiprecision/integer.hpp>

namespace tbv {

Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

Int lcm_all(const std::vector<Int>& xs) {
  if (xs.empty()) throw ArgumentError("lcm_all: empty list");
  Int acc = 1;
  for (const Int& x : xs) {
    if (x <= 0) throw ArgumentError("lcm_all: entries must be positive");
    acc = lcm(acc, x);
  }
  return acc;
}

Int lcm_all(const std::vector<std::uint64_t>& xs) {
  std::vector<Int> v(xs.begin(), xs.end());
  return lcm_all(v);
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  if (n == 0) throw ArgumentError("factorize: zero has no factorization");
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1u);
  return out;
}

}  // namespace tbv
