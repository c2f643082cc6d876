#ifndef TBV_ARITH_HPP
#define TBV_ARITH_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tbv/errors.hpp"

namespace tbv {

/// Exact integer used for all period bookkeeping. Constructive period
/// structures grow geometrically, so fixed-width arithmetic is not an option.
using Int = boost::multiprecision::cpp_int;

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

/// Least common multiple of a nonempty list of positive integers.
Int lcm_all(const std::vector<Int>& xs);
Int lcm_all(const std::vector<std::uint64_t>& xs);

/// Prime factorization by trial division, smallest prime first.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

}  // namespace tbv

#endif  // TBV_ARITH_HPP
