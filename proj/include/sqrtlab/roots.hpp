#pragma once

// Root sets of x^2 = lambda * p (mod q) over primes p <= P, and the exact
// interval discrepancy of those sets. Discrepancies are kept as scaled
// integers (numerator over denominator q), never floats: the sup over
// intervals is attained on a finite candidate set and exactness makes the
// oracle tests equality-based.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sqrtlab/arith.hpp"

namespace sqrtlab {

struct RootSet {
  Modulus q;
  u64 lambda;
  double p_max;
  std::vector<u64> roots;  // strictly increasing, inside [1, q-1]
  u64 n_residue_primes;    // primes p <= P (p != 0 mod q) with lambda*p a QR
  u64 pi_p;                // pi(p_max), cached for the discrepancy main term
};

/// Union of sqrt_mod(lambda * p mod q) over primes p <= p_max, p not
/// divisible by q. Set semantics: primes colliding mod q (possible only for
/// p_max >= q) contribute one root pair.
RootSet build_root_set(const Modulus& q, u64 lambda, double p_max,
                       const PrimeTable& primes);

/// Number of roots in [Y+1, Y+X]; the interval must stay inside [1, q-1].
u64 count_T(const RootSet& rs, u64 X, u64 Y);

struct DiscrepancyReport {
  u64 delta_numerator;  // max over intervals of |q*T - X*pi(P)|
  u64 denominator;      // q
  u64 interval_y;       // maximizing interval is [Y+1, Y+X]
  u64 interval_x;
  u64 count_in_interval;
  u64 pi_p;

  double delta() const {
    return static_cast<double>(delta_numerator) /
           static_cast<double>(denominator);
  }
};

/// Exact discrepancy max_{[Y+1,Y+X]} |T - (X/q) pi(P)|, scaled by q.
/// Positive deviations are maximized on intervals whose endpoints are both
/// roots; negative ones on maximal root-free extensions; both families are
/// scanned in O(n) after sorting.
DiscrepancyReport discrepancy(const RootSet& rs);

struct LambdaStrategy {
  enum class Kind { full, sample };

  Kind kind = Kind::full;
  u64 sample_count = 0;
  u64 seed = 0;

  static LambdaStrategy full() { return {}; }
  static LambdaStrategy sample(u64 count, u64 seed) {
    return {Kind::sample, count, seed};
  }
};

inline constexpr u64 kDefaultFullLambdaLimit = 100'000;

/// Maximizing lambda and its discrepancy report. `full` enumerates every
/// unit (exact; rejected above full_limit), `sample` draws seeded lambdas
/// and is a lower bound on the true maximum. Ties break to the smallest
/// lambda.
std::pair<u64, DiscrepancyReport> max_discrepancy_over_lambda(
    const Modulus& q, double p_max, const PrimeTable& primes,
    const LambdaStrategy& strategy, u64 full_limit = kDefaultFullLambdaLimit);

struct ResiduePrimeCount {
  u64 n_q;       // primes p <= P, p != q, with (p/q) = +1
  i64 char_sum;  // sum over those p of (p/q)
  u64 pi_p;
};

/// N_q(P) and the character sum over primes; they satisfy
/// n_q = (pi_p - [q <= P] + char_sum) / 2.
ResiduePrimeCount residue_prime_count(const Modulus& q, double p_max,
                                      const PrimeTable& primes);

namespace detail {

/// Scaled discrepancy (numerator only) of a symmetric root set given just
/// its lower half sorted ascending: the full set is {h, q-h} for h in half.
/// pi_p is the pi(P) entering the main term.
u64 scaled_discrepancy_from_half(const std::vector<u64>& half, u64 q,
                                 u64 pi_p);

}  // namespace detail

}  // namespace sqrtlab
