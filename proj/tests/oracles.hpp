#pragma once

// Test-side reference implementations, deliberately independent of the
// library's code paths: exhaustive squaring for roots, the all-intervals
// discrepancy scan, a textbook Jacobi recursion, and a direct sup for the
// normalized discrepancy.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracles {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

/// Roots of a mod q by trying every x.
inline std::vector<u64> sqrt_all(u64 a, u64 q) {
  std::vector<u64> out;
  for (u64 x = 0; x < q; ++x)
    if (mulmod(x, x, q) == a % q) out.push_back(x);
  return out;
}

/// Legendre symbol by Euler's criterion (prime q).
inline int legendre(u64 a, u64 q) {
  a %= q;
  if (a == 0) return 0;
  u64 r = 1, base = a, e = (q - 1) / 2;
  while (e) {
    if (e & 1) r = mulmod(r, base, q);
    base = mulmod(base, base, q);
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

/// Jacobi symbol by the recursive textbook definition via factoring q.
inline int jacobi_by_factoring(i64 k, u64 q) {
  int result = 1;
  for (u64 p = 3; q > 1; p += 2) {
    while (q % p == 0) {
      q /= p;
      i64 r = k % static_cast<i64>(p);
      if (r < 0) r += static_cast<i64>(p);
      result *= legendre(static_cast<u64>(r), p);
    }
    if (p * p > q && q > 1) {
      i64 r = k % static_cast<i64>(q);
      if (r < 0) r += static_cast<i64>(q);
      result *= legendre(static_cast<u64>(r), q);
      break;
    }
  }
  return result;
}

struct BruteDelta {
  u64 numerator;
  u64 y;
  u64 x;
  u64 t;
};

/// Exact max over every interval [Y+1, Y+X] inside [1, q-1] of
/// |q*T - X*pi|, first-found interval kept on ties (smallest Y then X).
inline BruteDelta brute_discrepancy(const std::vector<u64>& roots, u64 q,
                                    u64 pi_p) {
  std::vector<u64> prefix(q, 0);
  {
    std::size_t idx = 0;
    for (u64 t = 1; t < q; ++t) {
      prefix[t] = prefix[t - 1];
      if (idx < roots.size() && roots[idx] == t) {
        ++prefix[t];
        ++idx;
      }
    }
  }
  BruteDelta best{0, 0, 1, 0};
  i64 best_val = -1;
  for (u64 y = 0; y <= q - 2; ++y) {
    for (u64 x = 1; y + x <= q - 1; ++x) {
      const i64 t = static_cast<i64>(prefix[y + x] - prefix[y]);
      const i64 dev = std::abs(static_cast<i64>(q) * t -
                               static_cast<i64>(x) * static_cast<i64>(pi_p));
      if (dev > best_val) {
        best_val = dev;
        best = BruteDelta{static_cast<u64>(dev), y, x,
                          static_cast<u64>(t)};
      }
    }
  }
  return best;
}

/// Normalized star discrepancy by direct evaluation of the sup at every
/// candidate cut, quadratic and obviously correct.
inline double brute_star_discrepancy(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double sup = 0.0;
  auto count_below = [&](double gamma) {
    return static_cast<double>(
        std::lower_bound(xs.begin(), xs.end(), gamma) - xs.begin());
  };
  for (double cut : xs) {
    // gamma -> cut^- and gamma -> cut^+ (cut itself enters at ^+).
    sup = std::max(sup, std::abs(count_below(cut) - cut * n));
    const double above = std::nextafter(cut, 2.0);
    sup = std::max(sup, std::abs(count_below(above) - cut * n));
  }
  return sup / n;
}

/// pi(x) by trial division.
inline u64 prime_count(u64 x) {
  u64 count = 0;
  for (u64 n = 2; n <= x; ++n) {
    bool prime = n >= 2;
    for (u64 d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime) ++count;
  }
  return count;
}

}  // namespace oracles
