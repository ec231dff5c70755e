#include "sqrtlab/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sqrtlab {

WeightVector WeightVector::from(std::vector<std::complex<double>> v) {
  WeightVector w;
  w.values = std::move(v);
  CompensatedSum s1, s2;
  for (const auto& z : w.values) {
    const double a = std::abs(z);
    s1.add(a);
    s2.add(a * a);
    w.norm_inf = std::max(w.norm_inf, a);
  }
  w.norm_1 = s1.value();
  w.norm_2 = std::sqrt(s2.value());
  return w;
}

WeightVector WeightVector::ones(std::size_t n) {
  return from(std::vector<std::complex<double>>(n, {1.0, 0.0}));
}

bool WeightVector::normalized() const {
  return norm_2 <= std::sqrt(static_cast<double>(values.size())) + 1e-12 &&
         norm_inf <= 1.0 + 1e-12;
}

namespace {

void check_unit(u64 h, u64 q, const char* who) {
  if (h % q == 0 || std::gcd(h % q, q) != 1)
    throw std::invalid_argument(std::string(who) +
                                ": argument must be a unit mod q");
}

}  // namespace

SumValue weyl_sum_S(const Modulus& q, u64 h, double p_max,
                    const PrimeTable& primes) {
  const u64 qv = q.value();
  if (!q.is_prime())
    throw std::invalid_argument("weyl_sum_S: q must be prime");
  check_unit(h, qv, "weyl_sum_S");
  if (static_cast<double>(primes.limit()) < p_max)
    throw std::invalid_argument("weyl_sum_S: prime table too small");

  ComplexSum acc;
  SumValue out;
  for (u64 p : primes.primes()) {
    if (static_cast<double>(p) > p_max) break;
    ++out.kernel_evals;
    for (u64 x : sqrt_mod(p % qv, q)) {
      acc.add(unit_phase(mul_mod(h % qv, x, qv), qv));
      ++out.terms;
    }
  }
  out.value = acc.value();
  out.trivial_bound = static_cast<double>(out.terms);
  return out;
}

SumValue mangoldt_sum(const Modulus& q, u64 h, double t_max,
                      const PrimeTable& primes) {
  const u64 qv = q.value();
  if (!q.is_prime())
    throw std::invalid_argument("mangoldt_sum: q must be prime");
  check_unit(h, qv, "mangoldt_sum");

  ComplexSum acc;
  SumValue out;
  double max_weight = 0.0;
  const u64 k_max = t_max < 1 ? 0 : static_cast<u64>(t_max);
  // Lambda is supported on prime powers; enumerate them from the table.
  for (u64 p : primes.primes()) {
    if (p > k_max) break;
    const double lp = std::log(static_cast<double>(p));
    for (u64 pk = p; pk <= k_max; pk *= p) {
      ++out.kernel_evals;
      for (u64 x : sqrt_mod(pk % qv, q)) {
        acc.add(lp * unit_phase(mul_mod(h % qv, x, qv), qv));
        ++out.terms;
        max_weight = std::max(max_weight, lp);
      }
      if (pk > k_max / p) break;
    }
  }
  out.value = acc.value();
  out.trivial_bound = static_cast<double>(out.terms) * max_weight;
  return out;
}

namespace {

// Roots of every residue class, by one pass of squaring; the exhaustive
// search the composite case calls for, and a fast path for prime q too.
std::vector<std::vector<u64>> all_roots_table(u64 q) {
  std::vector<std::vector<u64>> roots(q);
  for (u64 x = 0; x < q; ++x) roots[mul_mod(x, x, q)].push_back(x);
  return roots;
}

}  // namespace

SumValue bilinear_W(const Modulus& q, u64 a, u64 h, const WeightVector& alpha,
                    const WeightVector& beta, bool allow_long_weights) {
  const u64 qv = q.value();
  check_unit(a, qv, "bilinear_W");
  check_unit(h, qv, "bilinear_W");
  if (!allow_long_weights && (alpha.size() > qv || beta.size() > qv))
    throw std::invalid_argument(
        "bilinear_W: weights longer than q wrap around; pass "
        "allow_long_weights to override");
  if (!q.is_prime() && qv > kCompositeRootSearchLimit)
    throw std::invalid_argument(
        "bilinear_W: composite modulus above the exhaustive-search limit");

  const bool use_table = qv <= kCompositeRootSearchLimit;
  std::vector<std::vector<u64>> table;
  if (use_table) table = all_roots_table(qv);

  a %= qv;
  h %= qv;
  ComplexSum acc;
  SumValue out;
  for (std::size_t mi = 0; mi < alpha.size(); ++mi) {
    const u64 m = mi + 1;
    if (std::gcd(m % qv, qv) != 1) continue;  // starred summation
    const u64 am = mul_mod(a, m % qv, qv);
    for (std::size_t ni = 0; ni < beta.size(); ++ni) {
      const u64 n = ni + 1;
      if (std::gcd(n % qv, qv) != 1) continue;
      const std::complex<double> w = alpha.values[mi] * beta.values[ni];
      const u64 amn = mul_mod(am, n % qv, qv);
      ++out.kernel_evals;
      if (use_table) {
        for (u64 x : table[amn]) {
          acc.add(w * unit_phase(mul_mod(h, x, qv), qv));
          ++out.terms;
        }
      } else {
        for (u64 x : sqrt_mod(amn, q)) {
          acc.add(w * unit_phase(mul_mod(h, x, qv), qv));
          ++out.terms;
        }
      }
    }
  }
  out.value = acc.value();
  out.trivial_bound = 2.0 * alpha.norm_1 * beta.norm_1;
  return out;
}

IncompleteSum incomplete_sqrt_sum(const Modulus& q, u64 a, u64 h, u64 W) {
  const u64 qv = q.value();
  if (!q.is_prime())
    throw std::invalid_argument("incomplete_sqrt_sum: q must be prime");
  check_unit(a, qv, "incomplete_sqrt_sum");
  check_unit(h, qv, "incomplete_sqrt_sum");
  if (W == 0 || W > qv)
    throw std::invalid_argument("incomplete_sqrt_sum: need 1 <= W <= q");

  a %= qv;
  h %= qv;
  ComplexSum acc;
  SumValue out;
  const bool use_table = qv <= kCompositeRootSearchLimit;
  std::vector<std::vector<u64>> table;
  if (use_table) table = all_roots_table(qv);
  for (u64 w = 1; w <= W; ++w) {
    const u64 aw = mul_mod(a, w % qv, qv);
    ++out.kernel_evals;
    if (use_table) {
      for (u64 x : table[aw]) {
        acc.add(unit_phase(mul_mod(h, x, qv), qv));
        ++out.terms;
      }
    } else {
      for (u64 x : sqrt_mod(aw, q)) {
        acc.add(unit_phase(mul_mod(h, x, qv), qv));
        ++out.terms;
      }
    }
  }
  out.value = acc.value();
  out.trivial_bound = static_cast<double>(out.terms);
  const double envelope = std::sqrt(static_cast<double>(qv)) *
                          std::log(static_cast<double>(qv));
  return IncompleteSum{out, std::abs(out.value) / envelope};
}

double bound_B(double M, double N, double Q) {
  if (M < 1 || N < 1 || Q < 1)
    throw std::invalid_argument("bound_B: arguments must be >= 1");
  return std::pow(M * N, 0.75) * std::pow(Q, 0.125) *
         (std::pow(M, 0.25) * std::pow(Q, -0.125) + 1.0) *
         (std::pow(N, 0.25) * std::pow(Q, -0.125) + 1.0);
}

std::pair<double, double> bounds_old(double M, double N, double q) {
  if (M < 1 || N < 1 || q < 1)
    throw std::invalid_argument("bounds_old: arguments must be >= 1");
  const double b1 = std::pow(q, 1.0 / 8) * std::pow(M * N, 19.0 / 24) *
                    (std::pow(M, 7.0 / 48) / std::pow(q, 1.0 / 16) + 1.0) *
                    (std::pow(N, 7.0 / 48) / std::pow(q, 1.0 / 16) + 1.0);
  const double b2 = std::pow(q, 1.0 / 8) * std::pow(M * N, 13.0 / 16) *
                    (std::pow(M, 3.0 / 16) / std::pow(q, 1.0 / 8) + 1.0) *
                    (std::pow(N, 3.0 / 16) / std::pow(q, 1.0 / 8) + 1.0);
  return {b1, b2};
}

double theorem_bound(double P, double Q) {
  if (P < 1 || P > Q)
    throw std::invalid_argument("theorem_bound: need 1 <= P <= Q");
  return std::pow(P, 11.0 / 12) + std::pow(P, 4.0 / 5) * std::pow(Q, 0.1);
}

OptimizedParams optimized_parameters(double P, double Q) {
  if (P < 1 || P > Q)
    throw std::invalid_argument("optimized_parameters: need 1 <= P <= Q");
  OptimizedParams out{std::pow(P, 0.2), std::pow(P, 1.0 / 3),
                      std::pow(P, 0.2) * std::pow(Q, 0.4)};
  // (def:UL) ordering; holds for all P >= 1 since U >= P^{3/5}.
  if (!(out.U >= out.S - 1e-12 && out.S >= out.L - 1e-12 && out.L >= 1.0))
    throw std::logic_error("optimized_parameters: ordering violated");
  return out;
}

double erdos_turan_bound(std::span<const double> abs_sums, u64 N, u64 H) {
  if (H < 1 || N < 1) throw std::invalid_argument("erdos_turan_bound: H, N >= 1");
  if (abs_sums.size() != H)
    throw std::invalid_argument(
        "erdos_turan_bound: need exactly H partial sums");
  CompensatedSum tail;
  for (u64 h = 1; h <= H; ++h)
    tail.add(abs_sums[h - 1] / static_cast<double>(h));
  return 3.0 * (1.0 / static_cast<double>(H + 1) +
                tail.value() / static_cast<double>(N));
}

double normalized_discrepancy(std::vector<double> points) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("normalized_discrepancy: empty");
  for (double x : points)
    if (!(x >= 0.0 && x < 1.0))
      throw std::invalid_argument("normalized_discrepancy: points in [0,1)");
  std::sort(points.begin(), points.end());
  // sup over gamma of |#{xi < gamma} - gamma N| is attained as gamma
  // approaches a point from either side.
  double sup = 0.0;
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    sup = std::max(sup, std::abs(static_cast<double>(i + 1) - points[i] * dn));
    sup = std::max(sup, std::abs(static_cast<double>(i) - points[i] * dn));
  }
  sup = std::max(sup, 0.0);  // gamma -> 1 gives |n - n| = 0
  return sup / dn;
}

}  // namespace sqrtlab
