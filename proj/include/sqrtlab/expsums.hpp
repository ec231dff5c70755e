#pragma once

// Weyl sums over square roots of primes, von-Mangoldt-weighted sums,
// bilinear forms, incomplete square-root sums, and evaluators for the
// normalized bound formulas (every o(1) exponent factor is set to 1), plus
// the Erdos-Turan discrepancy bound. Phases are always reduced mod q in
// exact integer arithmetic before any conversion to floating point.

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "sqrtlab/arith.hpp"

namespace sqrtlab {

/// Complex weight sequence (1-indexed in formulas, stored from 0) with
/// cached 1-, 2- and infinity-norms.
struct WeightVector {
  std::vector<std::complex<double>> values;
  double norm_1 = 0.0;
  double norm_2 = 0.0;
  double norm_inf = 0.0;

  static WeightVector from(std::vector<std::complex<double>> v);
  static WeightVector ones(std::size_t n);

  std::size_t size() const { return values.size(); }

  /// The normalization of the bound formulas: ||.||_2 <= sqrt(M) and
  /// ||.||_inf <= 1.
  bool normalized() const;
};

struct SumValue {
  std::complex<double> value;
  u64 terms = 0;         // summands accumulated
  u64 kernel_evals = 0;  // root extractions performed
  double trivial_bound = 0.0;  // terms * max term modulus
};

/// S_q(h,P) = sum over primes p <= P, over x with x^2 = p (mod q), of
/// e_q(hx). The term p = q contributes x = 0 when q <= P.
SumValue weyl_sum_S(const Modulus& q, u64 h, double p_max,
                    const PrimeTable& primes);

/// Lambda-weighted variant: sum_{k <= T} Lambda(k) sum_{x^2 = k} e_q(hx).
SumValue mangoldt_sum(const Modulus& q, u64 h, double t_max,
                      const PrimeTable& primes);

inline constexpr u64 kCompositeRootSearchLimit = 1'000'000;

/// Bilinear form W = sum*_m sum*_n alpha_m beta_n sum_{x^2 = amn} e_q(hx),
/// with indices of gcd(.,q) > 1 skipped (the paper's starred convention;
/// the cached norms are still taken over the full vectors). Roots modulo
/// composite odd q come from exhaustive squaring, allowed up to
/// kCompositeRootSearchLimit. Weights longer than q are rejected unless
/// allow_long_weights is set.
SumValue bilinear_W(const Modulus& q, u64 a, u64 h, const WeightVector& alpha,
                    const WeightVector& beta, bool allow_long_weights = false);

struct IncompleteSum {
  SumValue sum;
  double lemma_ratio;  // |value| / (sqrt(q) * log q)
};

/// sum_{w=1}^{W} sum_{x^2 = aw} e_q(hx) for prime q, with the ratio against
/// the sqrt(q) log q envelope recorded alongside.
IncompleteSum incomplete_sqrt_sum(const Modulus& q, u64 a, u64 h, u64 W);

/// (MN)^{3/4} Q^{1/8} (M^{1/4} Q^{-1/8} + 1)(N^{1/4} Q^{-1/8} + 1).
double bound_B(double M, double N, double Q);

/// The two older normalized bounds, exponents 19/24 and 13/16.
std::pair<double, double> bounds_old(double M, double N, double q);

/// P^{11/12} + P^{4/5} Q^{1/10}; requires 1 <= P <= Q.
double theorem_bound(double P, double Q);

struct OptimizedParams {
  double L, S, U;
};

/// (P^{1/5}, P^{1/3}, P^{1/5} Q^{2/5}); satisfies U >= S >= L >= 1 for
/// 1 <= P <= Q.
OptimizedParams optimized_parameters(double P, double Q);

/// 3 * (1/(H+1) + (1/N) * sum_{h=1}^{H} |S_h| / h). `abs_sums` holds the
/// moduli |sum_n e(h xi_n)| for h = 1..H and must have exactly H entries.
double erdos_turan_bound(std::span<const double> abs_sums, u64 N, u64 H);

/// Normalized star discrepancy sup_gamma |#{xi_n < gamma} - gamma N| / N of
/// a finite sequence in [0,1); the quantity the Erdos-Turan bound controls.
double normalized_discrepancy(std::vector<double> points);

}  // namespace sqrtlab
