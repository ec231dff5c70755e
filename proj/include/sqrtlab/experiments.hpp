#pragma once

// Averaged-over-q experiments: the discrepancy average behind the main
// theorem, character-sum averaging, exponent fitting, the local-spacings
// exploration, and the seeded sweep driver. The modulus q = 2 is excluded
// from every average (the Jacobi symbol and root pairing need odd q); the
// average is divided by Q, not by the prime count, exactly as in the
// theorem.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqrtlab/roots.hpp"

namespace sqrtlab {

struct SweepRow {
  u64 q;
  u64 lambda_star;
  u64 delta_scaled;  // q * Delta, exact numerator over denominator q
  u64 n_q;
  i64 char_sum;
  u64 pi_p;
  double bound_value;  // normalized theorem bound at this row's cutoff
  std::optional<u64> seed;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  u64 points = 0;
};

enum class PMode {
  fixed,    // one cutoff P for every modulus
  modulus,  // per-modulus cutoff P = q (the P = q diagonal)
};

struct AvgResult {
  double average = 0.0;  // (1/Q) sum over odd primes q <= Q of max Delta
  double bound = 0.0;    // theorem_bound at the cell's nominal (P, Q)
  double ratio = 0.0;    // average / bound
  bool q2_excluded = false;
  std::vector<SweepRow> rows;  // sorted by q
};

inline constexpr double kMaxFullLambdaQ = 100'000;
inline constexpr double kMaxSampledQ = 1'000'000;

AvgResult avg_max_discrepancy(double P, double Q, PMode p_mode,
                              const LambdaStrategy& strategy,
                              const PrimeTable& primes, unsigned threads = 0);

struct CharAvgResult {
  double avg_abs_dev = 0.0;    // (1/Q) sum |N_q(P) - pi(P)/2|
  double second_moment = 0.0;  // sum |char sum|^2
  double ratio_first = 0.0;    // avg_abs_dev / P^{1/2}
  double ratio_second = 0.0;   // second_moment / (P*Q)
  bool q2_excluded = false;
};

CharAvgResult avg_char_deviation(double P, double Q, const PrimeTable& primes,
                                 unsigned threads = 0);

/// Least-squares fit of log(value) against log(scale) (or raw values when
/// log_log is false). Requires >= 3 points, all positive in log mode.
FitResult exponent_fit(std::span<const std::pair<double, double>> series,
                       bool log_log = true);

struct SpacingHistogram {
  std::vector<double> edges;   // bins+1 edges over [0, max normalized gap]
  std::vector<u64> counts;     // gap counts per bin
  u64 points = 0;              // distinct elements of the combined sequence
  u64 collisions = 0;          // duplicates collapsed in the union
  double mean_gap = 0.0;       // of normalized gaps; 1 by construction
  double sup_distance = 0.0;   // sup_t |ecdf(t) - (1 - e^{-t})| on edges
};

/// Nearest-neighbour statistics of the union of {primes <= q} and
/// {n^2 mod q : 1 <= n <= n_max} inside [1, q], gaps normalized to mean 1.
SpacingHistogram spacing_histogram(const Modulus& q, u64 n_max, unsigned bins);

/// Default square count from the paper's setup: floor(q / log q).
u64 default_spacing_n_max(u64 q);

struct SweepConfig {
  std::vector<double> q_grid;          // required, one Q per cell
  std::vector<double> p_grid;          // empty => P = Q per cell
  PMode p_mode = PMode::fixed;
  LambdaStrategy strategy = LambdaStrategy::full();
  u64 seed = 0;
  unsigned threads = 0;
  u64 full_lambda_limit = kDefaultFullLambdaLimit;
};

struct SweepCell {
  double p = 0.0;
  double q = 0.0;
  AvgResult result;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  std::optional<FitResult> fit;  // log-log fit of average vs Q, >= 3 cells
};

/// Deterministic execution over the grid: identical config and seed yield
/// identical results (and byte-identical CSV downstream). `on_cell`, when
/// set, is invoked after each cell so callers can flush partial results.
SweepResult run_sweep(const SweepConfig& config,
                      const std::function<void(const SweepCell&)>& on_cell =
                          {});

}  // namespace sqrtlab
