#include "sqrtlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sqrtlab/expsums.hpp"
#include "sqrtlab/parallel.hpp"
#include "sqrtlab/rng.hpp"

namespace sqrtlab {

namespace {

std::vector<u64> odd_primes_up_to(double Q, const PrimeTable& primes) {
  std::vector<u64> out;
  for (u64 p : primes.primes()) {
    if (static_cast<double>(p) > Q) break;
    if (p > 2) out.push_back(p);
  }
  return out;
}

void check_pq(double P, double Q) {
  if (P < 2 || Q < P)
    throw std::invalid_argument("experiments: need 2 <= P <= Q");
}

}  // namespace

AvgResult avg_max_discrepancy(double P, double Q, PMode p_mode,
                              const LambdaStrategy& strategy,
                              const PrimeTable& primes, unsigned threads) {
  check_pq(P, Q);
  const bool full = strategy.kind == LambdaStrategy::Kind::full;
  if (full && Q > kMaxFullLambdaQ)
    throw BudgetError(
        "avg_max_discrepancy: full lambda enumeration capped at Q <= 1e5");
  if (!full && Q > kMaxSampledQ)
    throw BudgetError("avg_max_discrepancy: sampled runs capped at Q <= 1e6");
  if (static_cast<double>(primes.limit()) < std::max(P, Q))
    throw std::invalid_argument("avg_max_discrepancy: prime table too small");

  const std::vector<u64> moduli = odd_primes_up_to(Q, primes);
  std::vector<SweepRow> rows(moduli.size());

  parallel_for(moduli.size(), threads, [&](std::size_t i) {
    const u64 qv = moduli[i];
    const Modulus q(qv);
    const double p_cut = p_mode == PMode::fixed ? P : static_cast<double>(qv);
    LambdaStrategy local = strategy;
    if (!full) local.seed = mix_seed(strategy.seed, qv);
    auto [lambda_star, report] =
        max_discrepancy_over_lambda(q, p_cut, primes, local);
    const auto counts = residue_prime_count(q, p_cut, primes);
    rows[i] = SweepRow{qv,
                       lambda_star,
                       report.delta_numerator,
                       counts.n_q,
                       counts.char_sum,
                       report.pi_p,
                       theorem_bound(p_cut, Q),
                       full ? std::nullopt : std::optional<u64>(strategy.seed)};
  });

  AvgResult out;
  out.q2_excluded = Q >= 2;
  out.rows = std::move(rows);
  CompensatedSum sum;
  for (const auto& row : out.rows)
    sum.add(static_cast<double>(row.delta_scaled) /
            static_cast<double>(row.q));
  out.average = sum.value() / Q;
  out.bound = theorem_bound(p_mode == PMode::fixed ? P : Q, Q);
  out.ratio = out.average / out.bound;
  return out;
}

CharAvgResult avg_char_deviation(double P, double Q, const PrimeTable& primes,
                                 unsigned threads) {
  if (P < 1 || Q < P)
    throw std::invalid_argument("avg_char_deviation: need 1 <= P <= Q");
  if (static_cast<double>(primes.limit()) < Q)
    throw std::invalid_argument("avg_char_deviation: prime table too small");

  CharAvgResult out;
  out.q2_excluded = Q >= 2;
  const std::vector<u64> moduli = odd_primes_up_to(Q, primes);
  const u64 pi_p = primes.count_up_to(static_cast<u64>(P));
  if (pi_p == 0) return out;

  std::vector<i64> abs_dev_doubled(moduli.size());
  std::vector<double> sq(moduli.size());
  parallel_for(moduli.size(), threads, [&](std::size_t i) {
    const Modulus q(moduli[i]);
    const auto counts = residue_prime_count(q, P, primes);
    // |N_q - pi(P)/2| kept exact as |2 N_q - pi(P)| / 2.
    abs_dev_doubled[i] = std::abs(2 * static_cast<i64>(counts.n_q) -
                                  static_cast<i64>(pi_p));
    sq[i] = static_cast<double>(counts.char_sum) *
            static_cast<double>(counts.char_sum);
  });

  CompensatedSum dev_sum, sq_sum;
  for (i64 d : abs_dev_doubled) dev_sum.add(static_cast<double>(d) / 2.0);
  for (double s : sq) sq_sum.add(s);
  out.avg_abs_dev = dev_sum.value() / Q;
  out.second_moment = sq_sum.value();
  out.ratio_first = out.avg_abs_dev / std::sqrt(P);
  out.ratio_second = out.second_moment / (P * Q);
  return out;
}

FitResult exponent_fit(std::span<const std::pair<double, double>> series,
                       bool log_log) {
  if (series.size() < 3)
    throw std::invalid_argument("exponent_fit: need at least 3 points");
  std::vector<double> xs, ys;
  xs.reserve(series.size());
  ys.reserve(series.size());
  for (const auto& [scale, value] : series) {
    if (log_log && (scale <= 0.0 || value <= 0.0))
      throw std::invalid_argument("exponent_fit: points must be positive");
    xs.push_back(log_log ? std::log(scale) : scale);
    ys.push_back(log_log ? std::log(value) : value);
  }

  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("exponent_fit: degenerate scales");

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = xs.size();
  double ss_res = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

u64 default_spacing_n_max(u64 q) {
  return static_cast<u64>(static_cast<double>(q) /
                          std::log(static_cast<double>(q)));
}

SpacingHistogram spacing_histogram(const Modulus& q, u64 n_max,
                                   unsigned bins) {
  const u64 qv = q.value();
  if (!q.is_prime())
    throw std::invalid_argument("spacing_histogram: q must be prime");
  if (bins < 1) throw std::invalid_argument("spacing_histogram: bins >= 1");
  if (n_max < 1) throw std::invalid_argument("spacing_histogram: n_max >= 1");

  std::vector<u64> values;
  {
    PrimeTable table(qv);
    values = table.primes();
  }
  for (u64 n = 1; n <= n_max; ++n) {
    u64 s = mul_mod(n % qv, n % qv, qv);
    if (s != 0) values.push_back(s);  // 0 falls outside [1, q]
  }
  const std::size_t raw = values.size();
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  SpacingHistogram out;
  out.points = values.size();
  out.collisions = raw - values.size();
  if (values.size() < 2)
    throw std::invalid_argument("spacing_histogram: fewer than two points");

  std::vector<double> gaps(values.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    gaps[i] = static_cast<double>(values[i + 1] - values[i]);
    total += gaps[i];
  }
  const double mean = total / static_cast<double>(gaps.size());
  double norm_total = 0.0, max_gap = 0.0;
  for (double& g : gaps) {
    g /= mean;
    norm_total += g;
    max_gap = std::max(max_gap, g);
  }
  out.mean_gap = norm_total / static_cast<double>(gaps.size());

  out.edges.resize(bins + 1);
  out.counts.assign(bins, 0);
  for (unsigned b = 0; b <= bins; ++b)
    out.edges[b] = max_gap * static_cast<double>(b) / bins;
  for (double g : gaps) {
    auto b = static_cast<std::size_t>(g / max_gap * bins);
    if (b >= bins) b = bins - 1;
    out.counts[b]++;
  }

  // Empirical CDF against the exponential law on the bin edges.
  std::sort(gaps.begin(), gaps.end());
  const double n_gaps = static_cast<double>(gaps.size());
  for (double edge : out.edges) {
    const auto below = static_cast<double>(
        std::upper_bound(gaps.begin(), gaps.end(), edge) - gaps.begin());
    const double ecdf = below / n_gaps;
    const double model = 1.0 - std::exp(-edge);
    out.sup_distance = std::max(out.sup_distance, std::abs(ecdf - model));
  }
  return out;
}

SweepResult run_sweep(const SweepConfig& config,
                      const std::function<void(const SweepCell&)>& on_cell) {
  if (config.q_grid.empty())
    throw std::invalid_argument("run_sweep: q_grid must not be empty");
  if (!config.p_grid.empty() && config.p_grid.size() != 1 &&
      config.p_grid.size() != config.q_grid.size())
    throw std::invalid_argument(
        "run_sweep: p_grid must be empty, a single value, or match q_grid");

  double sieve_to = 2;
  std::vector<std::pair<double, double>> cells_pq;
  for (std::size_t i = 0; i < config.q_grid.size(); ++i) {
    const double Q = config.q_grid[i];
    double P = Q;
    if (!config.p_grid.empty())
      P = config.p_grid.size() == 1 ? config.p_grid[0] : config.p_grid[i];
    check_pq(P, Q);
    cells_pq.emplace_back(P, Q);
    sieve_to = std::max({sieve_to, P, Q});
  }
  PrimeTable primes(static_cast<u64>(sieve_to));

  SweepResult out;
  LambdaStrategy strategy = config.strategy;
  strategy.seed = config.seed;
  for (auto [P, Q] : cells_pq) {
    AvgResult r = avg_max_discrepancy(P, Q, config.p_mode, strategy, primes,
                                      config.threads);
    out.cells.push_back(SweepCell{P, Q, std::move(r)});
    if (on_cell) on_cell(out.cells.back());
  }

  std::vector<std::pair<double, double>> series;
  for (const auto& cell : out.cells)
    if (cell.result.average > 0.0)
      series.emplace_back(cell.q, cell.result.average);
  if (series.size() >= 3) out.fit = exponent_fit(series, true);
  return out;
}

}  // namespace sqrtlab
