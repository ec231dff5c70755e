#include "sqrtlab/experiments.hpp"

#include <cmath>
#include <set>

#include <doctest.h>

#include "oracles.hpp"
#include "sqrtlab/expsums.hpp"

using namespace sqrtlab;

namespace {

const PrimeTable& primes() {
  static PrimeTable table(20000);
  return table;
}

}  // namespace

TEST_CASE("avg_max_discrepancy: small cases against direct summation") {
  auto r = avg_max_discrepancy(10, 10, PMode::fixed, LambdaStrategy::full(),
                               primes(), 1);
  // Odd primes q in {3, 5, 7}; q = 2 excluded.
  REQUIRE(r.rows.size() == 3);
  CHECK(r.q2_excluded);
  double expected = 0.0;
  for (u64 qv : {3ull, 5ull, 7ull}) {
    auto [ls, rep] = max_discrepancy_over_lambda(Modulus(qv), 10, primes(),
                                                 LambdaStrategy::full());
    expected += rep.delta();
  }
  CHECK(r.average == doctest::Approx(expected / 10.0).epsilon(1e-12));
  CHECK(r.ratio == doctest::Approx(r.average / theorem_bound(10, 10)));

  auto tiny = avg_max_discrepancy(2, 3, PMode::fixed, LambdaStrategy::full(),
                                  primes(), 1);
  REQUIRE(tiny.rows.size() == 1);
  CHECK(tiny.rows[0].q == 3);
  auto [ls3, rep3] = max_discrepancy_over_lambda(Modulus(3), 2, primes(),
                                                 LambdaStrategy::full());
  CHECK(tiny.rows[0].delta_scaled == rep3.delta_numerator);
  CHECK(tiny.rows[0].lambda_star == ls3);

  CHECK_THROWS_AS(avg_max_discrepancy(10, 1, PMode::fixed,
                                      LambdaStrategy::full(), primes(), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(avg_max_discrepancy(2e5, 2e5, PMode::fixed,
                                      LambdaStrategy::full(), primes(), 1),
                  BudgetError);
}

TEST_CASE("avg_max_discrepancy: row consistency and strategy ordering") {
  auto full = avg_max_discrepancy(100, 100, PMode::fixed,
                                  LambdaStrategy::full(), primes(), 2);
  auto sampled = avg_max_discrepancy(
      100, 100, PMode::fixed, LambdaStrategy::sample(4, 99), primes(), 2);
  REQUIRE(full.rows.size() == sampled.rows.size());
  CHECK(sampled.average <= full.average + 1e-12);
  for (std::size_t i = 0; i < full.rows.size(); ++i) {
    const auto& f = full.rows[i];
    CHECK(sampled.rows[i].delta_scaled <= f.delta_scaled);
    CHECK(sampled.rows[i].seed == std::optional<u64>(99));
    CHECK(f.seed == std::nullopt);
    // n_q from char_sum and pi(P).
    const i64 included =
        static_cast<double>(f.q) <= 100.0 ? 1 : 0;
    CHECK(2 * static_cast<i64>(f.n_q) ==
          static_cast<i64>(f.pi_p) - included + f.char_sum);
    // Trivial ceiling per row.
    CHECK(f.delta_scaled <= 2 * f.n_q * f.q + (f.q - 1) * f.pi_p);
    CHECK(f.n_q <= f.pi_p);
    CHECK(std::abs(f.char_sum) <= static_cast<i64>(f.pi_p));
  }

  // Determinism of the sampled path regardless of thread count.
  auto again = avg_max_discrepancy(
      100, 100, PMode::fixed, LambdaStrategy::sample(4, 99), primes(), 1);
  for (std::size_t i = 0; i < sampled.rows.size(); ++i) {
    CHECK(again.rows[i].delta_scaled == sampled.rows[i].delta_scaled);
    CHECK(again.rows[i].lambda_star == sampled.rows[i].lambda_star);
  }
}

TEST_CASE("avg_max_discrepancy: modulus mode uses P = q per row") {
  auto diag = avg_max_discrepancy(64, 64, PMode::modulus,
                                  LambdaStrategy::full(), primes(), 2);
  for (const auto& row : diag.rows) {
    auto [ls, rep] =
        max_discrepancy_over_lambda(Modulus(row.q), double(row.q), primes(),
                                    LambdaStrategy::full());
    CHECK(row.delta_scaled == rep.delta_numerator);
    CHECK(row.lambda_star == ls);
    CHECK(row.pi_p == primes().count_up_to(row.q));
  }
}

TEST_CASE("avg_char_deviation: small pinned cases") {
  //  P=2, Q=3: only q=3; (2/3) = -1 so N=0 and |N - pi/2| = 1/2.
  auto r = avg_char_deviation(2, 3, primes(), 1);
  CHECK(r.avg_abs_dev == doctest::Approx(0.5 / 3.0).epsilon(1e-12));
  CHECK(r.second_moment == doctest::Approx(1.0).epsilon(1e-12));

  // P=1: pi(P) = 0, both vanish.
  auto zero = avg_char_deviation(1, 10, primes(), 1);
  CHECK(zero.avg_abs_dev == 0.0);
  CHECK(zero.second_moment == 0.0);

  // P=10, Q=11: q in {3,5,7,11}.
  auto r11 = avg_char_deviation(10, 11, primes(), 1);
  double dev = 0.0, second = 0.0;
  for (u64 qv : {3ull, 5ull, 7ull, 11ull}) {
    auto c = residue_prime_count(Modulus(qv), 10, primes());
    dev += std::abs(static_cast<double>(c.n_q) - 2.0);
    second += static_cast<double>(c.char_sum * c.char_sum);
  }
  CHECK(r11.avg_abs_dev == doctest::Approx(dev / 11.0).epsilon(1e-12));
  CHECK(r11.second_moment == doctest::Approx(second).epsilon(1e-12));
  CHECK(r11.ratio_first ==
        doctest::Approx(r11.avg_abs_dev / std::sqrt(10.0)));
  CHECK(r11.ratio_second ==
        doctest::Approx(r11.second_moment / 110.0));
}

TEST_CASE("exponent_fit: pinned slopes") {
  std::vector<std::pair<double, double>> half;
  for (double x : {10.0, 100.0, 1000.0}) half.emplace_back(x, std::sqrt(x));
  auto fit = exponent_fit(half);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.points == 3);

  std::vector<std::pair<double, double>> flat{{1, 5}, {10, 5}, {100, 5}};
  auto fit0 = exponent_fit(flat);
  CHECK(fit0.slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fit0.r_squared == 1.0);  // exact fit of a constant

  std::vector<std::pair<double, double>> bad{{1, 1}, {2, -1}, {3, 1}};
  CHECK_THROWS_AS(exponent_fit(bad), std::invalid_argument);
  std::vector<std::pair<double, double>> two{{1, 1}, {2, 2}};
  CHECK_THROWS_AS(exponent_fit(two), std::invalid_argument);

  // r_squared lands in [0,1] on noisy data.
  std::vector<std::pair<double, double>> noisy{
      {10, 3.0}, {20, 9.1}, {40, 4.2}, {80, 12.5}, {160, 6.3}};
  auto nf = exponent_fit(noisy);
  CHECK(nf.r_squared >= 0.0);
  CHECK(nf.r_squared <= 1.0);
}

TEST_CASE("spacing_histogram: pinned union and normalization") {
  // q = 11, n_max = 4: primes {2,3,5,7,11}, squares {1,4,9,5}.
  auto h = spacing_histogram(Modulus(11), 4, 4);
  CHECK(h.points == 8);  // {1,2,3,4,5,7,9,11}
  CHECK(h.collisions == 1);
  CHECK(h.mean_gap == doctest::Approx(1.0).epsilon(1e-9));
  u64 total = 0;
  for (u64 c : h.counts) total += c;
  CHECK(total == 7);

  auto big = spacing_histogram(Modulus(10007), default_spacing_n_max(10007),
                               25);
  CHECK(big.mean_gap == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(big.sup_distance >= 0.0);
  CHECK(big.sup_distance <= 1.0);

  CHECK_THROWS_AS(spacing_histogram(Modulus(11), 4, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(spacing_histogram(Modulus(15), 4, 4),
                  std::invalid_argument);
}

TEST_CASE("run_sweep: shapes, determinism hooks, diagonal default") {
  SweepConfig config;
  config.q_grid = {16, 32, 64, 128, 256};
  config.threads = 2;
  auto result = run_sweep(config);
  REQUIRE(result.cells.size() == 5);
  for (const auto& cell : result.cells) CHECK(cell.p == cell.q);
  REQUIRE(result.fit.has_value());
  CHECK(result.fit->points == 5);
  CHECK(result.fit->slope > 0.0);

  std::size_t callbacks = 0;
  auto again = run_sweep(config, [&](const SweepCell&) { ++callbacks; });
  CHECK(callbacks == 5);
  for (std::size_t c = 0; c < 5; ++c) {
    REQUIRE(again.cells[c].result.rows.size() ==
            result.cells[c].result.rows.size());
    for (std::size_t i = 0; i < again.cells[c].result.rows.size(); ++i) {
      CHECK(again.cells[c].result.rows[i].delta_scaled ==
            result.cells[c].result.rows[i].delta_scaled);
      CHECK(again.cells[c].result.rows[i].lambda_star ==
            result.cells[c].result.rows[i].lambda_star);
    }
  }

  SweepConfig one;
  one.q_grid = {32};
  one.p_grid = {16};
  auto single = run_sweep(one);
  REQUIRE(single.cells.size() == 1);
  CHECK(single.cells[0].p == 16);
  CHECK_FALSE(single.fit.has_value());

  SweepConfig bad;
  CHECK_THROWS_AS(run_sweep(bad), std::invalid_argument);
  bad.q_grid = {32, 64};
  bad.p_grid = {16, 32, 64};
  CHECK_THROWS_AS(run_sweep(bad), std::invalid_argument);
}
