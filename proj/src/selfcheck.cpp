#include "sqrtlab/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

#include "sqrtlab/experiments.hpp"
#include "sqrtlab/expsums.hpp"
#include "sqrtlab/identity.hpp"
#include "sqrtlab/parallel.hpp"
#include "sqrtlab/rng.hpp"
#include "sqrtlab/roots.hpp"

namespace sqrtlab {

namespace {

// All-intervals discrepancy reference, O(q^2), exact integers.
u64 brute_force_delta(const std::vector<u64>& roots, u64 q, u64 pi_p) {
  std::vector<u64> prefix(q, 0);  // prefix[t] = #roots <= t
  std::size_t idx = 0;
  for (u64 t = 1; t < q; ++t) {
    prefix[t] = prefix[t - 1];
    if (idx < roots.size() && roots[idx] == t) {
      ++prefix[t];
      ++idx;
    }
  }
  i64 best = 0;
  for (u64 y = 0; y + 1 <= q - 1; ++y) {
    for (u64 x = 1; y + x <= q - 1; ++x) {
      const i64 t = static_cast<i64>(prefix[y + x] - prefix[y]);
      const i64 dev = static_cast<i64>(q) * t -
                      static_cast<i64>(x) * static_cast<i64>(pi_p);
      best = std::max(best, std::abs(dev));
    }
  }
  return static_cast<u64>(best);
}

struct Check {
  std::ostream& out;
  bool all_ok = true;

  void report(const std::string& name, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << name << "\n";
    all_ok &= ok;
  }
};

}  // namespace

bool run_selfcheck(std::ostream& out, unsigned threads) {
  Check check{out};
  PrimeTable primes(100000);

  // sqrt_mod against exhaustive squaring; root count sums to q.
  {
    bool ok = true;
    for (u64 qv : primes.primes()) {
      if (qv > 300) break;
      if (qv == 2) continue;
      Modulus q(qv);
      std::vector<std::vector<u64>> table(qv);
      for (u64 x = 0; x < qv; ++x) table[mul_mod(x, x, qv)].push_back(x);
      u64 total = 0;
      for (u64 a = 0; a < qv && ok; ++a) {
        auto got = sqrt_mod(a, q);
        total += got.size();
        ok = got == table[a];
      }
      ok = ok && total == qv;
      if (!ok) break;
    }
    check.report("sqrt_mod matches exhaustive squaring (q <= 300)", ok);
  }

  // Jacobi multiplicativity and the residue criterion.
  {
    SeededRng rng(7);
    bool ok = true;
    for (int i = 0; i < 500 && ok; ++i) {
      u64 qv = 3 + 2 * rng.below(500);
      i64 k = static_cast<i64>(rng.below(10000)) - 5000;
      i64 l = static_cast<i64>(rng.below(10000)) - 5000;
      ok = jacobi(k, qv) * jacobi(l, qv) == jacobi(k * l, qv);
    }
    check.report("jacobi multiplicativity", ok);

    ok = true;
    for (u64 qv : {11ull, 13ull, 101ull, 997ull}) {
      Modulus q(qv);
      for (u64 a = 1; a < qv && ok; ++a)
        ok = (jacobi(static_cast<i64>(a), qv) == 1) ==
             (sqrt_mod(a, q).size() == 2);
    }
    check.report("jacobi +1 iff two square roots (prime q)", ok);
  }

  // Gauss sums: closed form against direct summation.
  {
    SeededRng rng(11);
    bool ok = true;
    for (u64 qv = 3; qv <= 199 && ok; qv += 2) {
      Modulus q(qv);
      for (int i = 0; i < 10 && ok; ++i) {
        u64 a = 1 + rng.below(qv - 1);
        if (std::gcd(a, qv) != 1) continue;
        u64 b = rng.below(qv);
        ok = std::abs(gauss_sum_direct(a, b, q) - gauss_sum_closed(a, b, q)) <
             1e-8;
      }
    }
    check.report("gauss_sum_direct == gauss_sum_closed (odd q <= 199)", ok);
  }

  // Root sets: pairing symmetry, size = 2 * residue primes for P < q.
  {
    bool ok = true;
    for (u64 qv : {11ull, 37ull, 101ull}) {
      Modulus q(qv);
      for (u64 lambda : {1ull, 2ull, 5ull}) {
        auto rs = build_root_set(q, lambda % qv ? lambda % qv : 1,
                                 static_cast<double>(qv - 1), primes);
        ok = ok && rs.roots.size() == 2 * rs.n_residue_primes;
        for (u64 x : rs.roots)
          ok = ok && std::binary_search(rs.roots.begin(), rs.roots.end(),
                                        qv - x);
      }
    }
    check.report("root pairing x <-> q-x and |roots| = 2 N_q", ok);
  }

  // Dilation law: roots(lambda * mu^2) = mu * roots(lambda).
  {
    bool ok = true;
    Modulus q(101);
    SeededRng rng(13);
    for (int i = 0; i < 20 && ok; ++i) {
      u64 lambda = 1 + rng.below(100);
      u64 mu = 1 + rng.below(100);
      auto base = build_root_set(q, lambda, 97, primes);
      auto scaled = build_root_set(
          q, mul_mod(lambda, mul_mod(mu, mu, 101), 101), 97, primes);
      std::vector<u64> mapped;
      for (u64 x : base.roots) mapped.push_back(mul_mod(mu, x, 101));
      std::sort(mapped.begin(), mapped.end());
      ok = mapped == scaled.roots &&
           base.n_residue_primes == scaled.n_residue_primes;
    }
    check.report("dilation: roots(lambda mu^2) = mu roots(lambda)", ok);
  }

  // Discrepancy against the all-intervals reference, and the full-lambda
  // scanner against the per-lambda loop.
  {
    bool ok = true;
    for (u64 qv : primes.primes()) {
      if (qv > 61) break;
      if (qv == 2) continue;
      Modulus q(qv);
      for (u64 p_cut : primes.primes()) {
        if (p_cut > qv) break;
        for (u64 lambda = 1; lambda < qv && ok; ++lambda) {
          auto rs = build_root_set(q, lambda, static_cast<double>(p_cut),
                                   primes);
          ok = discrepancy(rs).delta_numerator ==
               brute_force_delta(rs.roots, qv, rs.pi_p);
        }
        if (!ok) break;
      }
      if (!ok) break;
    }
    check.report("discrepancy equals all-intervals reference (q <= 61)", ok);

    ok = true;
    for (u64 qv : {11ull, 31ull, 61ull}) {
      Modulus q(qv);
      auto [lambda_star, report] = max_discrepancy_over_lambda(
          q, static_cast<double>(qv), primes, LambdaStrategy::full());
      u64 best = 0, best_lambda = 0;
      for (u64 lambda = 1; lambda < qv; ++lambda) {
        auto rs = build_root_set(q, lambda, static_cast<double>(qv), primes);
        u64 d = discrepancy(rs).delta_numerator;
        if (d > best) {
          best = d;
          best_lambda = lambda;
        }
      }
      ok = ok && report.delta_numerator == best && lambda_star == best_lambda;
    }
    check.report("full-lambda scanner equals per-lambda maximum", ok);
  }

  // Erdos-Turan bound dominates the measured discrepancy.
  {
    SeededRng rng(17);
    bool ok = true;
    for (int trial = 0; trial < 40 && ok; ++trial) {
      const u64 n = 5 + rng.below(200);
      std::vector<double> xs(n);
      for (auto& x : xs) x = rng.unit();
      const double measured = normalized_discrepancy(xs);
      for (u64 H : {1ull, 8ull}) {
        std::vector<double> sums;
        for (u64 h = 1; h <= H; ++h) {
          ComplexSum s;
          for (double x : xs)
            s.add(std::polar(1.0, 2.0 * std::numbers::pi * h * x));
          sums.push_back(std::abs(s.value()));
        }
        ok = ok && measured <= erdos_turan_bound(sums, n, H) + 1e-9;
      }
    }
    check.report("erdos_turan_bound >= measured discrepancy", ok);
  }

  // Conjugate symmetry and complete-sum orthogonality.
  {
    SeededRng rng(19);
    bool ok = true;
    for (int i = 0; i < 30 && ok; ++i) {
      u64 qv = primes.primes()[3 + rng.below(100)];
      Modulus q(qv);
      u64 h = 1 + rng.below(qv - 1);
      auto s = weyl_sum_S(q, h, 2 + static_cast<double>(rng.below(500)),
                          primes);
      ok = std::abs(s.value.imag()) < 1e-9;
    }
    check.report("Im weyl_sum_S vanishes", ok);

    ok = true;
    for (u64 qv : {11ull, 101ull, 997ull}) {
      Modulus q(qv);
      auto s = incomplete_sqrt_sum(q, 3 % qv ? 3 : 1, 2, qv);
      ok = ok && std::abs(s.sum.value) < 1e-9;
    }
    check.report("incomplete_sqrt_sum(W = q) vanishes", ok);
  }

  // Bilinear form: linearity and the trivial bound.
  {
    SeededRng rng(23);
    Modulus q(101);
    bool ok = true;
    for (int i = 0; i < 10 && ok; ++i) {
      auto rand_weights = [&](std::size_t n) {
        std::vector<std::complex<double>> v(n);
        for (auto& z : v) z = {rng.unit() * 2 - 1, rng.unit() * 2 - 1};
        return v;
      };
      auto va = rand_weights(8), vb = rand_weights(8), vc = rand_weights(5);
      auto sum_ab = va;
      for (std::size_t k = 0; k < va.size(); ++k) sum_ab[k] += vb[k];
      auto beta = WeightVector::from(vc);
      auto w1 = bilinear_W(q, 3, 7, WeightVector::from(va), beta);
      auto w2 = bilinear_W(q, 3, 7, WeightVector::from(vb), beta);
      auto w12 = bilinear_W(q, 3, 7, WeightVector::from(sum_ab), beta);
      ok = std::abs(w12.value - w1.value - w2.value) < 1e-9;
      ok = ok && std::abs(w1.value) <=
                     2.0 * WeightVector::from(va).norm_1 * beta.norm_1 + 1e-9;
    }
    check.report("bilinear_W linear in alpha with trivial bound", ok);
  }

  // Heath-Brown identity at small scale.
  {
    bool ok = true;
    for (unsigned j = 1; j <= 3; ++j) {
      const u64 n_max = 2000;
      const u64 z = static_cast<u64>(
          std::ceil(std::pow(static_cast<double>(n_max), 1.0 / j)));
      ok = ok && verify_hb_range({j, z, n_max}) <= 1e-9;
    }
    check.report("Heath-Brown identity reproduces Lambda (n <= 2000)", ok);
  }

  // Bound evaluators: monotonicity spot checks.
  {
    bool ok = bound_B(32, 16, 4096) <= bound_B(64, 16, 4096) &&
              bounds_old(8, 8, 64).first < bounds_old(16, 8, 64).first &&
              theorem_bound(100, 1000) <= theorem_bound(200, 1000) &&
              theorem_bound(100, 1000) <= theorem_bound(100, 2000);
    auto params = optimized_parameters(1024, 4096);
    ok = ok && params.U >= params.S && params.S >= params.L && params.L >= 1;
    check.report("bound evaluators monotone with ordered parameters", ok);
  }

  // Residue prime counts tie out with the character sum.
  {
    bool ok = true;
    for (u64 qv : {3ull, 7ull, 11ull, 101ull}) {
      Modulus q(qv);
      for (double P : {2.0, 10.0, 500.0}) {
        auto c = residue_prime_count(q, P, primes);
        const i64 included_q = static_cast<double>(qv) <= P ? 1 : 0;
        ok = ok && 2 * static_cast<i64>(c.n_q) ==
                       static_cast<i64>(c.pi_p) - included_q + c.char_sum;
      }
    }
    check.report("n_q = (pi(P) - [q <= P] + char_sum) / 2", ok);
  }

  // Averages: sampling never exceeds the full maximum; rows consistent.
  {
    auto full = avg_max_discrepancy(64, 64, PMode::fixed,
                                    LambdaStrategy::full(), primes, threads);
    auto sampled =
        avg_max_discrepancy(64, 64, PMode::fixed,
                            LambdaStrategy::sample(3, 42), primes, threads);
    bool ok = sampled.average <= full.average + 1e-12;
    for (std::size_t i = 0; i < full.rows.size(); ++i)
      ok = ok && sampled.rows[i].delta_scaled <= full.rows[i].delta_scaled;
    for (const auto& row : full.rows) {
      ok = ok && row.delta_scaled <=
                     2 * row.n_q * row.q + (row.q - 1) * row.pi_p;
    }
    check.report("sampled average below full; rows within trivial ceiling",
                 ok);
  }

  return check.all_ok;
}

}  // namespace sqrtlab
