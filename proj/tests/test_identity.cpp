#include "sqrtlab/identity.hpp"

#include <cmath>

#include <doctest.h>

using namespace sqrtlab;

TEST_CASE("lambda_via_hb: pinned examples") {
  // J = 1 is Moebius inversion of log: sum_{d|4} mu(d) log(4/d) = log 2.
  CHECK(lambda_via_hb(4, {1, 4, 4}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(lambda_via_hb(4, {1, 16, 16}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(lambda_via_hb(1, {1, 100, 100}) == doctest::Approx(0.0));
  CHECK(lambda_via_hb(1, {3, 10, 100}) == doctest::Approx(0.0));
  // J = 2, Z = 4 covers n = 12 <= Z^2; Lambda(12) = 0.
  CHECK(lambda_via_hb(12, {2, 4, 16}) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("lambda_via_hb: direct convolution oracle at J = 2") {
  // Independent evaluation of 2(mu_Z * log) - (mu_Z * mu_Z * log * 1) at a
  // few n by explicit enumeration of factorizations.
  const u64 z = 4, n_max = 16;
  HeathBrownIdentity hb({2, z, n_max});
  for (u64 n = 1; n <= n_max; ++n) {
    double term1 = 0.0;
    for (u64 d = 1; d <= z; ++d)
      if (n % d == 0)
        term1 += mobius(d) * std::log(static_cast<double>(n / d));
    double term2 = 0.0;
    for (u64 m1 = 1; m1 <= z; ++m1) {
      if (n % m1) continue;
      for (u64 m2 = 1; m2 <= z; ++m2) {
        if ((n / m1) % m2) continue;
        const u64 rest = n / m1 / m2;
        for (u64 k = 1; k <= rest; ++k) {
          if (rest % k) continue;
          term2 += mobius(m1) * mobius(m2) * std::log(static_cast<double>(k));
        }
      }
    }
    CHECK(hb.lambda(n) ==
          doctest::Approx(2 * term1 - term2).epsilon(1e-9));
  }
}

TEST_CASE("verify_hb_range: identity holds over full asserted ranges") {
  for (unsigned j = 1; j <= 3; ++j) {
    const u64 n_max = 10000;
    const u64 z = static_cast<u64>(
        std::ceil(std::pow(static_cast<double>(n_max), 1.0 / j)));
    CHECK(verify_hb_range({j, z, n_max}) <= 1e-9);
  }
  // Oversized Z is harmless.
  CHECK(verify_hb_range({2, 5000, 10000}) <= 1e-9);
}

TEST_CASE("validity range is enforced") {
  CHECK_THROWS_AS(HeathBrownIdentity({2, 10, 1000}),
                  std::invalid_argument);  // Z^J = 100 < n_max
  HeathBrownIdentity hb({2, 10, 100});
  CHECK_THROWS_AS(hb.lambda(0), std::invalid_argument);
  CHECK_THROWS_AS(hb.lambda(101), std::invalid_argument);
  CHECK_THROWS_AS(HeathBrownIdentity({0, 10, 10}), std::invalid_argument);
}

TEST_CASE("binomial alternating sum normalizes to 1") {
  // sum_j (-1)^{j-1} C(J,j) = 1 for every J; checked through the identity
  // itself at n = 2: every fold contributes Lambda(2) exactly once.
  for (unsigned j = 1; j <= 5; ++j) {
    HeathBrownIdentity hb({j, 16, 16});
    CHECK(hb.lambda(2) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(hb.lambda(1) == doctest::Approx(0.0).epsilon(1e-12));
  }
}
