#include "sqrtlab/identity.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sqrtlab {

namespace {

// Dirichlet convolution by divisor enumeration: out[n] = sum_{de=n} a[d]b[e].
std::vector<double> dirichlet(const std::vector<double>& a,
                              const std::vector<double>& b, u64 n_max) {
  std::vector<double> out(n_max + 1, 0.0);
  for (u64 d = 1; d <= n_max; ++d) {
    if (a[d] == 0.0) continue;
    const double ad = a[d];
    for (u64 e = 1, de = d; de <= n_max; ++e, de += d) out[de] += ad * b[e];
  }
  return out;
}

double binomial(unsigned n, unsigned k) {
  double r = 1.0;
  for (unsigned i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

HeathBrownIdentity::HeathBrownIdentity(const HBParams& params)
    : params_(params) {
  if (params.folds < 1)
    throw std::invalid_argument("HeathBrownIdentity: folds must be >= 1");
  if (params.z < 1 || params.n_max < 1)
    throw std::invalid_argument("HeathBrownIdentity: Z and n_max must be >= 1");
  // Asserted validity range: n <= Z^J (power computed overflow-safe).
  u64 reach = 1;
  for (unsigned j = 0; j < params.folds && reach < params.n_max; ++j) {
    if (reach > params.n_max / params.z) {
      reach = params.n_max;  // Z^J already exceeds n_max
      break;
    }
    reach *= params.z;
  }
  if (reach < params.n_max)
    throw std::invalid_argument(
        "HeathBrownIdentity: n_max exceeds the asserted range Z^J");

  const u64 n = params.n_max;
  const auto mu = mobius_table(n);
  std::vector<double> mu_z(n + 1, 0.0);
  for (u64 m = 1; m <= std::min(params.z, n); ++m)
    mu_z[m] = static_cast<double>(mu[m]);
  std::vector<double> log_tbl(n + 1, 0.0);
  for (u64 m = 1; m <= n; ++m) log_tbl[m] = std::log(static_cast<double>(m));
  std::vector<double> unit(n + 1, 1.0);
  unit[0] = 0.0;

  combination_.assign(n + 1, 0.0);
  // mu_fold = mu_z^{*j}; tail = log * 1^{*(j-1)} built incrementally.
  std::vector<double> mu_fold = mu_z;
  std::vector<double> tail = log_tbl;
  for (unsigned j = 1; j <= params.folds; ++j) {
    if (j > 1) {
      mu_fold = dirichlet(mu_fold, mu_z, n);
      tail = dirichlet(tail, unit, n);
    }
    const auto term = dirichlet(mu_fold, tail, n);
    const double coeff =
        (j % 2 == 1 ? 1.0 : -1.0) * binomial(params.folds, j);
    for (u64 m = 1; m <= n; ++m) combination_[m] += coeff * term[m];
  }
}

double HeathBrownIdentity::lambda(u64 n) const {
  if (n < 1 || n > params_.n_max)
    throw std::invalid_argument(
        "HeathBrownIdentity::lambda: n outside the asserted validity range");
  return combination_[n];
}

double HeathBrownIdentity::max_deviation() const {
  const auto lambda_tbl = von_mangoldt_table(params_.n_max);
  double worst = 0.0;
  for (u64 m = 1; m <= params_.n_max; ++m)
    worst = std::max(worst, std::abs(combination_[m] - lambda_tbl[m]));
  return worst;
}

double lambda_via_hb(u64 n, const HBParams& params) {
  return HeathBrownIdentity(params).lambda(n);
}

double verify_hb_range(const HBParams& params) {
  return HeathBrownIdentity(params).max_deviation();
}

}  // namespace sqrtlab
