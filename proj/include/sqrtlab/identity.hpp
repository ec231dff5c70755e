#pragma once

// Desk-scale form of the Heath-Brown identity: Lambda(n) equals
//   sum_{j=1}^{J} (-1)^{j-1} C(J,j) (mu_{<=Z} *^j * log * 1 *^{j-1})(n)
// for n <= Z^J, with mu_{<=Z}(m) = mu(m) for m <= Z and 0 above. The
// convolutions are taken by divisor enumeration over precomputed mu and log
// tables; the exhaustive verification below is the arbiter of the validity
// range.

#include <cstdint>

#include "sqrtlab/arith.hpp"

namespace sqrtlab {

struct HBParams {
  unsigned folds;  // J >= 1
  u64 z;           // cutoff of the restricted-mu factors
  u64 n_max;       // verification range; must satisfy n_max <= Z^J
};

class HeathBrownIdentity {
 public:
  explicit HeathBrownIdentity(const HBParams& params);

  const HBParams& params() const { return params_; }

  /// The J-fold combination at n; throws outside [1, n_max].
  double lambda(u64 n) const;

  /// max over n <= n_max of |lambda(n) - von_mangoldt(n)|.
  double max_deviation() const;

 private:
  HBParams params_;
  std::vector<double> combination_;  // index 0 unused
};

/// One-off evaluation (builds the tables up to params.n_max).
double lambda_via_hb(u64 n, const HBParams& params);

/// Exhaustive check of the identity over [1, n_max].
double verify_hb_range(const HBParams& params);

}  // namespace sqrtlab
