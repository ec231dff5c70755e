#include "sqrtlab/roots.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sqrtlab/rng.hpp"

namespace sqrtlab {

RootSet build_root_set(const Modulus& q, u64 lambda, double p_max,
                       const PrimeTable& primes) {
  const u64 qv = q.value();
  if (!q.is_prime())
    throw std::invalid_argument("build_root_set: q must be prime");
  if (lambda == 0 || lambda >= qv || std::gcd(lambda, qv) != 1)
    throw std::invalid_argument("build_root_set: lambda must be a unit");
  if (p_max < 2) throw std::invalid_argument("build_root_set: p_max < 2");
  if (static_cast<double>(primes.limit()) < p_max)
    throw std::invalid_argument("build_root_set: prime table too small");

  std::vector<u64> residues;
  u64 n_residue_primes = 0;
  for (u64 p : primes.primes()) {
    if (static_cast<double>(p) > p_max) break;
    if (p % qv == 0) continue;  // the paper works in Z_q^x
    u64 r = mul_mod(lambda, p % qv, qv);
    if (jacobi(static_cast<i64>(r), qv) == 1) {
      ++n_residue_primes;
      residues.push_back(r);
    }
  }
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()),
                 residues.end());

  std::vector<u64> roots;
  roots.reserve(2 * residues.size());
  for (u64 r : residues) {
    for (u64 x : sqrt_mod(r, q)) roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());

  return RootSet{q, lambda, p_max, std::move(roots), n_residue_primes,
                 primes.count_up_to(static_cast<u64>(p_max))};
}

u64 count_T(const RootSet& rs, u64 X, u64 Y) {
  const u64 qv = rs.q.value();
  if (X == 0 || Y + X > qv - 1)
    throw std::invalid_argument("count_T: interval leaves [1, q-1]");
  auto lo = std::lower_bound(rs.roots.begin(), rs.roots.end(), Y + 1);
  auto hi = std::upper_bound(rs.roots.begin(), rs.roots.end(), Y + X);
  return static_cast<u64>(hi - lo);
}

namespace {

struct Candidate {
  i64 value = std::numeric_limits<i64>::min();
  u64 y = 0;
  u64 x = 0;
  u64 t = 0;

  // Larger deviation wins; ties prefer the earlier, then shorter interval.
  void offer(i64 v, u64 yy, u64 xx, u64 tt) {
    if (v > value || (v == value && (yy < y || (yy == y && xx < x)))) {
      value = v;
      y = yy;
      x = xx;
      t = tt;
    }
  }
};

}  // namespace

DiscrepancyReport discrepancy(const RootSet& rs) {
  const i64 q = static_cast<i64>(rs.q.value());
  const i64 pi = static_cast<i64>(rs.pi_p);
  const auto& r = rs.roots;
  const i64 n = static_cast<i64>(r.size());

  Candidate best;
  if (n == 0) {
    best.offer(pi * (q - 1), 0, static_cast<u64>(q - 1), 0);
  } else {
    // Positive deviations: intervals [r_i, r_j] spanning a run of roots.
    // value = (q - pi) + f(j) - f(i) with f(k) = q*k - pi*r_k.
    {
      i64 min_f = 0;
      i64 min_at = -1;  // index into r of the prefix minimum
      for (i64 j = 0; j < n; ++j) {
        i64 f = q * (j + 1) - pi * static_cast<i64>(r[j]);
        if (min_at < 0 || f < min_f) {
          min_f = f;
          min_at = j;
        }
        best.offer((q - pi) + f - min_f, r[min_at] - 1,
                   r[j] - r[min_at] + 1, static_cast<u64>(j - min_at + 1));
      }
    }
    // Negative deviations with T >= 1: runs extended maximally on both
    // sides. value = (pi - q) + u(j) - v(i), A_i = r_{i-1}+1, B_j =
    // r_{j+1}-1 (sentinels 0 and q).
    {
      i64 min_v = 0;
      i64 min_at = -1;
      for (i64 j = 0; j < n; ++j) {
        i64 a = (j == 0 ? 0 : static_cast<i64>(r[j - 1])) + 1;
        i64 v = pi * a - q * (j + 1);
        if (min_at < 0 || v < min_v) {
          min_v = v;
          min_at = j;
        }
        i64 b = (j == n - 1 ? q : static_cast<i64>(r[j + 1])) - 1;
        i64 u = pi * b - q * (j + 1);
        i64 a_min =
            (min_at == 0 ? 0 : static_cast<i64>(r[min_at - 1])) + 1;
        best.offer((pi - q) + u - min_v, static_cast<u64>(a_min - 1),
                   static_cast<u64>(b - a_min + 1),
                   static_cast<u64>(j - min_at + 1));
      }
    }
    // Root-free intervals (T = 0): maximal gaps including both boundaries.
    {
      if (r.front() > 1)
        best.offer(pi * static_cast<i64>(r.front() - 1), 0, r.front() - 1, 0);
      for (i64 k = 0; k + 1 < n; ++k) {
        i64 gap = static_cast<i64>(r[k + 1]) - static_cast<i64>(r[k]) - 1;
        if (gap > 0) best.offer(pi * gap, r[k], static_cast<u64>(gap), 0);
      }
      if (static_cast<i64>(r.back()) < q - 1)
        best.offer(pi * (q - 1 - static_cast<i64>(r.back())), r.back(),
                   static_cast<u64>(q - 1 - static_cast<i64>(r.back())), 0);
    }
  }

  return DiscrepancyReport{static_cast<u64>(best.value), rs.q.value(), best.y,
                           best.x, best.t, rs.pi_p};
}

namespace detail {

u64 scaled_discrepancy_from_half(const std::vector<u64>& half, u64 qv,
                                 u64 pi_p) {
  const i64 q = static_cast<i64>(qv);
  const i64 pi = static_cast<i64>(pi_p);
  const i64 m = static_cast<i64>(half.size());
  if (m == 0) return static_cast<u64>(pi * (q - 1));
  const i64 n = 2 * m;

  // By the symmetry r_{n+1-k} = q - r_k, candidates confined to the upper
  // half mirror lower-half ones, and straddling candidates reduce to
  // affine expressions in the lower-half prefix minima.
  i64 pos_within = std::numeric_limits<i64>::min();
  i64 neg_within = std::numeric_limits<i64>::min();
  i64 min_f = std::numeric_limits<i64>::max();
  i64 min_v = std::numeric_limits<i64>::max();
  i64 max_gap = static_cast<i64>(half[0]) - 1;
  i64 prev_r = 0;
  for (i64 k = 1; k <= m; ++k) {
    const i64 r = static_cast<i64>(half[k - 1]);
    const i64 f = q * k - pi * r;
    if (f < min_f) min_f = f;
    if (f - min_f > pos_within) pos_within = f - min_f;

    const i64 v = pi * (prev_r + 1) - q * k;
    if (v < min_v) min_v = v;
    const i64 next_r =
        (k < m) ? static_cast<i64>(half[k]) : q - static_cast<i64>(half[m - 1]);
    const i64 u = pi * (next_r - 1) - q * k;
    if (u - min_v > neg_within) neg_within = u - min_v;

    if (k > 1 && r - prev_r - 1 > max_gap) max_gap = r - prev_r - 1;
    prev_r = r;
  }
  // Gap across the centre between r_m and q - r_m.
  const i64 mid_gap = q - 2 * static_cast<i64>(half[m - 1]) - 1;
  if (mid_gap > max_gap) max_gap = mid_gap;

  const i64 c_pos = q * (n + 1) - pi * q;
  const i64 e_neg = pi * q - q * (n + 1);
  const i64 pos = (q - pi) + std::max(pos_within, c_pos - 2 * min_f);
  const i64 neg = (pi - q) + std::max(neg_within, e_neg - 2 * min_v);
  const i64 best = std::max({pos, neg, pi * max_gap});
  return static_cast<u64>(best);
}

}  // namespace detail

namespace {

struct LambdaBest {
  u64 delta = 0;
  u64 lambda = 0;
  bool set = false;

  void offer(u64 d, u64 l) {
    if (!set || d > delta || (d == delta && l < lambda)) {
      delta = d;
      lambda = l;
      set = true;
    }
  }
};

// Exact scaled discrepancy of one dilated symmetric root set, driven off the
// folded lower half. Everything reduces to prefix statistics of
// f(k) = q*k - pi*r_k over ranks k = 0..m+1 (sentinels r_0 = 0 and
// r_{m+1} = q - r_m): with u(k) = (q-pi) - f(k+1) and
// v(k) = (pi-q) - f(k-1) the three candidate families become
//   positive runs:        (q-pi) + max( max_{i<=j} f(j)-f(i),
//                                       q(n+1)-pi*q - 2 min_{1..m} f )
//   negative, T >= 1:     (q-pi) + max( max_{i'<=j'-2} f(i')-f(j'),
//                                       pi*q-q(n+1) + 2 max_{0..m-1} f )
//   negative, T = 0:      pi * (largest root-free gap)
// mirrored halves and straddling intervals included via the reflection
// f(n+1-k) = q(n+1) - pi*q - f(k).
class HalfScanner {
 public:
  HalfScanner(u64 q, u64 pi_p)
      : q_(static_cast<std::uint32_t>(q)), pi_(static_cast<i64>(pi_p)) {}

  void reset(std::size_t m) {
    m_ = m;
    if (m == 0) return;
    const unsigned value_bits = std::bit_width((q_ - 1) / 2);
    bucket_bits_ = std::bit_width(m);
    if (bucket_bits_ > value_bits) bucket_bits_ = value_bits;
    shift_ = value_bits - bucket_bits_;
    buckets_ = std::size_t{1} << bucket_bits_;
    last_bucket_ = static_cast<std::size_t>(((q_ - 1) / 2) >> shift_);
    counts_.assign(buckets_, 0);
    offsets_.assign(buckets_, 0);
    folded_.resize(m);
    sorted_.resize(m);
  }

  /// Exact scaled discrepancy of the dilated set, or nullopt when the
  /// bucket-level upper bound already rules out beating `best`.
  std::optional<u64> scan(const std::uint32_t* dilated, u64 best) {
    const std::uint32_t q = q_;
    const i64 pi = pi_;
    const std::size_t m = m_;
    if (m == 0) return static_cast<u64>(pi * (q - 1));

    // Fold to the lower half; vectorizes.
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t t = dilated[i];
      const std::uint32_t flip = q - t;
      folded_[i] = t < flip ? t : flip;
    }
    std::memset(counts_.data(), 0, buckets_ * sizeof(std::uint32_t));
    for (std::size_t i = 0; i < m; ++i) counts_[folded_[i] >> shift_]++;

    // Fused exclusive prefix and walk bound. The walk
    // g(t) = q * count(<= t) - pi * t is known exactly at bucket ends;
    // inside bucket b it stays within [g_prev + q c_b, g_cur + pi w] from
    // above and [g_prev - pi w, g_cur - q c_b] from below, whichever is
    // tighter. The mirrored half is the affine reflection K - g, so
    // max g - min g bounds the exact discrepancy from above.
    const i64 qi = q;
    const i64 w = i64{1} << shift_;
    const i64 h_top = (qi - 1) / 2;  // the walk lives on t in [0, (q-1)/2]
    i64 g_prev = 0, g_max = 0, g_min = 0;
    std::uint32_t running = 0, max_count = 0;
    for (std::size_t b = 0; b <= last_bucket_; ++b) {
      const std::uint32_t c = counts_[b];
      offsets_[b] = running;
      running += c;
      if (c > max_count) max_count = c;
      const i64 wb = b == last_bucket_
                         ? h_top - static_cast<i64>(b << shift_) + 1
                         : w;
      const i64 g_cur = g_prev + qi * c - pi * wb;
      const i64 up = std::min(g_prev + qi * c, g_cur + pi * wb);
      const i64 dn = std::max(g_prev - pi * wb, g_cur - qi * c);
      if (up > g_max) g_max = up;
      if (dn < g_min) g_min = dn;
      g_prev = g_cur;
    }
    const i64 reflect = 2 * static_cast<i64>(m) * qi - pi * (qi - 1);
    const i64 hi = std::max(g_max, reflect - g_min);
    const i64 lo = std::min(g_min, reflect - g_max);
    const u64 upper = static_cast<u64>(hi - lo + 2 * qi);
    if (upper < best) return std::nullopt;

    // Counting-sort placement followed by one pass fixing the, typically
    // tiny, within-bucket disorder.
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t h = folded_[i];
      sorted_[offsets_[h >> shift_]++] = h;
    }
    if (max_count > 64) {
      std::sort(sorted_.begin(), sorted_.end());
    } else {
      for (std::size_t k = 1; k < m; ++k) {
        const std::uint32_t x = sorted_[k];
        std::size_t j = k;
        while (j > 0 && sorted_[j - 1] > x) {
          sorted_[j] = sorted_[j - 1];
          --j;
        }
        sorted_[j] = x;
      }
    }

    // Ascending sweep over ranks k = 1..m+1, f_k = q*k - pi*r_k, with the
    // sentinel r_{m+1} = q - r_m crossing the centre.
    const std::uint32_t* r = sorted_.data();
    i64 qk = 0;
    i64 prev_r = 0;
    i64 f_prev2 = 0;  // f_{k-2}
    i64 f_prev = 0;   // f_{k-1}; starts at f_0 = 0
    i64 min_f = std::numeric_limits<i64>::max();         // over 1..m
    i64 max_f_head = 0;                                  // over 0..m-1
    i64 max_f_delay2 = std::numeric_limits<i64>::min();  // over 0..k-2
    i64 pos_within = 0;
    i64 neg_within = std::numeric_limits<i64>::min();
    i64 min_pref = std::numeric_limits<i64>::max();
    i64 max_gap = 0;
    for (std::size_t k = 1; k <= m; ++k) {
      const i64 rk = r[k - 1];
      qk += qi;
      const i64 f = qk - pi * rk;
      min_pref = std::min(min_pref, f);
      pos_within = std::max(pos_within, f - min_pref);
      min_f = std::min(min_f, f);
      if (k >= 2) {
        max_f_delay2 = std::max(max_f_delay2, f_prev2);
        neg_within = std::max(neg_within, max_f_delay2 - f);
      }
      if (k <= m - 1) max_f_head = std::max(max_f_head, f);
      max_gap = std::max(max_gap, rk - prev_r - 1);
      prev_r = rk;
      f_prev2 = f_prev;
      f_prev = f;
    }
    {
      const i64 r_mid = qi - prev_r;
      qk += qi;
      const i64 f = qk - pi * r_mid;
      max_f_delay2 = std::max(max_f_delay2, f_prev2);
      neg_within = std::max(neg_within, max_f_delay2 - f);
      max_gap = std::max(max_gap, r_mid - prev_r - 1);  // centre gap
    }

    const i64 c_pos = qi * (static_cast<i64>(2 * m) + 1) - pi * qi;
    const i64 pos = (qi - pi) + std::max(pos_within, c_pos - 2 * min_f);
    const i64 neg =
        (qi - pi) + std::max(neg_within, -c_pos + 2 * max_f_head);
    const i64 result = std::max({pos, neg, pi * max_gap, i64{0}});
    return static_cast<u64>(result);
  }

 private:
  std::uint32_t q_;
  i64 pi_;
  std::size_t m_ = 0;
  unsigned bucket_bits_ = 0;
  unsigned shift_ = 0;
  std::size_t buckets_ = 0;
  std::size_t last_bucket_ = 0;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> folded_;
  std::vector<std::uint32_t> sorted_;
};

// Exact full enumeration over lambda via the dilation structure: for
// lambda = mu^2 * lambda0 the root set is mu * roots(lambda0), so only two
// base half-sets are needed and each dilation is maintained incrementally.
LambdaBest full_scan(const Modulus& q, double p_max, const PrimeTable& primes,
                     u64 pi_p) {
  const u64 qv = q.value();
  LambdaBest best;

  // Least root x <= (q-1)/2 for each quadratic residue, 0 elsewhere.
  std::vector<std::uint32_t> least_root(qv, 0);
  for (u64 x = 1; x <= (qv - 1) / 2; ++x)
    least_root[mul_mod(x, x, qv)] = static_cast<std::uint32_t>(x);

  // Distinct residues of primes p <= P modulo q.
  std::vector<bool> seen(qv, false);
  std::vector<std::uint32_t> residues;
  for (u64 p : primes.primes()) {
    if (static_cast<double>(p) > p_max) break;
    u64 r = p % qv;
    if (r == 0 || seen[r]) continue;
    seen[r] = true;
    residues.push_back(static_cast<std::uint32_t>(r));
  }

  u64 g = 2;  // smallest non-residue
  while (jacobi(static_cast<i64>(g), qv) != -1) ++g;

  // Base half-sets for lambda = 1 and lambda = g.
  std::vector<std::uint32_t> base[2];
  for (u64 r : residues) {
    if (u64 x = least_root[r]; x != 0)
      base[0].push_back(static_cast<std::uint32_t>(x));
    if (u64 x = least_root[mul_mod(g, r, qv)]; x != 0)
      base[1].push_back(static_cast<std::uint32_t>(x));
  }

  std::vector<std::uint32_t> dilated[2] = {base[0], base[1]};
  HalfScanner scanners[2] = {HalfScanner(qv, pi_p), HalfScanner(qv, pi_p)};
  scanners[0].reset(base[0].size());
  scanners[1].reset(base[1].size());
  const u64 empty_delta = pi_p * (qv - 1);
  const std::uint32_t q32 = static_cast<std::uint32_t>(qv);

  for (u64 mu = 1; mu <= (qv - 1) / 2; ++mu) {
    const u64 mu_sq = mul_mod(mu, mu, qv);
    for (int cls = 0; cls < 2; ++cls) {
      const u64 lambda = cls == 0 ? mu_sq : mul_mod(g, mu_sq, qv);
      auto& v = dilated[cls];
      const auto& s = base[cls];
      if (mu > 1) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          const std::uint32_t t = v[i] + s[i];
          v[i] = t >= q32 ? t - q32 : t;
        }
      }
      if (v.empty()) {
        best.offer(empty_delta, lambda);
        continue;
      }
      // Candidates that cannot reach the current maximum are pruned by the
      // scanner's bucket-level bound; ties are never pruned, keeping the
      // smallest-lambda rule exact.
      if (auto delta = scanners[cls].scan(v.data(), best.delta))
        best.offer(*delta, lambda);
    }
  }
  return best;
}

}  // namespace

std::pair<u64, DiscrepancyReport> max_discrepancy_over_lambda(
    const Modulus& q, double p_max, const PrimeTable& primes,
    const LambdaStrategy& strategy, u64 full_limit) {
  const u64 qv = q.value();
  if (!q.is_prime())
    throw std::invalid_argument("max_discrepancy_over_lambda: q must be prime");

  LambdaBest best;
  if (strategy.kind == LambdaStrategy::Kind::full) {
    if (qv > full_limit)
      throw BudgetError(
          "max_discrepancy_over_lambda: full enumeration above the "
          "configured q threshold");
    const u64 pi_p = primes.count_up_to(static_cast<u64>(p_max));
    best = full_scan(q, p_max, primes, pi_p);
  } else {
    if (strategy.sample_count == 0)
      throw std::invalid_argument(
          "max_discrepancy_over_lambda: sample count must be positive");
    SeededRng rng(strategy.seed);
    for (u64 i = 0; i < strategy.sample_count; ++i) {
      u64 lambda = 1 + rng.below(qv - 1);
      RootSet rs = build_root_set(q, lambda, p_max, primes);
      best.offer(discrepancy(rs).delta_numerator, lambda);
    }
  }

  RootSet rs = build_root_set(q, best.lambda, p_max, primes);
  DiscrepancyReport report = discrepancy(rs);
  return {best.lambda, report};
}

ResiduePrimeCount residue_prime_count(const Modulus& q, double p_max,
                                      const PrimeTable& primes) {
  const u64 qv = q.value();
  if (!q.is_prime())
    throw std::invalid_argument("residue_prime_count: q must be prime");
  u64 n_q = 0;
  i64 char_sum = 0;
  for (u64 p : primes.primes()) {
    if (static_cast<double>(p) > p_max) break;
    if (p % qv == 0) continue;
    int chi = jacobi(static_cast<i64>(p % qv), qv);
    char_sum += chi;
    if (chi == 1) ++n_q;
  }
  return ResiduePrimeCount{n_q, char_sum,
                           primes.count_up_to(static_cast<u64>(p_max))};
}

}  // namespace sqrtlab
