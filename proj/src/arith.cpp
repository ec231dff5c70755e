#include "sqrtlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sqrtlab {

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 inv_mod(u64 a, u64 m) {
  // Extended Euclid on (a mod m, m).
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
  while (new_r != 0) {
    i64 quot = r / new_r;
    t = std::exchange(new_t, t - quot * new_t);
    r = std::exchange(new_r, r - quot * new_r);
  }
  if (r != 1)
    throw std::invalid_argument("inv_mod: argument not invertible mod " +
                                std::to_string(m));
  return static_cast<u64>(t < 0 ? t + static_cast<i64>(m) : t);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  // Witness set deterministic for all n < 3.3 * 10^24, so for all 64-bit n.
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Modulus::Modulus(u64 q) : q_(q) {
  if (q < 3 || q % 2 == 0)
    throw std::invalid_argument("Modulus: q must be odd and >= 3, got " +
                                std::to_string(q));
  if (q > (u64{1} << 62))
    throw std::invalid_argument("Modulus: q exceeds 2^62");
  is_prime_ = sqrtlab::is_prime(q);
  q_mod_4_ = static_cast<int>(q % 4);
}

PrimeTable::PrimeTable(u64 limit, u64 budget) : limit_(limit) {
  if (limit < 2)
    throw std::invalid_argument("PrimeTable: limit must be >= 2");
  if (limit > budget)
    throw BudgetError("PrimeTable: limit " + std::to_string(limit) +
                      " exceeds sieve budget " + std::to_string(budget));

  const u64 root = static_cast<u64>(std::sqrt(static_cast<double>(limit))) + 1;
  std::vector<bool> small(root + 1, true);
  std::vector<u64> base;
  for (u64 i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (u64 j = i * i; j <= root; j += i) small[j] = false;
  }

  primes_.reserve(static_cast<std::size_t>(
      limit > 16 ? 1.2 * limit / std::log(static_cast<double>(limit)) : 8));
  constexpr u64 kSegment = 1 << 16;
  std::vector<bool> seg;
  for (u64 low = 2; low <= limit; low += kSegment) {
    u64 high = std::min(limit, low + kSegment - 1);
    seg.assign(static_cast<std::size_t>(high - low + 1), true);
    for (u64 p : base) {
      if (p * p > high) break;
      u64 start = std::max(p * p, (low + p - 1) / p * p);
      for (u64 j = start; j <= high; j += p) seg[j - low] = false;
    }
    for (u64 i = low; i <= high; ++i)
      if (seg[i - low]) primes_.push_back(i);
  }
}

std::size_t PrimeTable::count_up_to(u64 x) const {
  if (x > limit_)
    throw std::invalid_argument("PrimeTable::count_up_to beyond table limit");
  return static_cast<std::size_t>(
      std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

int jacobi(i64 k, u64 q) {
  if (q < 3 || q % 2 == 0)
    throw std::invalid_argument("jacobi: modulus must be odd and >= 3");
  // (k/q) is a character mod q, so reduce k first.
  u64 a = static_cast<u64>(((k % static_cast<i64>(q)) + static_cast<i64>(q)) %
                           static_cast<i64>(q));
  u64 n = q;
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      u64 n8 = n & 7;
      if (n8 == 3 || n8 == 5) result = -result;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::vector<u64> sqrt_mod(u64 a, const Modulus& q) {
  if (!q.is_prime())
    throw std::invalid_argument("sqrt_mod: modulus must be prime");
  const u64 p = q.value();
  if (a >= p) throw std::invalid_argument("sqrt_mod: residue out of range");
  if (a == 0) return {0};
  if (jacobi(static_cast<i64>(a), p) == -1) return {};

  u64 x;
  if (p % 4 == 3) {
    x = pow_mod(a, (p + 1) / 4, p);
  } else {
    // Tonelli-Shanks. p - 1 = s * 2^e with s odd.
    u64 s = p - 1;
    int e = 0;
    while ((s & 1) == 0) {
      s >>= 1;
      ++e;
    }
    u64 z = 2;
    while (jacobi(static_cast<i64>(z), p) != -1) ++z;
    u64 c = pow_mod(z, s, p);
    x = pow_mod(a, (s + 1) / 2, p);
    u64 t = pow_mod(a, s, p);
    int m = e;
    while (t != 1) {
      u64 tt = t;
      int i = 0;
      while (tt != 1) {
        tt = mul_mod(tt, tt, p);
        ++i;
      }
      u64 b = c;
      for (int j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
      x = mul_mod(x, b, p);
      c = mul_mod(b, b, p);
      t = mul_mod(t, c, p);
      m = i;
    }
  }
  u64 y = p - x;
  if (x > y) std::swap(x, y);
  return {x, y};
}

std::complex<double> unit_phase(u64 r, u64 q) {
  r %= q;
  const double angle =
      2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(q);
  return {std::cos(angle), std::sin(angle)};
}

std::complex<double> gauss_sum_direct(u64 a, u64 b, const Modulus& q) {
  const u64 m = q.value();
  a %= m;
  b %= m;
  if (std::gcd(a, m) != 1)
    throw std::invalid_argument("gauss_sum_direct: gcd(a,q) > 1");
  ComplexSum acc;
  for (u64 x = 0; x < m; ++x) {
    u64 x2 = mul_mod(x, x, m);
    u64 r = (mul_mod(a, x2, m) + mul_mod(b, x, m)) % m;
    acc.add(unit_phase(r, m));
  }
  return acc.value();
}

std::complex<double> gauss_sum_closed(u64 a, u64 b, const Modulus& q) {
  const u64 m = q.value();
  a %= m;
  b %= m;
  if (std::gcd(4 * a % m, m) != 1)
    throw std::invalid_argument("gauss_sum_closed: gcd(4a,q) > 1");
  const u64 inv4a = inv_mod(4 * a % m, m);
  const u64 r = (m - mul_mod(inv4a, mul_mod(b, b, m), m)) % m;
  const std::complex<double> eps =
      q.residue_class_mod_4() == 1 ? std::complex<double>{1.0, 0.0}
                                   : std::complex<double>{0.0, 1.0};
  const double root = std::sqrt(static_cast<double>(m));
  const int chi = jacobi(static_cast<i64>(a), m);
  return unit_phase(r, m) * eps * root * static_cast<double>(chi);
}

double von_mangoldt(u64 n) {
  if (n < 2) return 0.0;
  u64 p = 0;
  if (n % 2 == 0) {
    p = 2;
  } else {
    for (u64 d = 3; d * d <= n; d += 2) {
      if (n % d == 0) {
        p = d;
        break;
      }
    }
    if (p == 0) return std::log(static_cast<double>(n));  // n prime
  }
  while (n % p == 0) n /= p;
  return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
}

int mobius(u64 n) {
  if (n == 0) throw std::invalid_argument("mobius: n must be positive");
  if (n == 1) return 1;
  int factors = 0;
  auto strip = [&](u64 p) {
    if (n % p != 0) return true;
    n /= p;
    if (n % p == 0) return false;  // squared factor
    ++factors;
    return true;
  };
  if (!strip(2)) return 0;
  for (u64 d = 3; d * d <= n; d += 2)
    if (!strip(d)) return 0;
  if (n > 1) ++factors;
  return factors % 2 == 0 ? 1 : -1;
}

std::vector<std::int8_t> mobius_table(u64 n_max) {
  std::vector<std::int8_t> mu(n_max + 1, 0);
  std::vector<u64> primes;
  if (n_max >= 1) mu[1] = 1;
  // Linear sieve: each n visited once through its least prime factor.
  std::vector<u64> lpf(n_max + 1, 0);
  for (u64 i = 2; i <= n_max; ++i) {
    if (lpf[i] == 0) {
      lpf[i] = i;
      primes.push_back(i);
      mu[i] = -1;
    }
    for (u64 p : primes) {
      if (p > lpf[i] || i * p > n_max) break;
      lpf[i * p] = p;
      mu[i * p] = (p == lpf[i]) ? 0 : -mu[i];
    }
  }
  return mu;
}

std::vector<double> von_mangoldt_table(u64 n_max) {
  std::vector<double> lambda(n_max + 1, 0.0);
  std::vector<bool> composite(n_max + 1, false);
  for (u64 p = 2; p <= n_max; ++p) {
    if (composite[p]) continue;
    const double lp = std::log(static_cast<double>(p));
    for (u64 pk = p; pk <= n_max; pk *= p) {
      lambda[pk] = lp;
      if (pk > n_max / p) break;
    }
    for (u64 j = p * p; j <= n_max; j += p) composite[j] = true;
    if (p * p > n_max && p > n_max / p) continue;
  }
  return lambda;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    comp_ += (sum_ - t) + x;
  else
    comp_ += (x - t) + sum_;
  sum_ = t;
}

}  // namespace sqrtlab
