#pragma once

// Exact modular arithmetic, prime generation, multiplicative functions,
// modular square roots and Gauss sums. Everything here is a pure function of
// its inputs; values are immutable after construction and safe to share
// across threads. Moduli go up to 2^62 and all modular products run through
// 128-bit intermediates.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace sqrtlab {

/// Thrown when a request exceeds a configured resource budget (sieve size,
/// enumeration caps); distinct from precondition violations.
struct BudgetError : std::length_error {
  using std::length_error::length_error;
};

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m);

/// Modular inverse of a mod m; throws std::invalid_argument if gcd(a,m) != 1.
u64 inv_mod(u64 a, u64 m);

/// Deterministic Miller-Rabin (fixed witness set, valid for all 64-bit n).
bool is_prime(u64 n);

/// An odd modulus q >= 3 with cached primality and residue class mod 4.
class Modulus {
 public:
  explicit Modulus(u64 q);

  u64 value() const { return q_; }
  bool is_prime() const { return is_prime_; }
  int residue_class_mod_4() const { return q_mod_4_; }

 private:
  u64 q_;
  bool is_prime_;
  int q_mod_4_;
};

/// All primes up to `limit`, produced by a segmented sieve.
class PrimeTable {
 public:
  static constexpr u64 kDefaultBudget = 100'000'000;

  explicit PrimeTable(u64 limit, u64 budget = kDefaultBudget);

  u64 limit() const { return limit_; }
  const std::vector<u64>& primes() const { return primes_; }

  /// pi(x) for x <= limit.
  std::size_t count_up_to(u64 x) const;

 private:
  u64 limit_;
  std::vector<u64> primes_;
};

/// Jacobi symbol (k/q) for odd q >= 3. Zero iff gcd(k,q) > 1.
int jacobi(i64 k, u64 q);

/// Solutions x in [0, q-1] of x^2 = a (mod q) for prime q: empty if a is a
/// non-residue, {0} if a = 0, otherwise {x, q-x} via Tonelli-Shanks with the
/// smallest non-residue as the auxiliary element. Result is sorted.
std::vector<u64> sqrt_mod(u64 a, const Modulus& q);

/// Sum over x mod q of e_q(a x^2 + b x), by direct compensated summation.
/// Requires gcd(a, q) = 1.
std::complex<double> gauss_sum_direct(u64 a, u64 b, const Modulus& q);

/// Closed-form evaluation of the same sum for odd q:
///   e_q(-(4a)^{-1} b^2) * eps_q * sqrt(q) * (a/q),
/// with eps_q = 1 for q = 1 (mod 4) and i for q = 3 (mod 4). Holds for every
/// b mod q (no coprimality condition on b; verified empirically over all odd
/// q <= 999 by the acceptance suite).
std::complex<double> gauss_sum_closed(u64 a, u64 b, const Modulus& q);

/// log p if n = p^k, else 0.
double von_mangoldt(u64 n);

/// Moebius function by trial-division factorization.
int mobius(u64 n);

/// mu(n) for 1 <= n <= n_max via a linear sieve (index 0 unused).
std::vector<std::int8_t> mobius_table(u64 n_max);

/// Lambda(n) for 1 <= n <= n_max (index 0 unused).
std::vector<double> von_mangoldt_table(u64 n_max);

/// Neumaier-compensated accumulator; keeps long sums accurate to a few ulp.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct ComplexSum {
  CompensatedSum re, im;

  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

/// e(r/q) = exp(2 pi i r / q); r is reduced mod q in exact integers first.
std::complex<double> unit_phase(u64 r, u64 q);

}  // namespace sqrtlab
