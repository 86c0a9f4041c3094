#pragma once

// Bulk exact arithmetic on unsigned 64-bit integers: prime tables, segmented
// factor windows, factorizations and the classical arithmetic functions.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hrsift {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// All primes up to `limit`, in increasing order. Immutable once built.
class PrimeTable {
 public:
  /// Throws InvalidArgument for limit < 2 or limit >= 2^32.
  explicit PrimeTable(u64 limit);

  u64 limit() const { return limit_; }
  std::span<const u32> primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  u32 operator[](std::size_t i) const { return primes_[i]; }

  /// pi(limit).
  std::size_t pi() const { return primes_.size(); }
  /// pi(x) for x <= limit; throws InvalidArgument above the limit.
  std::size_t pi(u64 x) const;
  /// Membership for n <= limit; throws InvalidArgument above the limit.
  bool contains(u64 n) const;

 private:
  u64 limit_;
  std::vector<u32> primes_;
};

struct PrimePower {
  u64 p;
  u32 e;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime-power decomposition of n >= 1 with strictly increasing primes.
/// Fixed capacity: no n < 2^64 has more than 15 distinct prime factors.
class Factorization {
 public:
  static constexpr std::size_t kMaxParts = 15;

  Factorization() = default;
  explicit Factorization(u64 n) : n_(n) {}

  u64 n() const { return n_; }
  std::span<const PrimePower> parts() const { return {parts_.data(), size_}; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const PrimePower& operator[](std::size_t i) const { return parts_[i]; }

  /// Appends p^e; callers keep primes increasing.
  void append(u64 p, u32 e) { parts_[size_++] = {p, e}; }

  /// prod p^e recomputed from the parts; throws ArithmeticOverflow.
  u64 product() const;

  friend bool operator==(const Factorization& a, const Factorization& b) {
    if (a.n_ != b.n_ || a.size_ != b.size_) return false;
    for (std::size_t i = 0; i < a.size_; ++i)
      if (!(a.parts_[i] == b.parts_[i])) return false;
    return true;
  }

 private:
  u64 n_ = 1;
  std::array<PrimePower, kMaxParts> parts_{};
  std::size_t size_ = 0;
};

/// Smallest-prime-factor data for every n in [lo, hi), built by marking
/// multiples of the table's sieving primes inside the window only.
///
/// Each n keeps the list of its prime factors <= sqrt(hi - 1) as packed
/// (table index, exponent) slots; the one possible larger prime factor is
/// recovered as the cofactor. An n with no slots is prime.
class FactorWindow {
 public:
  /// Requires 2 <= lo < hi and table.limit() >= isqrt(hi - 1). The table
  /// must outlive the window.
  FactorWindow(u64 lo, u64 hi, const PrimeTable& table);

  u64 lo() const { return lo_; }
  u64 hi() const { return hi_; }
  bool covers(u64 n) const { return n >= lo_ && n < hi_; }

  u64 spf(u64 n) const;
  bool is_prime(u64 n) const;
  Factorization factorize(u64 n) const;

 private:
  u64 lo_;
  u64 hi_;
  const PrimeTable* table_;
  std::vector<u32> offsets_;
  std::vector<u32> slots_;
};

PrimeTable build_primes(u64 limit);
FactorWindow factor_window(u64 lo, u64 hi, const PrimeTable& table);

/// Trial division by the table; requires n <= limit^2.
Factorization factorize(u64 n, const PrimeTable& table);
Factorization factorize(u64 n, const FactorWindow& window);

struct FactorResult {
  Factorization fac;
  /// False when a composite cofactor survived the Pollard-rho budget; the
  /// cofactor is then stored as if it were prime.
  bool complete = true;
};

/// Any n >= 1: trial division by the table, then Brent's rho on what remains.
FactorResult factor_u64(u64 n, const PrimeTable& table, u64 rho_iterations = 1u << 22);

struct OmegaCount {
  int omega = 0;
  int big_omega = 0;
  bool complete = true;
};

/// omega and Omega of n >= 1 without building a full factorization. Once all
/// primes p with p^3 <= cofactor are removed, the cofactor has at most two
/// prime factors and is classified by a primality and a square test.
OmegaCount omega_u64(u64 n, const PrimeTable& table);

int omega(const Factorization& fac);
int big_omega(const Factorization& fac);

u64 sigma(const Factorization& fac);
u64 aliquot_s(const Factorization& fac);
u64 phi(const Factorization& fac);
int mu(const Factorization& fac);
u64 rad(const Factorization& fac);
u64 squarefull_part(const Factorization& fac);
u64 carmichael_lambda(const Factorization& fac);
/// Largest prime factor, P+(1) = 1.
u64 largest_prime_factor(const Factorization& fac);

/// All divisors in increasing order.
std::vector<u64> divisors(const Factorization& fac);

/// Kronecker symbol (d/n) for n >= 1.
int kronecker(i64 d, u64 n);

/// Deterministic Miller-Rabin, exact for every n < 2^64.
bool is_prime(u64 n);
/// Table lookup below the limit, Miller-Rabin above.
bool is_prime(u64 n, const PrimeTable& table);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);
u64 isqrt(u64 n);
u64 icbrt(u64 n);
u64 gcd(u64 a, u64 b);
/// lcm with overflow detection.
u64 checked_lcm(u64 a, u64 b);
u64 checked_mul(u64 a, u64 b);
u64 checked_pow(u64 base, u32 e);

}  // namespace hrsift
