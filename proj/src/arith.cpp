#include "hrsift/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "hrsift/error.hpp"

namespace hrsift {

namespace {

constexpr u32 kExponentBits = 6;
constexpr u32 kExponentMask = (1u << kExponentBits) - 1;
constexpr u64 kMaxSlotIndex = 1ull << (32 - kExponentBits);

u64 checked_add(u64 a, u64 b) {
  u64 r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("u64 addition overflow");
  return r;
}

}  // namespace

u64 checked_mul(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("u64 multiplication overflow");
  return r;
}

u64 checked_pow(u64 base, u32 e) {
  u64 r = 1;
  for (u32 i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 checked_lcm(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / std::gcd(a, b), b);
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && (r > n / r)) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

u64 icbrt(u64 n) {
  u64 r = static_cast<u64>(std::cbrt(static_cast<double>(n)));
  auto cube_le = [n](u64 c) { return static_cast<u128>(c) * c * c <= n; };
  while (r > 0 && !cube_le(r)) --r;
  while (cube_le(r + 1)) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// PrimeTable

PrimeTable::PrimeTable(u64 limit) : limit_(limit) {
  if (limit < 2) throw InvalidArgument("prime table limit must be >= 2");
  if (limit > 0xFFFFFFFFull) throw InvalidArgument("prime table limit must be < 2^32");

  const double ln = std::log(static_cast<double>(limit));
  primes_.reserve(static_cast<std::size_t>(limit / std::max(1.0, ln - 1.2)) + 16);
  primes_.push_back(2);

  const u64 root = isqrt(limit);
  std::vector<std::uint8_t> base(root + 1, 1);
  std::vector<u64> sieving;
  for (u64 i = 3; i <= root; i += 2) {
    if (!base[i]) continue;
    sieving.push_back(i);
    for (u64 j = i * i; j <= root; j += 2 * i) base[j] = 0;
  }

  // Odd numbers only; mark[k] stands for low + 2k.
  constexpr u64 kSegment = 1u << 18;
  std::vector<std::uint8_t> mark(kSegment);
  std::vector<u64> next(sieving.size());
  for (std::size_t i = 0; i < sieving.size(); ++i) next[i] = sieving[i] * sieving[i];

  for (u64 low = 3; low <= limit; low += 2 * kSegment) {
    const u64 high = std::min(limit, low + 2 * kSegment - 1);
    const u64 count = (high - low) / 2 + 1;
    std::fill(mark.begin(), mark.begin() + static_cast<std::ptrdiff_t>(count), 1);
    for (std::size_t i = 0; i < sieving.size(); ++i) {
      const u64 p = sieving[i];
      if (p * p > high) break;
      u64 j = next[i];
      for (; j <= high; j += 2 * p) mark[(j - low) / 2] = 0;
      next[i] = j;
    }
    for (u64 k = 0; k < count; ++k)
      if (mark[k]) primes_.push_back(static_cast<u32>(low + 2 * k));
  }
}

std::size_t PrimeTable::pi(u64 x) const {
  if (x > limit_) throw InvalidArgument("pi(x) queried above the prime table limit");
  return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

bool PrimeTable::contains(u64 n) const {
  if (n > limit_) throw InvalidArgument("membership queried above the prime table limit");
  return std::binary_search(primes_.begin(), primes_.end(), n);
}

PrimeTable build_primes(u64 limit) { return PrimeTable(limit); }

// ---------------------------------------------------------------------------
// Factorization

u64 Factorization::product() const {
  u64 r = 1;
  for (const auto& pp : parts()) r = checked_mul(r, checked_pow(pp.p, pp.e));
  return r;
}

// ---------------------------------------------------------------------------
// FactorWindow

FactorWindow::FactorWindow(u64 lo, u64 hi, const PrimeTable& table) : lo_(lo), hi_(hi), table_(&table) {
  if (lo < 2 || lo >= hi) throw InvalidArgument("factor window requires 2 <= lo < hi");
  if (hi - lo > 0xFFFFFFF0ull) throw InvalidArgument("factor window too wide");
  const u64 root = isqrt(hi - 1);
  if (table.limit() < root)
    throw InvalidArgument("prime table limit " + std::to_string(table.limit()) + " below sqrt(hi-1) = " +
                          std::to_string(root));
  const std::size_t sieving = table.pi(root);
  if (sieving > kMaxSlotIndex) throw InvalidArgument("factor window: too many sieving primes");

  const std::size_t width = static_cast<std::size_t>(hi - lo);
  const auto primes = table.primes();

  std::vector<std::uint8_t> count(width, 0);
  for (std::size_t i = 0; i < sieving; ++i) {
    const u64 p = primes[i];
    for (u64 j = (lo + p - 1) / p * p - lo; j < width; j += p) ++count[j];
  }

  offsets_.resize(width + 1);
  offsets_[0] = 0;
  for (std::size_t j = 0; j < width; ++j) offsets_[j + 1] = offsets_[j] + count[j];
  slots_.resize(offsets_[width]);

  std::fill(count.begin(), count.end(), 0);
  for (std::size_t i = 0; i < sieving; ++i) {
    const u64 p = primes[i];
    for (u64 j = (lo + p - 1) / p * p - lo; j < width; j += p) {
      u64 m = (lo + j) / p;
      u32 e = 1;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      slots_[offsets_[j] + count[j]++] = static_cast<u32>(i << kExponentBits) | e;
    }
  }
}

u64 FactorWindow::spf(u64 n) const {
  if (!covers(n)) throw InvalidArgument("n outside factor window");
  const std::size_t j = static_cast<std::size_t>(n - lo_);
  if (offsets_[j] == offsets_[j + 1]) return n;
  return (*table_)[slots_[offsets_[j]] >> kExponentBits];
}

bool FactorWindow::is_prime(u64 n) const {
  if (!covers(n)) throw InvalidArgument("n outside factor window");
  const std::size_t j = static_cast<std::size_t>(n - lo_);
  return offsets_[j] == offsets_[j + 1];
}

Factorization FactorWindow::factorize(u64 n) const {
  if (!covers(n)) throw InvalidArgument("n outside factor window");
  const std::size_t j = static_cast<std::size_t>(n - lo_);
  Factorization fac(n);
  u64 rest = n;
  for (u32 s = offsets_[j]; s < offsets_[j + 1]; ++s) {
    const u64 p = (*table_)[slots_[s] >> kExponentBits];
    const u32 e = slots_[s] & kExponentMask;
    fac.append(p, e);
    for (u32 k = 0; k < e; ++k) rest /= p;
  }
  if (rest > 1) fac.append(rest, 1);
  return fac;
}

FactorWindow factor_window(u64 lo, u64 hi, const PrimeTable& table) { return FactorWindow(lo, hi, table); }

Factorization factorize(u64 n, const FactorWindow& window) {
  if (n == 1) return Factorization(1);
  return window.factorize(n);
}

Factorization factorize(u64 n, const PrimeTable& table) {
  if (n == 0) throw InvalidArgument("factorize: n must be >= 1");
  if (static_cast<u128>(table.limit()) * table.limit() < n)
    throw InvalidArgument("factorize: n exceeds limit^2 of the prime table");
  Factorization fac(n);
  u64 m = n;
  for (const u64 p : table.primes()) {
    if (p * p > m) break;
    if (m % p != 0) continue;
    u32 e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    fac.append(p, e);
  }
  if (m > 1) fac.append(m, 1);
  return fac;
}

// ---------------------------------------------------------------------------
// Primality and rho

namespace {

bool miller_rabin(u64 n, u64 a) {
  if (a % n == 0) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

u64 rho_step(u64 x, u64 c, u64 n) {
  const u64 y = mulmod(x, x, n);
  return y >= n - c ? y - (n - c) : y + c;
}

u64 absdiff(u64 a, u64 b) { return a > b ? a - b : b - a; }

// Brent's variant; returns a nontrivial factor, or 0 when the budget runs out.
u64 brent_split(u64 n, u64& budget) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1; c < 64; ++c) {
    u64 y = 2, x = 2, ys = 2, g = 1, q = 1, r = 1;
    constexpr u64 m = 128;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = rho_step(y, c, n);
      u64 k = 0;
      do {
        ys = y;
        const u64 steps = std::min(m, r - k);
        for (u64 i = 0; i < steps; ++i) {
          y = rho_step(y, c, n);
          q = mulmod(q, absdiff(x, y), n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      if (budget < r) return 0;
      budget -= r;
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = rho_step(ys, c, n);
        g = std::gcd(absdiff(x, ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
  return 0;
}

void rho_factor(u64 n, u64& budget, std::vector<u64>& out, bool& complete) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 r = isqrt(n);
  if (r * r == n) {
    rho_factor(r, budget, out, complete);
    rho_factor(r, budget, out, complete);
    return;
  }
  const u64 d = brent_split(n, budget);
  if (d == 0) {
    complete = false;
    out.push_back(n);
    return;
  }
  rho_factor(d, budget, out, complete);
  rho_factor(n / d, budget, out, complete);
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (const u64 p : kSmall) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 37 * 37) return true;
  if (n < (1ull << 32)) {
    for (const u64 a : {2ull, 7ull, 61ull})
      if (!miller_rabin(n, a)) return false;
    return true;
  }
  for (const u64 a : kSmall)
    if (!miller_rabin(n, a)) return false;
  return true;
}

bool is_prime(u64 n, const PrimeTable& table) {
  if (n <= table.limit()) return table.contains(n);
  return is_prime(n);
}

FactorResult factor_u64(u64 n, const PrimeTable& table, u64 rho_iterations) {
  if (n == 0) throw InvalidArgument("factor_u64: n must be >= 1");
  FactorResult result{Factorization(n), true};
  u64 m = n;
  bool exhausted = true;
  for (const u64 p : table.primes()) {
    if (static_cast<u128>(p) * p > m) {
      exhausted = false;
      break;
    }
    if (m % p != 0) continue;
    u32 e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    result.fac.append(p, e);
  }
  if (m == 1) return result;
  if (!exhausted || static_cast<u128>(table.limit()) * table.limit() >= m) {
    result.fac.append(m, 1);
    return result;
  }
  std::vector<u64> big;
  u64 budget = rho_iterations;
  rho_factor(m, budget, big, result.complete);
  std::sort(big.begin(), big.end());
  for (std::size_t i = 0; i < big.size();) {
    std::size_t j = i;
    while (j < big.size() && big[j] == big[i]) ++j;
    result.fac.append(big[i], static_cast<u32>(j - i));
    i = j;
  }
  return result;
}

OmegaCount omega_u64(u64 n, const PrimeTable& table) {
  if (n == 0) throw InvalidArgument("omega_u64: n must be >= 1");
  OmegaCount c;
  u64 r = n;
  bool exhausted = true;
  for (const u64 p : table.primes()) {
    if (static_cast<u128>(p) * p * p > r) {
      exhausted = false;
      break;
    }
    if (r % p != 0) continue;
    ++c.omega;
    while (r % p == 0) {
      r /= p;
      ++c.big_omega;
    }
  }
  if (r == 1) return c;
  const u64 L = table.limit();
  if (exhausted && static_cast<u128>(L) * L * L <= r) {
    const FactorResult rest = factor_u64(r, table);
    c.omega += static_cast<int>(rest.fac.size());
    for (const auto& pp : rest.fac.parts()) c.big_omega += static_cast<int>(pp.e);
    c.complete = rest.complete;
    return c;
  }
  // At most two prime factors remain.
  if (is_prime(r)) {
    c.omega += 1;
    c.big_omega += 1;
  } else if (const u64 s = isqrt(r); s * s == r) {
    c.omega += 1;
    c.big_omega += 2;
  } else {
    c.omega += 2;
    c.big_omega += 2;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Arithmetic functions

int omega(const Factorization& fac) { return static_cast<int>(fac.size()); }

int big_omega(const Factorization& fac) {
  int r = 0;
  for (const auto& pp : fac.parts()) r += static_cast<int>(pp.e);
  return r;
}

u64 sigma(const Factorization& fac) {
  u64 r = 1;
  for (const auto& [p, e] : fac.parts()) {
    u64 term = 1, sum = 1;
    for (u32 i = 0; i < e; ++i) {
      term = checked_mul(term, p);
      sum = checked_add(sum, term);
    }
    r = checked_mul(r, sum);
  }
  return r;
}

u64 aliquot_s(const Factorization& fac) { return sigma(fac) - fac.n(); }

u64 phi(const Factorization& fac) {
  u64 r = 1;
  for (const auto& [p, e] : fac.parts()) r *= checked_pow(p, e - 1) * (p - 1);
  return r;
}

int mu(const Factorization& fac) {
  for (const auto& pp : fac.parts())
    if (pp.e > 1) return 0;
  return fac.size() % 2 == 0 ? 1 : -1;
}

u64 rad(const Factorization& fac) {
  u64 r = 1;
  for (const auto& pp : fac.parts()) r *= pp.p;
  return r;
}

u64 squarefull_part(const Factorization& fac) {
  u64 r = 1;
  for (const auto& [p, e] : fac.parts())
    if (e >= 2) r *= checked_pow(p, e);
  return r;
}

u64 carmichael_lambda(const Factorization& fac) {
  u64 r = 1;
  for (const auto& [p, e] : fac.parts()) {
    u64 local;
    if (p == 2)
      local = e <= 2 ? (e == 1 ? 1 : 2) : (1ull << (e - 2));
    else
      local = checked_mul(checked_pow(p, e - 1), p - 1);
    r = checked_lcm(r, local);
  }
  return r;
}

u64 largest_prime_factor(const Factorization& fac) { return fac.empty() ? 1 : fac[fac.size() - 1].p; }

std::vector<u64> divisors(const Factorization& fac) {
  std::vector<u64> ds{1};
  for (const auto& [p, e] : fac.parts()) {
    const std::size_t base = ds.size();
    u64 pk = 1;
    for (u32 k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

int kronecker(i64 d, u64 n) {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  int result = 1;
  const int v = std::countr_zero(n);
  if (v > 0) {
    if (d % 2 == 0) return 0;
    const i64 m8 = ((d % 8) + 8) % 8;
    if ((v & 1) && (m8 == 3 || m8 == 5)) result = -result;
    n >>= v;
  }
  // Jacobi symbol (a/n) for odd n.
  i128 red = static_cast<i128>(d) % static_cast<i128>(n);
  if (red < 0) red += n;
  u64 a = static_cast<u64>(red);
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const u64 r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

}  // namespace hrsift
