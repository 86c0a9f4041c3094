#include "hrsift/table.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "hrsift/error.hpp"
#include "hrsift/hr_lab.hpp"

namespace hrsift {

double eta0() { return 1.0 - (1.0 + std::log(std::log(2.0))) / std::log(2.0); }

namespace {

u64 product_limit(u64 N) {
  if (N == 0) throw InvalidArgument("table count: N must be >= 1");
  if (N > 0xFFFFFFFFull) throw InvalidArgument("table count: N must be < 2^32");
  return N * N;
}

// Calls mark(bitmap, L, R) per segment [L, R) of [1, N^2] and sums count(bitmap, L, R).
template <class Count>
u64 segmented_products(u64 N, const Exec& exec, u64 segment_bits, const std::string& what, Count&& count) {
  const u64 top = product_limit(N);
  const u64 seg = std::max<u64>(64, segment_bits / 64 * 64);
  exec.budget.check_memory(static_cast<double>(seg) / 8.0 * std::max(1u, exec.threads), what + " segments");
  const std::size_t segments = static_cast<std::size_t>((top + seg - 1) / seg);
  const auto counts = run_indexed<u64>(segments, exec.threads, exec.budget, what, [&](std::size_t i) {
    const u64 L = 1 + static_cast<u64>(i) * seg;
    const u64 R = std::min(top + 1, L + seg);
    std::vector<u64> bits((R - L + 63) / 64, 0);
    for (u64 a = std::max<u64>(1, (L + N - 1) / N); a <= N; ++a) {
      if (a * a >= R) break;
      u64 b = std::max(a, (L + a - 1) / a);
      const u64 bhi = std::min(N, (R - 1) / a);
      for (u64 n = a * b - L; b <= bhi; ++b, n += a) bits[n >> 6] |= u64{1} << (n & 63);
    }
    return count(bits, L, R);
  });
  u64 total = 0;
  for (const u64 c : counts) total += c;
  return total;
}

}  // namespace

u64 table_count(u64 N, const Exec& exec, u64 segment_bits) {
  return segmented_products(N, exec, segment_bits, "table count", [](const std::vector<u64>& bits, u64, u64) {
    u64 c = 0;
    for (const u64 w : bits) c += static_cast<u64>(std::popcount(w));
    return c;
  });
}

u64 table_count_shifted(u64 N, i64 s, const Exec& exec, u64 segment_bits) {
  const u64 top = product_limit(N);
  const i128 plimit = static_cast<i128>(top) + s;
  if (plimit < 2) return 0;
  if (plimit > 0xFFFFFFFFll) throw InvalidArgument("table_count_shifted: N^2 + s must be < 2^32");
  exec.budget.check_memory(static_cast<double>(plimit) / 8.0, "primality bitmap");
  Bitmap prime_bits(static_cast<u64>(plimit) + 1);
  {
    const PrimeTable table(static_cast<u64>(plimit));
    for (const u64 p : table.primes()) prime_bits.set(p);
  }
  return segmented_products(N, exec, segment_bits, "shifted table count",
                            [&](const std::vector<u64>& bits, u64 L, u64 R) {
                              u64 c = 0;
                              for (u64 n = L; n < R; ++n) {
                                const u64 off = n - L;
                                if (!((bits[off >> 6] >> (off & 63)) & 1u)) continue;
                                const i128 m = static_cast<i128>(n) + s;
                                if (m >= 2 && prime_bits.test(static_cast<u64>(m))) ++c;
                              }
                              return c;
                            });
}

double ford_ratio(u64 N, u64 A) {
  if (N < 3) throw InvalidArgument("ford_ratio: N must be >= 3");
  const double n = static_cast<double>(N);
  const double ln = std::log(n);
  return static_cast<double>(A) * std::pow(ln, eta0()) * std::pow(std::log(ln), 1.5) / (n * n);
}

TableReport table_report(u64 N, std::optional<i64> s, const Exec& exec) {
  TableReport r;
  r.N = N;
  r.A = table_count(N, exec);
  r.ford_ratio = N >= 3 ? ford_ratio(N, r.A) : std::numeric_limits<double>::quiet_NaN();
  if (s) {
    r.s = s;
    r.A_shifted = table_count_shifted(N, *s, exec);
  }
  return r;
}

bool has_divisor_in(const Factorization& fac, u64 lo, u64 hi) {
  if (lo > hi) return false;
  const auto parts = fac.parts();
  // Depth-first over exponent vectors; partial products only grow, so any
  // branch above hi is dead.
  auto search = [&](auto&& self, std::size_t i, u64 d) -> bool {
    if (d >= lo) return true;
    if (i == parts.size()) return false;
    const auto [p, e] = parts[i];
    u64 cur = d;
    for (u32 k = 0; k <= e; ++k) {
      if (self(self, i + 1, cur)) return true;
      if (k == e || cur > hi / p) break;
      cur *= p;
      if (cur > hi) break;
    }
    return false;
  };
  return search(search, 0, 1);
}

SiftedTableReport sifted_table_sum(const SiftedSet& set, const MultiplicativeFunction& f, const Exec& exec) {
  if (set.x < 16) throw InvalidArgument("sifted_table_sum: x must be >= 16");
  const u64 x = set.x;
  const u64 r = isqrt(x);
  const PrimeTable table(std::max<u64>(r, 2));
  struct Acc {
    double sum = 0;
    u64 count = 0;
  };
  const Acc acc = reduce_factored(
      1, x + 1, table, exec, Acc{},
      [&](Acc& a, const Factorization& fac) {
        const u64 n = fac.n();
        if (!set.members.test(n)) return;
        const bool qualifies = n <= r || has_divisor_in(fac, (n + r - 1) / r, r);
        if (!qualifies) return;
        a.sum += f(fac);
        ++a.count;
      },
      [](Acc& a, const Acc& b) {
        a.sum += b.sum;
        a.count += b.count;
      },
      "sifted table");

  SiftedTableReport rep;
  rep.x = x;
  rep.sum = acc.sum;
  rep.count = acc.count;
  rep.M = mertens_sum(f, x, PrimeSet::all());
  rep.M_nu = nu_sum(set.condition, x);
  const double lx = std::log(static_cast<double>(x));
  const double llx = std::log(lx);
  rep.R = rep.M * std::log(2.0) / llx;
  rep.regime = rep.R <= 0.5 ? "R<=1/2" : (rep.R < 1 ? "1/2<R<1" : "R>=1");
  const double sqrtM = std::sqrt(rep.M);
  const double base = static_cast<double>(x) / (lx * sqrtM);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.bound_small_R = (1 + std::pow(4.0, rep.M) * sqrtM / lx) * base *
                      std::exp(2 * (1 - std::log(2.0)) * rep.M - rep.M_nu);
  if (rep.R > 0) {
    const double shape = base * std::exp((1 - q_rate(1 / rep.R)) * rep.M - rep.M_nu);
    rep.shape_ratio = rep.sum / shape;
    rep.bound_mid_R = (rep.R > 0.5 && rep.R < 1) ? (1 / (1 - rep.R) + 1 / std::sqrt(2 * rep.R - 1)) * shape : nan;
  } else {
    rep.shape_ratio = nan;
    rep.bound_mid_R = nan;
  }
  return rep;
}

}  // namespace hrsift
