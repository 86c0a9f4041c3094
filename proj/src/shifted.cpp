#include "hrsift/shifted.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hrsift/error.hpp"
#include "hrsift/spec_text.hpp"
#include "hrsift/table.hpp"

namespace hrsift {

namespace {

constexpr std::size_t kPrimeBlock = 4096;
constexpr u64 kU64Max = std::numeric_limits<u64>::max();

u64 abs_u64(i128 v) {
  const i128 m = v < 0 ? -v : v;
  if (m > static_cast<i128>(kU64Max)) throw ArithmeticOverflow("value exceeds 64 bits");
  return static_cast<u64>(m);
}

u64 table_limit_for(u64 x) {
  if (x > 0xFFFFFFFEull) throw InvalidArgument("x must be below 2^32");
  return std::max<u64>(x, 2);
}

// Primes in (lo, hi] by a sieve over the window.
std::vector<u64> primes_between(u64 lo, u64 hi, const Budget& budget) {
  std::vector<u64> out;
  if (hi <= lo || hi < 2) return out;
  const u64 start = std::max<u64>(lo + 1, 2);
  budget.check_memory(static_cast<double>(hi - start + 1), "prime window");
  std::vector<char> composite(hi - start + 1, 0);
  const PrimeTable small(std::max<u64>(isqrt(hi), 2));
  for (const u64 p : small.primes()) {
    if (p * p > hi) break;
    u64 m = std::max(p * p, (start + p - 1) / p * p);
    for (; m <= hi; m += p) composite[m - start] = 1;
  }
  for (u64 n = start; n <= hi; ++n)
    if (!composite[n - start]) out.push_back(n);
  return out;
}

// Splits the primes into fixed blocks and sums per-block results in order.
template <class Acc, class Body>
Acc over_prime_blocks(std::span<const u32> primes, const Exec& exec, const std::string& what, Body&& body) {
  const std::size_t blocks = (primes.size() + kPrimeBlock - 1) / kPrimeBlock;
  const auto parts = run_indexed<Acc>(blocks, exec.threads, exec.budget, what, [&](std::size_t i) {
    Acc acc{};
    const std::size_t end = std::min(primes.size(), (i + 1) * kPrimeBlock);
    for (std::size_t k = i * kPrimeBlock; k < end; ++k) body(acc, static_cast<u64>(primes[k]));
    return acc;
  });
  Acc total{};
  for (const Acc& a : parts) total += a;
  return total;
}

}  // namespace

ShiftedDivisorReport shifted_divisor_count(i64 a, u64 u, i64 v, u64 x, u64 y, bool allow_trivial,
                                           const Exec& exec) {
  if (u < 1) throw InvalidArgument("shifted_divisor_count: u must be >= 1");
  if (x < 3 || y < 3) throw InvalidArgument("shifted_divisor_count: x and y must be >= 3");
  if (!allow_trivial && static_cast<i128>(v) == -static_cast<i128>(a) * u)
    throw InvalidArgument("shifted_divisor_count: v = -au is excluded (pass --allow-trivial to run it anyway)");
  const PrimeTable primes(table_limit_for(x));
  const u64 top = abs_u64(static_cast<i128>(u) * x + (v < 0 ? -static_cast<i128>(v) : v));
  const PrimeTable small(std::min<u64>(std::max<u64>(isqrt(top), 2), 0xFFFFFFFEull));

  ShiftedDivisorReport r{a, u, v, x, y, 0, primes.pi(), 0, 0};
  r.count = over_prime_blocks<u64>(primes.primes(), exec, "shifted divisors", [&](u64& acc, u64 p) {
    const i128 m = static_cast<i128>(u) * p + v;
    if (m == 0) return;
    const u64 n = abs_u64(m);
    if (n <= y) return;
    const FactorResult fr = factor_u64(n, small);
    if (!fr.complete) throw ResourceError("shifted_divisor_count: could not factor " + std::to_string(n));
    const auto divs = divisors(fr.fac);
    for (auto it = divs.rbegin(); it != divs.rend() && *it > y; ++it) {
      const i128 q = static_cast<i128>(*it) + a;
      if (q >= 2 && q <= static_cast<i128>(kU64Max) && is_prime(static_cast<u64>(q))) {
        ++acc;
        return;
      }
    }
  });
  r.normalized = r.pi_x ? static_cast<double>(r.count) / static_cast<double>(r.pi_x) : 0.0;
  const double ly = std::log(static_cast<double>(y));
  r.bound_ratio = r.normalized * std::pow(ly, eta0()) * std::sqrt(std::log(ly));
  return r;
}

bool is_lambda_value(u64 n, const PrimeTable& table) {
  if (n == 0) throw InvalidArgument("is_lambda_value: n must be >= 1");
  if (n == 1) return true;
  const FactorResult fr = factor_u64(n, table);
  if (!fr.complete) throw ResourceError("is_lambda_value: could not factor " + std::to_string(n));
  const Factorization& fac = fr.fac;
  auto valuation = [&](u64 q) -> u32 {
    for (const auto& pp : fac.parts())
      if (pp.p == q) return pp.e;
    return 0;
  };
  u64 L = 1;
  for (const u64 d : divisors(fac)) {
    if (d == 1) continue;  // q = 2 contributes lambda(2) = 1
    if (d % 2 != 0) continue;
    const u64 q = d + 1;
    if (!is_prime(q)) continue;
    // lambda(q^(v+1)) = q^v (q - 1) with v = v_q(n); it divides n.
    u64 term = d;
    for (u32 k = valuation(q); k > 0; --k) term *= q;
    L = checked_lcm(L, term);
  }
  if (n % 2 == 0) {
    const u32 v2 = valuation(2);
    L = checked_lcm(L, u64{1} << v2);
  }
  return L == n;
}

bool is_lambda_value(u64 n) {
  const PrimeTable table(std::max<u64>(std::min<u64>(isqrt(n), 1u << 16), 2));
  return is_lambda_value(n, table);
}

LambdaImageReport lambda_image_intersection(u64 u, i64 v, u64 x, const Exec& exec) {
  if (u < 1) throw InvalidArgument("lambda_image_intersection: u must be >= 1");
  LambdaImageReport r{u, v, x, 0, 0, 0};
  const i128 room = static_cast<i128>(x) - v;
  const u64 pmax = room < 2 * static_cast<i128>(u) ? 0 : static_cast<u64>(room / u);
  const PrimeTable primes(table_limit_for(std::max(pmax, x)));
  r.pi_x = x >= 2 ? primes.pi(x) : 0;
  const PrimeTable small(std::max<u64>(isqrt(x), 2));
  const std::size_t np = pmax >= 2 ? primes.pi(pmax) : 0;
  r.count = over_prime_blocks<u64>(primes.primes().first(np), exec, "lambda image", [&](u64& acc, u64 p) {
    const i128 n = static_cast<i128>(u) * p + v;
    if (n < 1 || n > static_cast<i128>(x)) return;
    if (is_lambda_value(static_cast<u64>(n), small)) ++acc;
  });
  r.normalized = r.pi_x ? static_cast<double>(r.count) / static_cast<double>(r.pi_x) : 0.0;
  return r;
}

DeviationReport weighted_sp_deviation(u64 a, i64 b, const MultiplicativeFunction& f, const PrimeSet& e, GKind g,
                                      u64 x, double lambda, const Exec& exec) {
  if (a < 1) throw InvalidArgument("weighted_sp_deviation: a must be >= 1");
  if (b == 0) throw InvalidArgument("weighted_sp_deviation: b must be nonzero");
  if (gcd(a, abs_u64(b)) != 1) throw InvalidArgument("weighted_sp_deviation: gcd(a, b) must be 1");
  if (x < 2) throw InvalidArgument("weighted_sp_deviation: x must be >= 2");
  const i128 top = static_cast<i128>(a) * x + b;
  if (top < 1) throw EmptySetError("weighted_sp_deviation: no positive values ap + b with p <= x");
  if (top > 0xFFFFFFFEll) throw InvalidArgument("weighted_sp_deviation: ax + b must be below 2^32");
  const SiftedSet set = exact_shifted_primes(a, b, static_cast<u64>(top));
  const WeightedHistogram hist = weighted_histogram(set, f, g, e, exec, x);
  DeviationReport r = deviation(hist, lambda);
  r.x = x;
  return r;
}

DeviationReport qf_deviation(const QuadraticForm& form, std::optional<i64> shift, const PrimeSet& e, GKind g, u64 x,
                             double lambda, u64 p0, const Exec& exec) {
  form.validate();
  if (x < 2) throw InvalidArgument("qf_deviation: x must be >= 2");
  const i64 disc = form.discriminant();
  {
    const PrimeTable table(table_limit_for(x));
    for (const u64 p : table.primes()) {
      if (!e.contains(p)) continue;
      if (p < p0)
        throw InvalidArgument("qf_deviation: E contains " + std::to_string(p) + " below p0 = " + std::to_string(p0));
      if (kronecker(disc, p) != 1)
        throw InvalidArgument("qf_deviation: E contains " + std::to_string(p) + " with (D/p) != 1 for D = " +
                              std::to_string(disc));
    }
  }
  const SiftedSet set = shift ? exact_qf_shifted(form, *shift, x, exec) : exact_qf_values(form, x, exec);
  return deviation(weighted_histogram(set, builtin("one"), g, e, exec), lambda);
}

// ---------------------------------------------------------------------------
// Polynomials

i128 Polynomial::operator()(i128 x) const {
  i128 r = 0;
  for (const i64 c : coeffs) {
    if (__builtin_mul_overflow(r, x, &r) || __builtin_add_overflow(r, static_cast<i128>(c), &r))
      throw ArithmeticOverflow("polynomial value overflows 128 bits");
  }
  return r;
}

u64 Polynomial::content() const {
  u64 g = 0;
  for (const i64 c : coeffs) g = gcd(g, abs_u64(c));
  return g;
}

std::string Polynomial::to_string() const {
  std::string s;
  const int d = degree();
  for (int i = 0; i <= d; ++i) {
    const i64 c = coeffs[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const int power = d - i;
    const u64 mag = abs_u64(c);
    if (!s.empty()) s += c < 0 ? "-" : "+";
    else if (c < 0) s += "-";
    if (mag != 1 || power == 0) s += std::to_string(mag);
    if (power >= 1) s += "X";
    if (power >= 2) s += "^" + std::to_string(power);
  }
  return s.empty() ? "0" : s;
}

Polynomial Polynomial::parse(const std::string& text) {
  Polynomial q;
  for (const auto& tok : spec::split(text, ',')) q.coeffs.push_back(spec::parse_i64(tok, text));
  if (q.coeffs.empty()) throw InvalidArgument("empty polynomial '" + text + "'");
  if (q.coeffs.front() == 0) throw InvalidArgument("polynomial '" + text + "' has a zero leading coefficient");
  return q;
}

namespace {

u64 eval_mod(const Polynomial& q, u64 x, u64 p) {
  u64 r = 0;
  for (const i64 c : q.coeffs) {
    const i128 cm = static_cast<i128>(c) % static_cast<i128>(p);
    const u64 cr = static_cast<u64>(cm < 0 ? cm + p : cm);
    r = static_cast<u64>((static_cast<u128>(mulmod(r, x, p)) + cr) % p);
  }
  return r;
}

// Five primes below 2^62 whose product exceeds any |t^d Q(s/t)| tested here.
const std::vector<u64>& check_moduli() {
  static const std::vector<u64> mods = [] {
    std::vector<u64> m;
    for (u64 n = (u64{1} << 62) - 1; m.size() < 5; n -= 2)
      if (is_prime(n)) m.push_back(n);
    return m;
  }();
  return mods;
}

// t^d Q(s/t) = sum c_i s^(d-i) t^i, tested for zero modulo each check prime.
bool is_rational_root(const Polynomial& q, i128 s, u64 t) {
  const int d = q.degree();
  for (const u64 m : check_moduli()) {
    const i128 sm = s % static_cast<i128>(m);
    const u64 sr = static_cast<u64>(sm < 0 ? sm + m : sm);
    const u64 tr = t % m;
    u64 acc = 0;
    for (int i = 0; i <= d; ++i) {
      const i128 cm = static_cast<i128>(q.coeffs[static_cast<std::size_t>(i)]) % static_cast<i128>(m);
      u64 term = static_cast<u64>(cm < 0 ? cm + m : cm);
      term = mulmod(term, powmod(sr, static_cast<u64>(d - i), m), m);
      term = mulmod(term, powmod(tr, static_cast<u64>(i), m), m);
      acc = static_cast<u64>((static_cast<u128>(acc) + term) % m);
    }
    if (acc != 0) return false;
  }
  return true;
}

bool has_rational_root(const Polynomial& q, const PrimeTable& small) {
  auto divs_of = [&](i64 c) {
    const FactorResult fr = factor_u64(abs_u64(c), small);
    if (!fr.complete) throw ResourceError("polynomial check: could not factor coefficient " + std::to_string(c));
    return divisors(fr.fac);
  };
  const auto num = divs_of(q.constant_term());
  const auto den = divs_of(q.coeffs.front());
  for (const u64 s : num)
    for (const u64 t : den) {
      if (gcd(s, t) != 1) continue;
      if (is_rational_root(q, s, t) || is_rational_root(q, -static_cast<i128>(s), t)) return true;
    }
  return false;
}

void validate_polys(const std::vector<Polynomial>& polys, const std::vector<int>& ks) {
  if (polys.empty() || polys.size() > 3) throw InvalidArgument("joint_poly_omega: need 1 to 3 polynomials");
  if (ks.size() != polys.size())
    throw InvalidArgument("joint_poly_omega: need one target k per polynomial");
  const PrimeTable small(1u << 16);
  int total_degree = 0;
  for (std::size_t j = 0; j < polys.size(); ++j) {
    const Polynomial& q = polys[j];
    if (q.degree() < 1 || q.degree() > 3)
      throw InvalidArgument("joint_poly_omega: degree of " + q.to_string() + " must be 1..3");
    if (q.coeffs.front() == 0) throw InvalidArgument("joint_poly_omega: zero leading coefficient");
    if (q.constant_term() == 0) throw InvalidArgument("joint_poly_omega: " + q.to_string() + " has Q(0) = 0");
    if (q.content() != 1)
      throw InvalidArgument("joint_poly_omega: " + q.to_string() + " has content " + std::to_string(q.content()) +
                            ", a fixed prime factor");
    if (q.degree() >= 2 && has_rational_root(q, small))
      throw InvalidArgument("joint_poly_omega: " + q.to_string() + " is reducible (rational root)");
    for (std::size_t i = 0; i < j; ++i)
      if (polys[i].coeffs == q.coeffs) throw InvalidArgument("joint_poly_omega: polynomials must be distinct");
    total_degree += q.degree();
  }
  // A prime above deg(prod Q_j) cannot divide every value of a primitive product.
  for (u64 p = 2; p <= static_cast<u64>(total_degree) + 1; ++p) {
    if (!is_prime(p)) continue;
    u64 roots = 0;
    for (u64 n = 0; n < p; ++n) {
      bool zero = false;
      for (const auto& q : polys) zero = zero || eval_mod(q, n, p) == 0;
      if (zero) ++roots;
    }
    if (roots == p)
      throw InvalidArgument("joint_poly_omega: the product has the fixed prime factor " + std::to_string(p));
  }
}

struct JointAcc {
  u64 count = 0;
  u64 degenerate = 0;
  JointAcc& operator+=(const JointAcc& o) {
    count += o.count;
    degenerate += o.degenerate;
    return *this;
  }
};

}  // namespace

u64 poly_roots_mod_p(const Polynomial& q, u64 p) {
  if (p < 2) throw InvalidArgument("poly_roots_mod_p: p must be prime");
  u64 roots = 0;
  for (u64 n = 0; n < p; ++n)
    if (eval_mod(q, n, p) == 0) ++roots;
  return roots;
}

JointPolyReport joint_poly_omega(const std::vector<Polynomial>& polys, u64 x, u64 y, const std::vector<int>& ks,
                                 const Exec& exec) {
  validate_polys(polys, ks);
  if (x < 2 || y < 1) throw InvalidArgument("joint_poly_omega: need x >= 2 and y >= 1");
  if (x > 0xFFFFFFFEull) throw InvalidArgument("joint_poly_omega: x must be below 2^32");
  const u64 lo = y >= x ? 0 : x - y;

  // Trial division up to the cube root of the largest value, capped; rho takes the rest.
  u64 largest = 0;
  for (const auto& q : polys) {
    i128 bound = 0;
    for (const i64 c : q.coeffs) {
      if (__builtin_mul_overflow(bound, static_cast<i128>(x), &bound) ||
          __builtin_add_overflow(bound, static_cast<i128>(abs_u64(c)), &bound) || bound > static_cast<i128>(kU64Max)) {
        bound = kU64Max;
        break;
      }
    }
    largest = std::max(largest, static_cast<u64>(bound));
  }
  const PrimeTable table(std::clamp<u64>(icbrt(largest) + 1, 2, 1u << 16));

  std::vector<u64> window = primes_between(lo, x, exec.budget);
  std::vector<u32> window32(window.begin(), window.end());
  window.clear();

  JointPolyReport r;
  r.primes_in_window = window32.size();
  const JointAcc acc = over_prime_blocks<JointAcc>(window32, exec, "joint omega", [&](JointAcc& a, u64 p) {
    bool match = true;
    for (std::size_t j = 0; j < polys.size(); ++j) {
      const i128 v = polys[j](static_cast<i128>(p));
      if (v == 0) {
        ++a.degenerate;
        return;
      }
      const i128 mag = v < 0 ? -v : v;
      if (mag > static_cast<i128>(kU64Max))
        throw InvalidArgument("joint_poly_omega: |" + polys[j].to_string() + "| exceeds 64 bits at p = " +
                              std::to_string(p));
      const OmegaCount oc = omega_u64(static_cast<u64>(mag), table);
      if (!oc.complete)
        throw ResourceError("joint_poly_omega: could not factor " + polys[j].to_string() + " at p = " +
                            std::to_string(p));
      match = match && oc.omega == ks[j];
    }
    if (match) ++a.count;
  });
  r.count = acc.count;
  r.degenerate = acc.degenerate;

  r.diag_limit = std::min<u64>(x, 10000);
  const PrimeTable diag(std::max<u64>(r.diag_limit, 2));
  for (const auto& q : polys) {
    double S = 0;
    double sup = 0;
    for (const u64 p : diag.primes()) {
      if (p > r.diag_limit) break;
      const double ll = std::log(std::log(static_cast<double>(p)));
      sup = std::max(sup, std::abs(S - ll));
      S += static_cast<double>(poly_roots_mod_p(q, p)) / static_cast<double>(p);
      sup = std::max(sup, std::abs(S - ll));
    }
    sup = std::max(sup, std::abs(S - std::log(std::log(static_cast<double>(r.diag_limit)))));
    r.M_diag.push_back(sup);
  }
  return r;
}

u64 ap_prime_factor_count(u64 x, u64 d, u64 a, GKind g, int k, const Exec& exec) {
  if (d < 1) throw InvalidArgument("ap_prime_factor_count: d must be >= 1");
  const u64 res = a % d;
  if (gcd(res, d) != 1) throw InvalidArgument("ap_prime_factor_count: gcd(a, d) must be 1");
  if (x < 1 || k < 0) return 0;
  const PrimeTable table(std::max<u64>(isqrt(x), 2));
  const PrimeSet all = PrimeSet::all();
  return reduce_factored(
      1, x + 1, table, exec, u64{0},
      [&](u64& acc, const Factorization& fac) {
        if (fac.n() % d == res && g_value(g, fac, all) == k) ++acc;
      },
      [](u64& acc, u64 b) { acc += b; }, "progression count");
}

}  // namespace hrsift
