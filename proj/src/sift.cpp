#include "hrsift/sift.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

#include "hrsift/error.hpp"
#include "hrsift/spec_text.hpp"

namespace hrsift {

Bitmap::Bitmap(u64 size, bool value) : size_(size), words_((size + 63) / 64, value ? ~u64{0} : 0) {
  if (value && size % 64 != 0) words_.back() &= (u64{1} << (size % 64)) - 1;
}

void Bitmap::set_atomic(u64 i) {
  std::atomic_ref<u64> word(words_[i >> 6]);
  word.fetch_or(u64{1} << (i & 63), std::memory_order_relaxed);
}

u64 Bitmap::count() const {
  u64 c = 0;
  for (const u64 w : words_) c += static_cast<u64>(std::popcount(w));
  return c;
}

std::vector<u64> SiftedSet::to_vector() const {
  std::vector<u64> out;
  for (u64 n = 1; n <= x; ++n)
    if (members.test(n)) out.push_back(n);
  return out;
}

// ---------------------------------------------------------------------------

void SieveCondition::exclude(u64 p, const std::vector<i64>& residues) {
  if (!is_prime(p)) throw InvalidCondition("sieve condition modulus " + std::to_string(p) + " is not prime");
  std::vector<u64> slot = exclusions_.count(p) ? exclusions_[p] : std::vector<u64>{};
  for (const i64 r : residues) {
    const i64 red = ((r % static_cast<i64>(p)) + static_cast<i64>(p)) % static_cast<i64>(p);
    if (red == 0)
      throw InvalidCondition("excluded residue " + std::to_string(r) + " is 0 mod " + std::to_string(p) +
                             "; exclusions must be reduced residues");
    slot.push_back(static_cast<u64>(red));
  }
  std::sort(slot.begin(), slot.end());
  slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
  if (!slot.empty()) exclusions_[p] = std::move(slot);
}

std::size_t SieveCondition::nu(u64 p) const {
  const auto it = exclusions_.find(p);
  return it == exclusions_.end() ? 0 : it->second.size();
}

std::size_t SieveCondition::v() const {
  std::size_t r = 0;
  for (const auto& [p, rs] : exclusions_) r = std::max(r, rs.size());
  return r;
}

u64 SieveCondition::support_bound() const { return exclusions_.empty() ? 0 : exclusions_.rbegin()->first; }

bool SieveCondition::admits(u64 n) const {
  for (const auto& [p, rs] : exclusions_)
    if (std::binary_search(rs.begin(), rs.end(), n % p)) return false;
  return true;
}

void QuadraticForm::validate() const {
  if (a <= 0 || c <= 0) throw InvalidArgument("quadratic form must have a, c > 0");
  if (discriminant() >= 0) throw InvalidArgument("quadratic form must be positive definite (b^2 - 4ac < 0)");
  if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) throw InvalidArgument("quadratic form must be primitive");
}

// ---------------------------------------------------------------------------

SiftedSet sift(u64 x, const SieveCondition& cond, const Exec& exec) {
  if (x < 1) throw InvalidArgument("sift: x must be >= 1");
  exec.budget.check_memory(static_cast<double>(x) / 8.0, "sift bitmap");
  SiftedSet set{x, Bitmap(x + 1), cond, std::nullopt};
  auto& words = set.members.words();
  // Windows are whole words so no two tasks touch the same word.
  const u64 window = std::max<u64>(64, exec.window / 64 * 64);
  const std::size_t count = static_cast<std::size_t>((x + 1 + window - 1) / window);
  run_indexed<int>(count, exec.threads, exec.budget, "sift", [&](std::size_t i) {
    const u64 lo = static_cast<u64>(i) * window;
    const u64 hi = std::min(x + 1, lo + window);
    for (u64 w = lo / 64; w < (hi + 63) / 64; ++w) words[w] = ~u64{0};
    if (hi % 64 != 0) words[(hi - 1) / 64] &= (u64{1} << (hi % 64)) - 1;
    if (lo == 0) words[0] &= ~u64{1};
    for (const auto& [p, rs] : cond.exclusions()) {
      for (const u64 r : rs) {
        u64 n = lo / p * p + r;
        if (n < lo) n += p;
        for (; n < hi; n += p) words[n >> 6] &= ~(u64{1} << (n & 63));
      }
    }
    return 0;
  });
  return set;
}

double nu_sum(const SieveCondition& cond, u64 x) {
  if (x < 2) throw InvalidArgument("nu_sum: x must be >= 2");
  double s = 0;
  for (const auto& [p, rs] : cond.exclusions()) {
    if (p > x) break;
    s += static_cast<double>(rs.size()) / static_cast<double>(p);
  }
  return s;
}

double h2_weight(const SieveCondition& cond, const Factorization& fac) {
  double r = 1;
  for (const auto& pp : fac.parts())
    r *= 1.0 + static_cast<double>(cond.nu(pp.p)) / static_cast<double>(pp.p);
  return r;
}

SieveCondition preset_shifted_prime_superset(u64 a, i64 b, u64 x, u64 z) {
  if (a < 1) throw InvalidArgument("shifted-prime preset: a must be >= 1");
  const u64 babs = static_cast<u64>(b < 0 ? -b : b);
  if (std::gcd(a, babs) != 1) throw InvalidArgument("shifted-prime preset: gcd(a, b) must be 1");
  if (z > isqrt(x)) throw InvalidArgument("shifted-prime preset: z must be <= sqrt(x)");
  SieveCondition cond;
  if (z >= 2) {
    const PrimeTable table(z);
    for (const u64 q : table.primes()) {
      if (a % q == 0 || babs % q == 0) continue;
      cond.exclude(q, {b});
    }
  }
  std::string label = "avoid:" + std::to_string(b) + "/modp<=" + std::to_string(z);
  if (a != 1) label += ",coprime=" + std::to_string(a);
  cond.set_label(std::move(label));
  return cond;
}

SiftedSet exact_shifted_primes(u64 a, i64 b, u64 x) {
  if (a < 1) throw InvalidArgument("exact_shifted_primes: a must be >= 1");
  SiftedSet set{x, Bitmap(x + 1), SieveCondition{}, "sp:" + std::to_string(a) + "," + std::to_string(b)};
  const i128 top = static_cast<i128>(x) - b;
  if (top < 2 * static_cast<i128>(a)) return set;
  const u64 pmax = static_cast<u64>(top / a);
  const PrimeTable table(std::max<u64>(pmax, 2));
  for (const u64 p : table.primes()) {
    if (p > pmax) break;
    const i128 n = static_cast<i128>(a) * p + b;
    if (n >= 1 && n <= static_cast<i128>(x)) set.members.set(static_cast<u64>(n));
  }
  return set;
}

namespace {

std::string qf_label(const QuadraticForm& f) {
  return "qf:" + std::to_string(f.a) + "," + std::to_string(f.b) + "," + std::to_string(f.c);
}

}  // namespace

SiftedSet exact_qf_values(const QuadraticForm& form, u64 x, const Exec& exec) {
  form.validate();
  if (x < 1) throw InvalidArgument("exact_qf_values: x must be >= 1");
  const i128 d = -static_cast<i128>(form.discriminant());
  SiftedSet set{x, Bitmap(x + 1), SieveCondition{}, qf_label(form)};
  // F(X, Y) <= x forces Y^2 <= 4ax/|D|; F(-X,-Y) = F(X,Y) so Y >= 0 suffices.
  const u64 ymax = isqrt(static_cast<u64>(4 * static_cast<i128>(form.a) * x / d));
  constexpr u64 kRows = 256;
  const std::size_t blocks = static_cast<std::size_t>(ymax / kRows + 1);
  run_indexed<int>(blocks, exec.threads, exec.budget, "quadratic form enumeration", [&](std::size_t blk) {
    const u64 y0 = blk * kRows;
    const u64 y1 = std::min(ymax, y0 + kRows - 1);
    for (u64 yy = y0; yy <= y1; ++yy) {
      const i64 y = static_cast<i64>(yy);
      const i128 disc = 4 * static_cast<i128>(form.a) * x - d * y * y;
      if (disc < 0) continue;
      const long double root = std::sqrt(static_cast<long double>(disc));
      const long double center = -static_cast<long double>(form.b) * y;
      const i64 xlo = static_cast<i64>(std::floor((center - root) / (2.0L * form.a))) - 1;
      const i64 xhi = static_cast<i64>(std::ceil((center + root) / (2.0L * form.a))) + 1;
      for (i64 xx = xlo; xx <= xhi; ++xx) {
        const i128 v = form(xx, y);
        if (v >= 1 && v <= static_cast<i128>(x)) set.members.set_atomic(static_cast<u64>(v));
      }
    }
    return 0;
  });
  return set;
}

SiftedSet exact_qf_shifted(const QuadraticForm& form, i64 k, u64 x, const Exec& exec) {
  SiftedSet set = exact_qf_values(form, x, exec);
  const i128 top = static_cast<i128>(x) + k;
  const PrimeTable table(static_cast<u64>(std::max<i128>(top, 2)));
  for (u64 n = 1; n <= x; ++n) {
    if (!set.members.test(n)) continue;
    const i128 m = static_cast<i128>(n) + k;
    if (m < 2 || !table.contains(static_cast<u64>(m))) set.members.reset(n);
  }
  set.exact_label = qf_label(form) + ",shift=" + std::to_string(k);
  return set;
}

// ---------------------------------------------------------------------------

SieveCondition parse_condition(const std::string& text, u64 x) {
  const std::string s = spec::trim(text);
  if (s == "none") return SieveCondition{};
  const auto [head, rest] = spec::split_head(s);
  if (head == "avoid") {
    // b/modp<=z[,coprime=a]
    const auto slash = rest.find("/modp<=");
    if (slash == std::string::npos)
      throw InvalidArgument("malformed sieve spec '" + s + "': expected avoid:b/modp<=z[,coprime=a]");
    const i64 b = spec::parse_i64(rest.substr(0, slash), s);
    const auto tail = spec::split(rest.substr(slash + 7), ',');
    if (tail.empty()) throw InvalidArgument("malformed sieve spec '" + s + "': missing z");
    const u64 z = spec::parse_u64(tail[0], s);
    u64 a = 1;
    for (std::size_t i = 1; i < tail.size(); ++i) {
      if (tail[i].rfind("coprime=", 0) != 0)
        throw InvalidArgument("malformed sieve spec '" + s + "': bad token '" + tail[i] + "'");
      a = spec::parse_u64(tail[i].substr(8), s);
    }
    return preset_shifted_prime_superset(a, b, x, z);
  }
  if (head == "explicit") {
    std::ifstream in(rest);
    if (!in) throw InvalidArgument("cannot open sieve condition file '" + rest + "'");
    SieveCondition cond;
    std::string line;
    while (std::getline(in, line)) {
      const auto t = spec::trim(line);
      if (t.empty() || t.front() == '#') continue;
      const auto [p, rs] = spec::split_head(t);
      std::vector<i64> residues;
      for (const auto& r : spec::split(rs, ',')) residues.push_back(spec::parse_i64(r, t));
      cond.exclude(spec::parse_u64(p, t), residues);
    }
    cond.set_label(s);
    return cond;
  }
  throw InvalidArgument("malformed sieve spec: unknown token '" + head + "' in '" + s + "'");
}

SiftedSet parse_set(const std::string& text, u64 x, const Exec& exec) {
  const std::string s = spec::trim(text);
  const auto [head, rest] = spec::split_head(s);
  if (head == "sp") {
    const auto parts = spec::split(rest, ',');
    if (parts.size() != 2) throw InvalidArgument("malformed set spec '" + s + "': expected sp:a,b");
    return exact_shifted_primes(spec::parse_u64(parts[0], s), spec::parse_i64(parts[1], s), x);
  }
  if (head == "qf") {
    const auto parts = spec::split(rest, ',');
    if (parts.size() != 3 && parts.size() != 4)
      throw InvalidArgument("malformed set spec '" + s + "': expected qf:a,b,c[,shift=k]");
    const QuadraticForm form{spec::parse_i64(parts[0], s), spec::parse_i64(parts[1], s), spec::parse_i64(parts[2], s)};
    if (parts.size() == 3) return exact_qf_values(form, x, exec);
    if (parts[3].rfind("shift=", 0) != 0)
      throw InvalidArgument("malformed set spec '" + s + "': bad token '" + parts[3] + "'");
    return exact_qf_shifted(form, spec::parse_i64(parts[3].substr(6), s), x, exec);
  }
  return sift(x, parse_condition(s, x), exec);
}

}  // namespace hrsift
