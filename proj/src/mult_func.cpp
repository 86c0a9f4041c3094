#include "hrsift/mult_func.hpp"

#include <cmath>

#include "hrsift/error.hpp"
#include "hrsift/spec_text.hpp"

namespace hrsift {

MultiplicativeFunction::MultiplicativeFunction(std::string name, Rule rule, double a1, std::string growth_note,
                                               std::string spec, bool integer_valued)
    : name_(std::move(name)),
      rule_(std::move(rule)),
      a1_(a1),
      growth_note_(std::move(growth_note)),
      spec_(std::move(spec)),
      integer_valued_(integer_valued) {
  if (!(a1_ > 0)) throw InvalidArgument("multiplicative function '" + name_ + "': A1 must be positive");
}

double MultiplicativeFunction::at(u64 p, u32 l) const {
  const double v = rule_(p, l);
  if (!(v >= 0))
    throw InvalidFunction("multiplicative function '" + name_ + "' is negative at " + std::to_string(p) + "^" +
                          std::to_string(l));
  return v;
}

double MultiplicativeFunction::operator()(const Factorization& fac) const {
  double r = 1.0;
  for (const auto& [p, e] : fac.parts()) r *= at(p, e);
  return r;
}

double eval_mf(const MultiplicativeFunction& f, const Factorization& fac) { return f(fac); }

namespace {

std::string fmt_param(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

double binomial(u32 n, u32 k) {
  double r = 1;
  for (u32 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace

MultiplicativeFunction builtin(const std::string& name, double param) {
  if (name == "one")
    return {"one", [](u64, u32) { return 1.0; }, 1.0, "bounded by 1", "one", true};
  if (name == "mu_sq")
    return {"mu_sq", [](u64, u32 l) { return l == 1 ? 1.0 : 0.0; }, 1.0, "bounded by 1", "musq", true};
  if (name == "z_omega" || name == "z_bigomega") {
    if (!(param > 0)) throw InvalidArgument(name + ": z must be positive");
    const double z = param;
    const bool big = name == "z_bigomega";
    const bool integral = z == std::floor(z);
    MultiplicativeFunction::Rule rule;
    if (big)
      rule = [z](u64, u32 l) { return std::pow(z, static_cast<double>(l)); };
    else
      rule = [z](u64, u32) { return z; };
    return {name,
            std::move(rule),
            std::max(1.0, z),
            big ? "z^Omega(n) <= tau_k(n) growth, n^eps for every eps" : "z^omega(n) <= tau(n)^log2(z) = n^o(1)",
            (big ? "zbigomega:" : "zomega:") + fmt_param(z),
            integral};
  }
  if (name == "tau_k") {
    if (!(param >= 1) || param != std::floor(param)) throw InvalidArgument("tau_k: k must be a positive integer");
    const u32 k = static_cast<u32>(param);
    return {"tau_k", [k](u64, u32 l) { return binomial(l + k - 1, k - 1); }, static_cast<double>(k),
            "tau_k(n) = n^o(1)", "tauk:" + std::to_string(k), true};
  }
  if (name == "r_over_4")
    return {"r_over_4",
            [](u64 p, u32 l) {
              if (p == 2) return 1.0;
              if (p % 4 == 1) return static_cast<double>(l + 1);
              return l % 2 == 0 ? 1.0 : 0.0;
            },
            2.0, "r(n)/4 <= tau(n)", "r4", true};
  if (name == "sum2sq_indicator")
    return {"sum2sq_indicator", [](u64 p, u32 l) { return (p % 4 == 3 && l % 2 == 1) ? 0.0 : 1.0; }, 1.0,
            "bounded by 1", "s2s", true};
  if (name == "phi_over_n")
    return {"phi_over_n", [](u64 p, u32) { return 1.0 - 1.0 / static_cast<double>(p); }, 1.0, "bounded by 1",
            "phioverN"};
  if (name == "n_over_phi")
    return {"n_over_phi",
            [](u64 p, u32) { return static_cast<double>(p) / static_cast<double>(p - 1); },
            2.0, "n/phi(n) << log log n", "Noverphi"};
  throw InvalidArgument("unknown multiplicative function '" + name + "'");
}

MultiplicativeFunction parse_function(const std::string& text) {
  const std::string s = spec::trim(text);
  const auto [head, rest] = spec::split_head(s);
  auto no_arg = [&](const char* name) {
    if (!rest.empty()) throw InvalidArgument("malformed function spec '" + s + "': unexpected '" + rest + "'");
    return builtin(name);
  };
  if (head == "one") return no_arg("one");
  if (head == "musq") return no_arg("mu_sq");
  if (head == "r4") return no_arg("r_over_4");
  if (head == "s2s") return no_arg("sum2sq_indicator");
  if (head == "phioverN") return no_arg("phi_over_n");
  if (head == "Noverphi") return no_arg("n_over_phi");
  if (head == "zomega") return builtin("z_omega", spec::parse_double(rest, s));
  if (head == "zbigomega") return builtin("z_bigomega", spec::parse_double(rest, s));
  if (head == "tauk") return builtin("tau_k", static_cast<double>(spec::parse_u64(rest, s)));
  throw InvalidArgument("malformed function spec: unknown token '" + head + "' in '" + s + "'");
}

double mertens_sum(const MultiplicativeFunction& f, u64 x, const PrimeSet& e, const PrimeTable& table) {
  if (x < 2) throw InvalidArgument("mertens_sum: x must be >= 2");
  if (table.limit() < x) throw InvalidArgument("mertens_sum: prime table below x");
  double sum = 0;
  for (const u64 p : table.primes()) {
    if (p > x) break;
    if (e.contains(p)) sum += f.at(p, 1) / static_cast<double>(p);
  }
  return sum;
}

double mertens_sum(const MultiplicativeFunction& f, u64 x, const PrimeSet& e) {
  return mertens_sum(f, x, e, PrimeTable(std::max<u64>(x, 2)));
}

double hr_constant(u64 x, const PrimeTable& table) {
  if (x < 2) throw InvalidArgument("hr_constant: x must be >= 2");
  if (table.limit() < x) throw InvalidArgument("hr_constant: prime table below x");
  const auto primes = table.primes();
  const std::size_t count = table.pi(x);
  double partial = 0;
  double sup = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double p = primes[i];
    const double before = partial;
    partial += 1.0 / p;
    const double ll = std::log(std::log(p));
    // Left limit at p (t = 2 has no left side inside [2, x]).
    if (i > 0) sup = std::max(sup, std::abs(before - ll));
    sup = std::max(sup, std::abs(partial - ll));
  }
  // Right end of the final step.
  sup = std::max(sup, std::abs(partial - std::log(std::log(static_cast<double>(x)))));
  return sup;
}

double hr_constant(u64 x) { return hr_constant(x, PrimeTable(std::max<u64>(x, 2))); }

double harmonic_mean_ratio(const MultiplicativeFunction& f, u64 x, const Exec& exec) {
  if (x < 2) throw InvalidArgument("harmonic_mean_ratio: x must be >= 2");
  const PrimeTable table(std::max<u64>(isqrt(x), 2));
  const double sum = reduce_factored(
      1, x + 1, table, exec, 0.0,
      [&](double& acc, const Factorization& fac) { acc += f(fac) / static_cast<double>(fac.n()); },
      [](double& acc, double part) { acc += part; }, "harmonic mean");
  return sum / std::exp(mertens_sum(f, x, PrimeSet::all()));
}

ClassReport class_check(const MultiplicativeFunction& f, u64 x, double a1, const Exec& exec) {
  if (x < 2) throw InvalidArgument("class_check: x must be >= 2");
  if (!(a1 > 0)) throw InvalidArgument("class_check: A1 must be positive");
  static constexpr double kEps[] = {0.1, 0.01};
  struct Acc {
    double worst = -1;
    u64 witness = 0;
    double growth[2] = {-1, -1};
    u64 growth_witness[2] = {0, 0};
  };
  const PrimeTable table(std::max<u64>(isqrt(x), 2));
  const Acc acc = reduce_factored(
      1, x + 1, table, exec, Acc{},
      [&](Acc& a, const Factorization& fac) {
        const double v = f(fac);
        const double ratio = v / std::pow(a1, big_omega(fac));
        if (ratio > a.worst) {
          a.worst = ratio;
          a.witness = fac.n();
        }
        for (int i = 0; i < 2; ++i) {
          const double g = v / std::pow(static_cast<double>(fac.n()), kEps[i]);
          if (g > a.growth[i]) {
            a.growth[i] = g;
            a.growth_witness[i] = fac.n();
          }
        }
      },
      [](Acc& a, const Acc& b) {
        if (b.worst > a.worst) {
          a.worst = b.worst;
          a.witness = b.witness;
        }
        for (int i = 0; i < 2; ++i)
          if (b.growth[i] > a.growth[i]) {
            a.growth[i] = b.growth[i];
            a.growth_witness[i] = b.growth_witness[i];
          }
      },
      "class check");
  ClassReport r{acc.worst <= 1.0, acc.worst, acc.witness, {}};
  for (int i = 0; i < 2; ++i) r.growth.push_back({kEps[i], acc.growth[i], acc.growth_witness[i]});
  return r;
}

double coprimality_factor(const MultiplicativeFunction& f, u64 d) {
  if (d == 0) throw InvalidArgument("coprimality_factor: d must be >= 1");
  const PrimeTable table(std::max<u64>(std::min<u64>(isqrt(d) + 1, 1u << 20), 2));
  const Factorization fac = factor_u64(d, table).fac;
  const double a1 = f.a1();
  double result = 1.0;
  for (const auto& pp : fac.parts()) {
    const double p = static_cast<double>(pp.p);
    if (!(a1 < p))
      throw InvalidArgument("coprimality_factor: local series at p=" + std::to_string(pp.p) +
                            " may diverge (A1 >= p)");
    const double ratio = a1 / p;
    double sum = 1.0;
    double pl = 1.0;
    double bound = 1.0;  // (A1/p)^l dominates f(p^l)/p^l
    for (u32 l = 1; l < 64; ++l) {
      pl *= p;
      if (pl > 9.2e18) break;
      sum += f.at(pp.p, l) / pl;
      bound *= ratio;
      if (bound * ratio / (1.0 - ratio) < 1e-18 * sum) break;
    }
    result /= sum;
  }
  return result;
}

}  // namespace hrsift
