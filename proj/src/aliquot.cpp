#include "hrsift/aliquot.hpp"

#include <cmath>
#include <limits>

#include "hrsift/error.hpp"

namespace hrsift {

namespace {

void check_window(u64 lo, u64 hi, const char* what) {
  if (lo < 1 || hi <= lo) throw InvalidArgument(std::string(what) + ": need 1 <= lo < hi");
}

PrimeTable table_for(u64 x) { return PrimeTable(std::max<u64>(isqrt(x), 2)); }

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

AliquotWindow aliquot_window(u64 lo, u64 hi) {
  check_window(lo, hi, "aliquot_window");
  AliquotWindow w{lo, hi, std::vector<u64>(hi - lo, 0)};
  std::vector<u64>& sig = w.s_values;
  const u64 top = isqrt(hi - 1);
  for (u64 d = 1; d <= top; ++d) {
    const u64 first = std::max(d * d, (lo + d - 1) / d * d);
    for (u64 n = first; n < hi; n += d) {
      const u64 add = n == d * d ? d : d + n / d;
      if (__builtin_add_overflow(sig[n - lo], add, &sig[n - lo]))
        throw ArithmeticOverflow("aliquot_window: sigma overflows at n = " + std::to_string(n));
    }
  }
  for (u64 n = lo; n < hi; ++n) sig[n - lo] -= n;
  return w;
}

AliquotWindow aliquot_window_factored(u64 lo, u64 hi) {
  check_window(lo, hi, "aliquot_window_factored");
  AliquotWindow w{lo, hi, {}};
  w.s_values.reserve(hi - lo);
  if (lo == 1) w.s_values.push_back(0);
  const u64 start = std::max<u64>(lo, 2);
  if (start < hi) {
    const PrimeTable table = table_for(hi - 1);
    const FactorWindow fw(start, hi, table);
    for (u64 n = start; n < hi; ++n) w.s_values.push_back(aliquot_s(fw.factorize(n)));
  }
  return w;
}

double log4(double x) {
  double v = x;
  for (int i = 0; i < 4; ++i) {
    if (!(v > 0)) return nan();
    v = std::log(v);
  }
  return v;
}

EgpsReport egps_deviation(u64 x, const MultiplicativeFunction& f, std::optional<double> lambda,
                          std::optional<double> c0, const Exec& exec, const std::vector<double>& grid) {
  if (x < 16) throw InvalidArgument("egps_deviation: x must be >= 16");
  if (lambda.has_value() == c0.has_value()) throw InvalidArgument("egps_deviation: give exactly one of lambda, c0");
  EgpsReport r;
  r.x = x;
  r.center = std::log(std::log(static_cast<double>(x)));
  r.log4x = log4(static_cast<double>(x));
  if (!(r.log4x > 0)) r.log4x = nan();
  r.c0 = c0;
  double lam = 0;
  if (c0) {
    if (!(r.log4x > 0))
      throw InvalidArgument("egps_deviation: log4 x <= 0 at x = " + std::to_string(x) +
                            " (needs x above about 3.8e6); pass lambda directly instead");
    lam = *c0 * std::sqrt(r.log4x);
  } else {
    lam = *lambda;
  }

  struct Acc {
    std::vector<double> bins = std::vector<double>(64, 0.0);
    double total = 0;
    double excluded = 0;
    u64 unfactored = 0;
  };
  const PrimeTable table = table_for(x);
  const Acc acc = reduce_factored(
      1, x + 1, table, exec, Acc{},
      [&](Acc& a, const Factorization& fac) {
        const double w = f(fac);
        if (fac.n() == 1) {
          a.excluded += w;
          return;
        }
        const OmegaCount oc = omega_u64(aliquot_s(fac), table);
        if (!oc.complete) {
          ++a.unfactored;
          return;
        }
        a.bins[static_cast<std::size_t>(oc.omega)] += w;
        a.total += w;
      },
      [](Acc& a, const Acc& b) {
        for (std::size_t k = 0; k < a.bins.size(); ++k) a.bins[k] += b.bins[k];
        a.total += b.total;
        a.excluded += b.excluded;
        a.unfactored += b.unfactored;
      },
      "aliquot omega");

  r.excluded = acc.excluded;
  r.unfactored = acc.unfactored;
  r.main = deviation_from_bins(acc.bins, acc.total, r.center, lam, x);
  for (const double g : grid) r.grid.push_back(deviation_from_bins(acc.bins, acc.total, r.center, g, x));
  return r;
}

SigmaDivReport count_p_divides_sigma(u64 x, u64 p, const MultiplicativeFunction& f, double eps,
                                     const Exec& exec) {
  if (x < 3) throw InvalidArgument("count_p_divides_sigma: x must be >= 3");
  if (!is_prime(p)) throw InvalidArgument("count_p_divides_sigma: p = " + std::to_string(p) + " is not prime");
  if (!(eps > 0 && eps < 1)) throw InvalidArgument("count_p_divides_sigma: eps must lie in (0, 1)");
  struct Acc {
    double sum = 0;
    u64 count = 0;
  };
  const Acc acc = reduce_factored(
      1, x + 1, table_for(x), exec, Acc{},
      [&](Acc& a, const Factorization& fac) {
        if (sigma(fac) % p != 0) return;
        a.sum += f(fac);
        ++a.count;
      },
      [](Acc& a, const Acc& b) {
        a.sum += b.sum;
        a.count += b.count;
      },
      "sigma divisibility");
  SigmaDivReport r;
  r.x = x;
  r.p = p;
  r.eps = eps;
  r.sum = acc.sum;
  r.count = acc.count;
  const double lx = std::log(static_cast<double>(x));
  const double pp = static_cast<double>(p);
  r.bound = (std::pow(pp, -(1 - eps) / 2) + std::log(lx) / pp) * static_cast<double>(x) / lx *
            std::exp(mertens_sum(f, x, PrimeSet::all()));
  r.ratio = r.sum / r.bound;
  return r;
}

SDivReport count_d_divides_s(u64 x, u64 y, u64 z, u64 d, const MultiplicativeFunction& f, const Exec& exec) {
  if (!(x >= y && y >= z && z >= 1)) throw InvalidArgument("count_d_divides_s: need x >= y >= z >= 1");
  if (d < 1) throw InvalidArgument("count_d_divides_s: d must be >= 1");
  if (d > z) throw InvalidArgument("count_d_divides_s: d = " + std::to_string(d) + " exceeds z = " + std::to_string(z));
  return reduce_factored(
      1, x + 1, table_for(x), exec, SDivReport{},
      [&](SDivReport& a, const Factorization& fac) {
        if (fac.empty()) return;
        const auto& top = fac[fac.size() - 1];
        if (top.p <= y || top.e >= 2) return;
        if (aliquot_s(fac) % d != 0) return;
        a.sum += f(fac);
        ++a.count;
      },
      [](SDivReport& a, const SDivReport& b) {
        a.sum += b.sum;
        a.count += b.count;
      },
      "aliquot divisibility");
}

OmegaGcdReport mean_omega_gcd_sigma(u64 x, const MultiplicativeFunction& f, const Exec& exec) {
  if (x < 3) throw InvalidArgument("mean_omega_gcd_sigma: x must be >= 3");
  OmegaGcdReport r;
  r.x = x;
  r.sum = reduce_factored(
      1, x + 1, table_for(x), exec, 0.0,
      [&](double& acc, const Factorization& fac) {
        const u64 s = sigma(fac);
        int w = 0;
        for (const auto& pp : fac.parts())
          if (s % pp.p == 0) ++w;
        if (w) acc += w * f(fac);
      },
      [](double& a, double b) { a += b; }, "omega gcd");
  const double l4 = log4(static_cast<double>(x));
  if (l4 > 0) {
    const double lx = std::log(static_cast<double>(x));
    r.bound = static_cast<double>(x) / lx * std::exp(mertens_sum(f, x, PrimeSet::all())) * l4;
    r.ratio = r.sum / r.bound;
  } else {
    r.bound = nan();
    r.ratio = nan();
  }
  return r;
}

}  // namespace hrsift
