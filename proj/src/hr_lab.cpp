#include "hrsift/hr_lab.hpp"

#include <cmath>

#include "hrsift/error.hpp"

namespace hrsift {

std::string to_string(GKind g) { return g == GKind::omega ? "omega" : "bigomega"; }

GKind parse_gkind(const std::string& s) {
  if (s == "omega") return GKind::omega;
  if (s == "bigomega") return GKind::big_omega;
  throw InvalidArgument("unknown g '" + s + "' (expected omega or bigomega)");
}

MertensData mertens_data(const MultiplicativeFunction& f, const PrimeSet& e, const SieveCondition& cond, u64 x) {
  MertensData m;
  m.x = x;
  if (x < 2) return m;
  const PrimeTable table(x);
  m.M = mertens_sum(f, x, e, table);
  m.M_complement = mertens_sum(f, x, PrimeSet::complement(e), table);
  m.M_all = mertens_sum(f, x, PrimeSet::all(), table);
  m.M_nu = nu_sum(cond, x);
  return m;
}

int WeightedHistogram::max_k() const {
  for (int k = static_cast<int>(bins.size()) - 1; k >= 0; --k)
    if (bins[static_cast<std::size_t>(k)] != 0) return k;
  return -1;
}

namespace {

constexpr std::size_t kMaxBins = 64;

struct HistAcc {
  std::vector<double> bins = std::vector<double>(kMaxBins, 0.0);
  double total = 0;
  u64 count = 0;
};

void merge_hist(HistAcc& a, const HistAcc& b) {
  for (std::size_t k = 0; k < kMaxBins; ++k) a.bins[k] += b.bins[k];
  a.total += b.total;
  a.count += b.count;
}

PrimeTable table_for(u64 x) { return PrimeTable(std::max<u64>(isqrt(x), 2)); }

}  // namespace

WeightedHistogram weighted_histogram(const SiftedSet& set, const MultiplicativeFunction& f, GKind g,
                                     const PrimeSet& e, const Exec& exec, std::optional<u64> mertens_x) {
  if (set.x < 1) throw InvalidArgument("weighted_histogram: empty range");
  const PrimeTable table = table_for(set.x);
  HistAcc acc = reduce_factored(
      1, set.x + 1, table, exec, HistAcc{},
      [&](HistAcc& a, const Factorization& fac) {
        if (!set.members.test(fac.n())) return;
        const double w = f(fac);
        a.bins[static_cast<std::size_t>(g_value(g, fac, e))] += w;
        a.total += w;
        ++a.count;
      },
      merge_hist, "histogram");

  WeightedHistogram h;
  h.x = set.x;
  h.g_kind = g;
  h.E = e;
  h.f_label = f.spec().empty() ? f.name() : f.spec();
  h.set_label = set.label();
  h.bins = std::move(acc.bins);
  h.total = acc.total;
  h.count = acc.count;
  h.mertens = mertens_data(f, e, set.condition, mertens_x.value_or(set.x));
  const int top = h.max_k();
  h.bins.resize(static_cast<std::size_t>(std::max(top, 0) + 1));
  return h;
}

HrRatioReport hr_ratio(const WeightedHistogram& hist, double C, double beta) {
  if (!(C > 0)) throw InvalidArgument("hr_ratio: C must be positive");
  if (hist.x < 3) throw InvalidArgument("hr_ratio: x must be >= 3");
  const auto& m = hist.mertens;
  const double log_x = std::log(static_cast<double>(hist.x));
  const double log_base = std::log(static_cast<double>(hist.x)) - std::log(log_x);
  const double log_mc = std::log(m.M + C);
  const int kmax = static_cast<int>(std::floor(beta * m.M));

  HrRatioReport r;
  r.C = C;
  r.beta = beta;
  for (int k = 0; k <= kmax; ++k) {
    const double lb = log_base + k * log_mc - std::lgamma(k + 1.0) + m.M_complement - m.M_nu;
    const double bound = std::exp(lb);
    const double mass = hist.mass(static_cast<std::size_t>(k));
    r.rows.push_back({k, mass, bound, mass / bound});
  }
  if (hist.E.is_all()) {
    for (int k = 1; k <= kmax; ++k) {
      const double lb = log_base + (k - 1) * log_mc - std::lgamma(static_cast<double>(k)) - m.M_nu;
      const double bound = std::exp(lb);
      const double mass = hist.mass(static_cast<std::size_t>(k));
      r.rows_all_primes.push_back({k, mass, bound, mass / bound});
    }
  }
  return r;
}

double q_rate(double y) {
  if (y < 0) throw InvalidArgument("q_rate: y must be >= 0");
  if (y == 0) return 1.0;
  return y * std::log(y) - y + 1.0;
}

MgfReport mgf_sum(const SiftedSet& set, const MultiplicativeFunction& f, GKind g, const PrimeSet& e, double z,
                  const Exec& exec) {
  if (!(z > 0)) throw RangeError("mgf_sum: z must be positive");
  if (set.x < 3) throw InvalidArgument("mgf_sum: x must be >= 3");
  if (g == GKind::big_omega) {
    const PrimeTable small(1000);
    const double p0 = static_cast<double>(e.min_element(small).value_or(1000));
    if (z > std::max(2.0, p0))
      throw RangeError("mgf_sum: z = " + std::to_string(z) + " exceeds max(2, min E) for g = Omega");
  }
  const PrimeTable table = table_for(set.x);
  const double sum = reduce_factored(
      1, set.x + 1, table, exec, 0.0,
      [&](double& acc, const Factorization& fac) {
        if (!set.members.test(fac.n())) return;
        acc += f(fac) * std::pow(z, g_value(g, fac, e));
      },
      [](double& a, double b) { a += b; }, "mgf");
  const MertensData m = mertens_data(f, e, set.condition, set.x);
  const double log_x = std::log(static_cast<double>(set.x));
  const double bound = static_cast<double>(set.x) / log_x * std::exp((z - 1) * m.M + m.M_all - m.M_nu);
  return {z, sum, bound, sum / bound};
}

TailReport tail_masses(const WeightedHistogram& hist, double delta, double beta) {
  if (!(delta > 0 && delta < 1)) throw InvalidArgument("tail_masses: delta must lie in (0, 1)");
  if (delta > beta - 1) throw InvalidArgument("tail_masses: delta must be <= beta - 1");
  const auto& m = hist.mertens;
  const double lo_cut = (1 - delta) * m.M;
  const double hi_cut = (1 + delta) * m.M;
  TailReport r{delta, 0, 0, 0, 0, 0, 0};
  for (std::size_t k = 0; k < hist.bins.size(); ++k) {
    const double kk = static_cast<double>(k);
    if (kk <= lo_cut) r.low += hist.bins[k];
    if (kk >= hi_cut) r.high += hist.bins[k];
  }
  const double x = static_cast<double>(hist.x);
  const double base = x / std::log(x) * std::exp(m.M_all - m.M_nu);
  r.low_bound = base * std::exp(-q_rate(1 - delta) * m.M) / (delta * std::sqrt((1 - delta) * m.M));
  r.high_bound = base * std::exp(-q_rate(1 + delta) * m.M) / (delta * std::sqrt((1 + delta) * m.M));
  r.low_ratio = r.low / r.low_bound;
  r.high_ratio = r.high / r.high_bound;
  return r;
}

DeviationReport deviation_from_bins(const std::vector<double>& bins, double total, double center, double lambda,
                                    u64 x) {
  if (!(total > 0)) throw EmptySetError("deviation: the weighted set has zero total mass");
  if (!(lambda > 0)) throw InvalidArgument("deviation: lambda must be positive");
  DeviationReport r;
  r.x = x;
  r.lambda = lambda;
  r.M = center;
  r.total = total;
  r.degenerate = center <= 0;
  r.lambda_in_range = !r.degenerate && lambda <= std::sqrt(center) / 2;
  const double width = lambda * std::sqrt(std::max(center, 0.0));
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const double kk = static_cast<double>(k);
    if (r.degenerate) {
      r.mass_high += bins[k];
    } else if (kk <= center - width) {
      r.mass_low += bins[k];
    } else if (kk >= center + width) {
      r.mass_high += bins[k];
    }
  }
  r.normalized = (r.mass_low + r.mass_high) / total;
  r.gauss_ref = std::exp(-lambda * lambda / 2) / lambda;
  return r;
}

DeviationReport deviation(const WeightedHistogram& hist, double lambda) {
  return deviation_from_bins(hist.bins, hist.total, hist.mertens.M, lambda, hist.x);
}

double poisson_partial(double M, u64 k_lo, u64 k_hi) {
  if (!(M > 0)) throw InvalidArgument("poisson_partial: M must be positive");
  if (k_hi < k_lo) return 0;
  const double log_m = std::log(M);
  double sum = 0;
  for (u64 k = k_lo; k <= k_hi; ++k) {
    const double kk = static_cast<double>(k);
    const double term = std::exp(kk * log_m - M - std::lgamma(kk + 1));
    sum += term;
    if (kk > M && term < 1e-18 * sum) break;
    if (k == std::numeric_limits<u64>::max()) break;
  }
  return sum;
}

}  // namespace hrsift
