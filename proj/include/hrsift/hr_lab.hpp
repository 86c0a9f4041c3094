#pragma once

// Weighted distribution of g(n, E) in {omega, Omega} over a sifted set, and
// the bound-shape diagnostics built on it.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hrsift/mult_func.hpp"
#include "hrsift/sift.hpp"

namespace hrsift {

enum class GKind { omega, big_omega };

std::string to_string(GKind g);
GKind parse_gkind(const std::string& s);

inline int g_value(GKind g, const Factorization& fac, const PrimeSet& e) {
  return g == GKind::omega ? omega_in(fac, e) : big_omega_in(fac, e);
}

/// Mertens-type sums attached to a histogram.
struct MertensData {
  u64 x = 0;
  double M = 0;             // M_f(x, E)
  double M_complement = 0;  // M_f(x, E^c)
  double M_all = 0;         // M_f(x)
  double M_nu = 0;          // M_nu(x) of the set's sieve condition
};

MertensData mertens_data(const MultiplicativeFunction& f, const PrimeSet& e, const SieveCondition& cond, u64 x);

struct WeightedHistogram {
  u64 x = 0;
  GKind g_kind = GKind::omega;
  PrimeSet E;
  std::string f_label;
  std::string set_label;
  std::vector<double> bins;  // bins[k] = sum of f(n) over members with g(n, E) = k
  double total = 0;
  u64 count = 0;
  MertensData mertens;

  double mass(std::size_t k) const { return k < bins.size() ? bins[k] : 0.0; }
  /// Largest k with a nonzero bin, or -1 when empty.
  int max_k() const;
};

/// Bins over the members of `set`. The Mertens sums use `mertens_x`
/// (default set.x), which differs from set.x for value sets like ap + b.
WeightedHistogram weighted_histogram(const SiftedSet& set, const MultiplicativeFunction& f, GKind g,
                                     const PrimeSet& e, const Exec& exec = {},
                                     std::optional<u64> mertens_x = std::nullopt);

struct HrRow {
  int k;
  double mass;
  double bound;
  double ratio;
};

struct HrRatioReport {
  double C = 0;
  double beta = 0;
  /// mass / [x (M+C)^k / (k! log x) e^{M_f(x,E^c) - M_nu}] for 0 <= k <= beta*M.
  std::vector<HrRow> rows;
  /// E = all primes only: mass / [x (M+C)^{k-1} / ((k-1)! log x) e^{-M_nu}]
  /// for 1 <= k <= beta*M.
  std::vector<HrRow> rows_all_primes;
};

HrRatioReport hr_ratio(const WeightedHistogram& hist, double C, double beta = 2.0);

/// Q(y) = y log y - y + 1, with Q(0) = 1.
double q_rate(double y);

struct MgfReport {
  double z;
  double sum;    // sum over members of f(n) z^{g(n,E)}
  double bound;  // (x / log x) e^{(z-1) M + M_f(x) - M_nu}
  double ratio;
};

/// Direct per-n evaluation, independent of the histogram. For g = Omega, z
/// must not exceed max(2, min E).
MgfReport mgf_sum(const SiftedSet& set, const MultiplicativeFunction& f, GKind g, const PrimeSet& e, double z,
                  const Exec& exec = {});

struct TailReport {
  double delta;
  double low;   // mass with g <= (1 - delta) M
  double high;  // mass with g >= (1 + delta) M
  double low_bound;
  double high_bound;
  double low_ratio;
  double high_ratio;
};

/// Requires 0 < delta < 1 and delta <= beta - 1.
TailReport tail_masses(const WeightedHistogram& hist, double delta, double beta = 2.0);

struct DeviationReport {
  u64 x = 0;
  double lambda = 0;
  double M = 0;
  double mass_low = 0;   // mass with g <= M - lambda sqrt(M)
  double mass_high = 0;  // mass with g >= M + lambda sqrt(M)
  double total = 0;
  double normalized = 0;  // (mass_low + mass_high) / total
  double gauss_ref = 0;   // e^{-lambda^2/2} / lambda
  bool lambda_in_range = true;  // 0 < lambda <= sqrt(M)/2
  bool degenerate = false;      // M == 0: every member deviates
};

/// Mass of |k - center| >= lambda sqrt(center) from integer-indexed bins.
DeviationReport deviation_from_bins(const std::vector<double>& bins, double total, double center, double lambda,
                                    u64 x);
DeviationReport deviation(const WeightedHistogram& hist, double lambda);

/// sum_{k_lo <= k <= k_hi} e^{-M} M^k / k!, accumulated in log space.
double poisson_partial(double M, u64 k_lo, u64 k_hi = std::numeric_limits<u64>::max());

}  // namespace hrsift
