#pragma once

// Aliquot sums s(n) = sigma(n) - n: window sieve, the omega(s(n)) deviation
// statistic and the divisibility counts around sigma(n) and s(n).

#include <optional>
#include <vector>

#include "hrsift/hr_lab.hpp"

namespace hrsift {

struct AliquotWindow {
  u64 lo = 0;
  u64 hi = 0;
  std::vector<u64> s_values;  // s(n) for n in [lo, hi), s(1) = 0

  u64 s(u64 n) const { return s_values.at(n - lo); }
};

/// Divisor-sum sieve: each d <= sqrt(hi - 1) adds d + n/d to its multiples
/// n >= d^2. Requires 1 <= lo < hi.
AliquotWindow aliquot_window(u64 lo, u64 hi);
/// Same window from per-n factorizations.
AliquotWindow aliquot_window_factored(u64 lo, u64 hi);

/// log log log log x, or NaN where an inner logarithm is not positive.
double log4(double x);

struct EgpsReport {
  u64 x = 0;
  double center = 0;       // log log x
  double log4x = 0;        // NaN below the c0 threshold
  std::optional<double> c0;
  DeviationReport main;    // at the requested lambda (or c0 sqrt(log4 x))
  std::vector<DeviationReport> grid;
  double excluded = 0;     // weight of n = 1, where s(n) = 0
  u64 unfactored = 0;      // n whose s(n) resisted factoring; left out
};

/// Weighted mass of |omega(s(n)) - log log x| >= lambda sqrt(log log x) over
/// 2 <= n <= x. Exactly one of lambda, c0 must be given; c0 needs
/// log4 x > 0, i.e. x above about 3.8e6.
EgpsReport egps_deviation(u64 x, const MultiplicativeFunction& f, std::optional<double> lambda,
                          std::optional<double> c0, const Exec& exec = {},
                          const std::vector<double>& grid = {0.25, 0.5, 1, 1.5, 2, 2.5, 3});

struct SigmaDivReport {
  u64 x = 0;
  u64 p = 0;
  double eps = 0;
  double sum = 0;  // sum of f(n) over n <= x with p | sigma(n)
  u64 count = 0;
  double bound = 0;  // (p^{-(1-eps)/2} + log log x / p) (x / log x) e^{M_f(x)}
  double ratio = 0;
};

SigmaDivReport count_p_divides_sigma(u64 x, u64 p, const MultiplicativeFunction& f, double eps = 0.1,
                                     const Exec& exec = {});

struct SDivReport {
  double sum = 0;
  u64 count = 0;
};

/// Sum of f(n) over n <= x with d | s(n), P+(n) > y and P+(n)^2 not dividing
/// n. Requires x >= y >= z >= 1 and 1 <= d <= z.
SDivReport count_d_divides_s(u64 x, u64 y, u64 z, u64 d, const MultiplicativeFunction& f, const Exec& exec = {});

struct OmegaGcdReport {
  u64 x = 0;
  double sum = 0;    // sum of f(n) omega(gcd(sigma(n), n))
  double bound = 0;  // (x / log x) e^{M_f(x)} log4 x, NaN where log4 x <= 0
  double ratio = 0;
};

OmegaGcdReport mean_omega_gcd_sigma(u64 x, const MultiplicativeFunction& f, const Exec& exec = {});

}  // namespace hrsift
