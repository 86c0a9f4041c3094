#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hrsift/arith.hpp"
#include "hrsift/parallel.hpp"
#include "hrsift/prime_set.hpp"

namespace hrsift {

/// A nonnegative multiplicative weight given by its values at prime powers,
/// together with the declared constant A1 of the bound f(n) <= A1^Omega(n).
class MultiplicativeFunction {
 public:
  using Rule = std::function<double(u64 p, u32 l)>;

  MultiplicativeFunction(std::string name, Rule rule, double a1, std::string growth_note, std::string spec = {},
                         bool integer_valued = false);

  const std::string& name() const { return name_; }
  /// CLI spec string that parses back to this function (empty for ad-hoc rules).
  const std::string& spec() const { return spec_; }
  double a1() const { return a1_; }
  const std::string& growth_note() const { return growth_note_; }
  bool integer_valued() const { return integer_valued_; }

  /// f(p^l); throws InvalidFunction on a negative value.
  double at(u64 p, u32 l) const;
  double operator()(const Factorization& fac) const;

 private:
  std::string name_;
  Rule rule_;
  double a1_;
  std::string growth_note_;
  std::string spec_;
  bool integer_valued_;
};

/// prod f(p^e) over the parts; 1 at n = 1.
double eval_mf(const MultiplicativeFunction& f, const Factorization& fac);

/// Registered weights: one, mu_sq, z_omega(z), z_bigomega(z), tau_k(k),
/// r_over_4, sum2sq_indicator, phi_over_n, n_over_phi. `param` is z or k.
MultiplicativeFunction builtin(const std::string& name, double param = 0);

/// "one", "musq", "zomega:Z", "zbigomega:Z", "tauk:K", "r4", "s2s",
/// "phioverN", "Noverphi".
MultiplicativeFunction parse_function(const std::string& spec);

/// M_f(x, E) = sum over primes p <= x in E of f(p)/p, summed in increasing p.
double mertens_sum(const MultiplicativeFunction& f, u64 x, const PrimeSet& e, const PrimeTable& table);
double mertens_sum(const MultiplicativeFunction& f, u64 x, const PrimeSet& e);

/// sup over t in [2, x] of |sum_{p<=t} 1/p - log log t|, taken over both
/// one-sided limits at every prime.
double hr_constant(u64 x, const PrimeTable& table);
double hr_constant(u64 x);

/// (sum_{n<=x} f(n)/n) / exp(M_f(x)).
double harmonic_mean_ratio(const MultiplicativeFunction& f, u64 x, const Exec& exec = {});

struct GrowthSpot {
  double epsilon;
  double max_ratio;  // max f(n)/n^epsilon
  u64 witness;
};

struct ClassReport {
  bool passed;         // worst_ratio <= 1
  double worst_ratio;  // max f(n)/A1^Omega(n)
  u64 witness;         // smallest n attaining worst_ratio
  std::vector<GrowthSpot> growth;
};

/// Checks f(n) <= A1^Omega(n) for all n <= x and spot-checks sub-polynomial
/// growth at epsilon = 0.1 and 0.01.
ClassReport class_check(const MultiplicativeFunction& f, u64 x, double a1, const Exec& exec = {});

/// F(d) = prod_{p | d} (sum_{l>=0} f(p^l)/p^l)^{-1}. Requires A1 < p for every
/// p | d so the local series converges geometrically.
double coprimality_factor(const MultiplicativeFunction& f, u64 d);

}  // namespace hrsift
