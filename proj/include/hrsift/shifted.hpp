#pragma once

// Shifted-prime experiments: large shifted-prime divisors of up + v, the
// Carmichael lambda image along up + v, weighted deviations on ap + b and on
// quadratic-form values, joint omega at polynomial arguments, and prime
// factor counts in residue classes.

#include <optional>
#include <string>
#include <vector>

#include "hrsift/hr_lab.hpp"

namespace hrsift {

struct ShiftedDivisorReport {
  i64 a = 0;
  u64 u = 0;
  i64 v = 0;
  u64 x = 0;
  u64 y = 0;
  u64 count = 0;
  u64 pi_x = 0;
  double normalized = 0;   // count / pi(x)
  double bound_ratio = 0;  // normalized (log y)^eta0 sqrt(log log y)
};

/// #{p <= x : up + v has a divisor d > y with d + a prime}. A prime with
/// up + v = 0 is skipped; negative values use |up + v|. v = -au makes
/// up + v = u(p - a) and the count trivial; it is rejected unless
/// allow_trivial is set.
ShiftedDivisorReport shifted_divisor_count(i64 a, u64 u, i64 v, u64 x, u64 y, bool allow_trivial = false,
                                           const Exec& exec = {});

/// n is a value of the Carmichael function. Uses n in lambda(N) iff
/// lcm{lambda(q^e) : lambda(q^e) | n} = n; the table must reach sqrt(n) or
/// the factorization falls back to rho.
bool is_lambda_value(u64 n, const PrimeTable& table);
bool is_lambda_value(u64 n);

struct LambdaImageReport {
  u64 u = 0;
  i64 v = 0;
  u64 x = 0;
  u64 count = 0;
  u64 pi_x = 0;
  double normalized = 0;  // count / pi(x)
};

/// #{n = up + v <= x : p prime, n >= 1, n in lambda(N)}.
LambdaImageReport lambda_image_intersection(u64 u, i64 v, u64 x, const Exec& exec = {});

/// Weighted deviation of g(ap + b, E) from M_f(x, E) over primes p <= x,
/// each p weighted by f(ap + b).
DeviationReport weighted_sp_deviation(u64 a, i64 b, const MultiplicativeFunction& f, const PrimeSet& e, GKind g,
                                      u64 x, double lambda, const Exec& exec = {});

/// Deviation of g(n, E) from M(x, E) over A_F, or over B_F when `shift` is
/// given. Every p in E up to x must satisfy (D/p) = 1 and p >= p0.
DeviationReport qf_deviation(const QuadraticForm& form, std::optional<i64> shift, const PrimeSet& e, GKind g, u64 x,
                             double lambda, u64 p0 = 2, const Exec& exec = {});

/// Integer polynomial, coefficients from the leading term down.
struct Polynomial {
  std::vector<i64> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  i128 operator()(i128 x) const;
  i64 constant_term() const { return coeffs.back(); }
  u64 content() const;
  std::string to_string() const;
  /// "1,-1" -> X - 1.
  static Polynomial parse(const std::string& text);
};

/// rho(p) = #{n mod p : Q(n) = 0 mod p}, by scanning all residues.
u64 poly_roots_mod_p(const Polynomial& q, u64 p);

struct JointPolyReport {
  u64 count = 0;             // primes in (x - y, x] with omega(Q_j(p)) = k_j for all j
  u64 primes_in_window = 0;  // pi(x) - pi(x - y)
  u64 degenerate = 0;        // primes where some Q_j(p) = 0
  u64 diag_limit = 0;        // t range of the M_j diagnostic
  std::vector<double> M_diag;  // sup_t |sum_{p<=t} rho_j(p)/p - log log t|
};

/// Requires 1 <= r <= 3 polynomials of degree 1..3 with Q_j(0) != 0, no
/// rational roots, pairwise distinct and with no fixed prime factor. A value
/// that resists factoring raises ResourceError.
JointPolyReport joint_poly_omega(const std::vector<Polynomial>& polys, u64 x, u64 y, const std::vector<int>& ks,
                                 const Exec& exec = {});

/// #{n <= x : n = a mod d, g(n) = k}; requires gcd(a, d) = 1.
u64 ap_prime_factor_count(u64 x, u64 d, u64 a, GKind g, int k, const Exec& exec = {});

}  // namespace hrsift
