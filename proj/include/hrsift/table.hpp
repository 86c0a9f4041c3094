#pragma once

// Multiplication-table counts A(N), A(N; P_s) and the weighted sum over the
// "sifted multiplication table" S* = {n in S : n = ab, a, b <= sqrt(x)}.

#include <optional>
#include <string>

#include "hrsift/mult_func.hpp"
#include "hrsift/sift.hpp"

namespace hrsift {

constexpr u64 kDefaultProductSegment = u64{1} << 26;

/// Erdos-Tenenbaum-Ford constant 1 - (1 + log log 2) / log 2.
double eta0();

/// A(N) = #{ab : a, b <= N}, by marking products segment by segment.
u64 table_count(u64 N, const Exec& exec = {}, u64 segment_bits = kDefaultProductSegment);

/// A(N; P_s) = #{ab : a, b <= N, ab + s prime}.
u64 table_count_shifted(u64 N, i64 s, const Exec& exec = {}, u64 segment_bits = kDefaultProductSegment);

/// A (log N)^eta0 (log log N)^{3/2} / N^2, for N >= 3.
double ford_ratio(u64 N, u64 A);

struct TableReport {
  u64 N = 0;
  u64 A = 0;
  double ford_ratio = 0;
  std::optional<i64> s;
  std::optional<u64> A_shifted;
};

TableReport table_report(u64 N, std::optional<i64> s, const Exec& exec = {});

/// True when some divisor d of fac.n() satisfies lo <= d <= hi.
bool has_divisor_in(const Factorization& fac, u64 lo, u64 hi);

struct SiftedTableReport {
  u64 x = 0;
  double sum = 0;  // sum of f(n) over S*
  u64 count = 0;   // #S*
  double M = 0;    // M_f(x)
  double M_nu = 0;
  double R = 0;    // M_f(x) log 2 / log log x
  std::string regime;
  /// Bound for R <= 1/2 and for 1/2 < R < 1 (implied constants 1); both are
  /// emitted whenever defined, NaN otherwise.
  double bound_small_R = 0;
  double bound_mid_R = 0;
  /// sum / [x e^{(1 - Q(1/R)) M - M_nu} / ((log x) sqrt(M))].
  double shape_ratio = 0;
};

/// Requires set.x >= 16.
SiftedTableReport sifted_table_sum(const SiftedSet& set, const MultiplicativeFunction& f, const Exec& exec = {});

}  // namespace hrsift
