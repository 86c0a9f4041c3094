#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hrsift/arith.hpp"

namespace hrsift {

/// A decidable set of primes E. Cheap to copy; nodes are immutable and shared.
///
/// Spec strings:
///   all | pmin:P0 | mod:M:r1,r2 | kron:D:+1 | list:FILE | list:p1,p2 |
///   interval:A:B | not:SPEC | and:SPEC;SPEC
/// `list:` followed only by digits and commas is an inline list, otherwise a
/// file with one prime per line.
class PrimeSet {
 public:
  enum class Kind { all, min_threshold, residue, kronecker, explicit_list, interval, complement, intersection };

  PrimeSet();  // all primes

  static PrimeSet all();
  static PrimeSet none();
  static PrimeSet min_threshold(u64 p0);
  static PrimeSet residue(u64 modulus, std::vector<u64> allowed);
  static PrimeSet kronecker(i64 discriminant, int sign);
  static PrimeSet explicit_list(std::vector<u64> primes, std::string source = {});
  static PrimeSet interval(u64 a, u64 b);
  static PrimeSet complement(const PrimeSet& e);
  static PrimeSet intersection(std::vector<PrimeSet> parts);

  static PrimeSet parse(const std::string& spec);
  std::string to_spec() const;

  Kind kind() const;
  bool contains(u64 p) const;
  bool is_all() const { return kind() == Kind::all; }

  /// Smallest member among the table primes, if any.
  std::optional<u64> min_element(const PrimeTable& table) const;

 private:
  struct Node;
  explicit PrimeSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// omega(n, E): distinct primes of n lying in E.
int omega_in(const Factorization& fac, const PrimeSet& e);
/// Omega(n, E): prime factors of n in E counted with multiplicity.
int big_omega_in(const Factorization& fac, const PrimeSet& e);

}  // namespace hrsift
