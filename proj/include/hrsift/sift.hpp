#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hrsift/arith.hpp"
#include "hrsift/parallel.hpp"

namespace hrsift {

/// Fixed-size bit array indexed from 0.
class Bitmap {
 public:
  Bitmap() = default;
  explicit Bitmap(u64 size, bool value = false);

  u64 size() const { return size_; }
  bool test(u64 i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(u64 i) { words_[i >> 6] |= u64{1} << (i & 63); }
  void reset(u64 i) { words_[i >> 6] &= ~(u64{1} << (i & 63)); }
  /// Safe against concurrent set_atomic calls on the same word.
  void set_atomic(u64 i);
  u64 count() const;
  std::vector<u64>& words() { return words_; }
  const std::vector<u64>& words() const { return words_; }

 private:
  u64 size_ = 0;
  std::vector<u64> words_;
};

/// Excluded reduced residues E_p for finitely many primes p.
class SieveCondition {
 public:
  SieveCondition() = default;

  /// Adds E_p. Residues are reduced mod p; a residue = 0 mod p or a
  /// non-prime p raises InvalidCondition.
  void exclude(u64 p, const std::vector<i64>& residues);

  const std::map<u64, std::vector<u64>>& exclusions() const { return exclusions_; }
  bool empty() const { return exclusions_.empty(); }
  /// nu(p) = #E_p.
  std::size_t nu(u64 p) const;
  /// v = max_p nu(p).
  std::size_t v() const;
  /// Largest p with nonempty E_p (0 for the empty condition).
  u64 support_bound() const;
  /// n mod p lies outside E_p for every p in the support.
  bool admits(u64 n) const;

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

 private:
  std::map<u64, std::vector<u64>> exclusions_;
  std::string label_ = "none";
};

/// Subset of [1, x] held as a bitmap indexed by n itself.
struct SiftedSet {
  u64 x = 0;
  Bitmap members;
  SieveCondition condition;
  /// Set when the members are an exact target set rather than sieve survivors.
  std::optional<std::string> exact_label;

  bool contains(u64 n) const { return n >= 1 && n <= x && members.test(n); }
  u64 count() const { return members.count(); }
  std::vector<u64> to_vector() const;
  /// Spec string that reproduces the set.
  std::string label() const { return exact_label ? *exact_label : condition.label(); }
};

struct QuadraticForm {
  i64 a, b, c;
  i64 discriminant() const { return b * b - 4 * a * c; }
  i128 operator()(i64 x, i64 y) const {
    return static_cast<i128>(a) * x * x + static_cast<i128>(b) * x * y + static_cast<i128>(c) * y * y;
  }
  /// Throws InvalidArgument unless primitive and positive definite.
  void validate() const;
};

/// Survivors n in [1, x] of the sieve condition.
SiftedSet sift(u64 x, const SieveCondition& cond, const Exec& exec = {});

/// M_nu(x) = sum over p <= x of nu(p)/p.
double nu_sum(const SieveCondition& cond, u64 x);

/// h2(a) = prod_{q | a} (1 + nu(q)/q).
double h2_weight(const SieveCondition& cond, const Factorization& fac);

/// E_q = {b mod q} for primes q <= z with q not dividing ab: a sieve whose
/// survivors contain every ap + b with p prime and ap + b > az + b.
SieveCondition preset_shifted_prime_superset(u64 a, i64 b, u64 x, u64 z);

/// {ap + b : p prime, 1 <= ap + b <= x}, labelled "sp:a,b".
SiftedSet exact_shifted_primes(u64 a, i64 b, u64 x);

/// A_F = F(Z^2) cap [1, x], labelled "qf:a,b,c".
SiftedSet exact_qf_values(const QuadraticForm& form, u64 x, const Exec& exec = {});
/// B_F = {n in A_F : n + k prime}, labelled "qf:a,b,c,shift=k".
SiftedSet exact_qf_shifted(const QuadraticForm& form, i64 k, u64 x, const Exec& exec = {});

/// "none", "avoid:b/modp<=z[,coprime=a]", "explicit:FILE" (lines "p:r1,r2").
SieveCondition parse_condition(const std::string& spec, u64 x);

/// A condition spec (sifted) or an exact set "sp:a,b", "qf:a,b,c[,shift=k]".
SiftedSet parse_set(const std::string& spec, u64 x, const Exec& exec = {});

}  // namespace hrsift
