#include <doctest.h>

#include <cmath>

#include "hrsift/error.hpp"
#include "hrsift/hr_lab.hpp"

using namespace hrsift;

namespace {

Exec single() {
  Exec e;
  e.threads = 1;
  return e;
}

Exec many() {
  Exec e;
  e.threads = 4;
  e.window = 1000;
  return e;
}

}  // namespace

TEST_CASE("histogram example at x = 10") {
  const SiftedSet all = sift(10, SieveCondition{});
  const WeightedHistogram h = weighted_histogram(all, builtin("one"), GKind::omega, PrimeSet::all());
  CHECK(h.bins == std::vector<double>{1, 7, 2});
  CHECK(h.total == 10);
  CHECK(h.count == 10);
  CHECK(h.max_k() == 2);
  const WeightedHistogram hb = weighted_histogram(all, builtin("one"), GKind::big_omega, PrimeSet::all());
  CHECK(hb.bins == std::vector<double>{1, 4, 4, 1});
}

TEST_CASE("g kind names") {
  CHECK(parse_gkind("omega") == GKind::omega);
  CHECK(parse_gkind("bigomega") == GKind::big_omega);
  CHECK(to_string(GKind::big_omega) == "bigomega");
  CHECK_THROWS_AS(parse_gkind("Omega2"), InvalidArgument);
}

TEST_CASE("histogram is independent of threads and windows") {
  const u64 x = 200000;
  SieveCondition c;
  c.exclude(3, {2});
  c.exclude(7, {1, 6});
  const SiftedSet s = sift(x, c);
  const auto f = builtin("z_omega", 1.5);
  const PrimeSet e = PrimeSet::residue(4, {1});
  const WeightedHistogram a = weighted_histogram(s, f, GKind::omega, e, single());
  const WeightedHistogram b = weighted_histogram(s, f, GKind::omega, e, many());
  CHECK(a.bins == b.bins);
  CHECK(a.total == b.total);
  CHECK(a.count == b.count);

  // Plain scan with table factorization.
  const PrimeTable t(isqrt(x) + 1);
  std::vector<double> bins(a.bins.size(), 0.0);
  u64 count = 0;
  for (u64 n = 1; n <= x; ++n) {
    if (!c.admits(n)) continue;
    const Factorization fac = factorize(n, t);
    bins[static_cast<std::size_t>(omega_in(fac, e))] += f(fac);
    ++count;
  }
  CHECK(count == a.count);
  for (std::size_t k = 0; k < bins.size(); ++k) CHECK(bins[k] == doctest::Approx(a.bins[k]).epsilon(1e-12));
}

TEST_CASE("mertens data of a histogram") {
  const SiftedSet s = sift(1000, SieveCondition{});
  const WeightedHistogram h = weighted_histogram(s, builtin("one"), GKind::omega, PrimeSet::residue(4, {1}));
  CHECK(h.mertens.M + h.mertens.M_complement == doctest::Approx(h.mertens.M_all));
  CHECK(h.mertens.M_nu == 0);
  const WeightedHistogram h2 =
      weighted_histogram(s, builtin("one"), GKind::omega, PrimeSet::all(), {}, std::optional<u64>(10));
  CHECK(h2.mertens.x == 10);
  CHECK(h2.mertens.M == doctest::Approx(1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7));
}

TEST_CASE("generating function agrees with the histogram") {
  const SiftedSet s = sift(50000, SieveCondition{});
  const auto f = builtin("mu_sq");
  for (const GKind g : {GKind::omega, GKind::big_omega}) {
    const WeightedHistogram h = weighted_histogram(s, f, g, PrimeSet::all());
    for (const double z : {0.5, 1.0, 1.5, 2.0}) {
      double from_bins = 0;
      for (std::size_t k = 0; k < h.bins.size(); ++k) from_bins += h.bins[k] * std::pow(z, static_cast<double>(k));
      CHECK(mgf_sum(s, f, g, PrimeSet::all(), z).sum == doctest::Approx(from_bins).epsilon(1e-10));
    }
  }
  CHECK(mgf_sum(s, builtin("one"), GKind::omega, PrimeSet::all(), 1.0).sum == 50000);
}

TEST_CASE("generating function of Omega at z = 2") {
  const u64 x = 100000;
  const SiftedSet s = sift(x, SieveCondition{});
  const double sum = mgf_sum(s, builtin("one"), GKind::big_omega, PrimeSet::all(), 2.0).sum;
  const double lx = std::log(static_cast<double>(x));
  const double r = sum / (static_cast<double>(x) * lx * lx);
  CHECK(r >= 0.05);
  CHECK(r <= 5);
  CHECK_THROWS_AS(mgf_sum(s, builtin("one"), GKind::big_omega, PrimeSet::all(), 2.5), RangeError);
  CHECK_NOTHROW(mgf_sum(s, builtin("one"), GKind::big_omega, PrimeSet::min_threshold(5), 4.0));
  CHECK_THROWS_AS(mgf_sum(s, builtin("one"), GKind::omega, PrimeSet::all(), 0.0), RangeError);
}

TEST_CASE("tail masses match a direct scan") {
  const u64 x = 10000;
  const SiftedSet s = sift(x, SieveCondition{});
  const auto f = builtin("one");
  const WeightedHistogram h = weighted_histogram(s, f, GKind::omega, PrimeSet::all());
  const TailReport r = tail_masses(h, 0.5);
  const PrimeTable t(100);
  double low = 0, high = 0;
  for (u64 n = 1; n <= x; ++n) {
    const double k = omega(factorize(n, t));
    if (k <= 0.5 * h.mertens.M) low += 1;
    if (k >= 1.5 * h.mertens.M) high += 1;
  }
  CHECK(r.low == low);
  CHECK(r.high == high);
  CHECK(r.low_bound > 0);
  CHECK(r.high_ratio == doctest::Approx(r.high / r.high_bound));
  CHECK_THROWS_AS(tail_masses(h, 1.0), InvalidArgument);
  CHECK_THROWS_AS(tail_masses(h, 0.5, 1.2), InvalidArgument);
}

TEST_CASE("deviation mass shrinks as lambda grows") {
  const SiftedSet s = sift(100000, SieveCondition{});
  const WeightedHistogram h = weighted_histogram(s, builtin("one"), GKind::omega, PrimeSet::all());
  double prev = 2;
  for (const double lambda : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
    const DeviationReport d = deviation(h, lambda);
    CHECK(d.normalized <= prev);
    CHECK(d.normalized >= 0);
    CHECK(d.mass_low + d.mass_high <= d.total);
    CHECK(d.gauss_ref == doctest::Approx(std::exp(-lambda * lambda / 2) / lambda));
    prev = d.normalized;
  }
  CHECK(deviation(h, 0.5).lambda_in_range);
  CHECK_FALSE(deviation(h, 5).lambda_in_range);
  CHECK_THROWS_AS(deviation(h, 0), InvalidArgument);
}

TEST_CASE("deviation from bins edge cases") {
  const DeviationReport d = deviation_from_bins({1, 2, 3}, 6, 0, 1, 10);
  CHECK(d.degenerate);
  CHECK(d.normalized == 1);
  CHECK_THROWS_AS(deviation_from_bins({0, 0}, 0, 1, 1, 10), EmptySetError);
  // center 4, width 2: k <= 2 low, k >= 6 high.
  const DeviationReport e = deviation_from_bins({1, 1, 1, 1, 1, 1, 1}, 7, 4, 1, 10);
  CHECK(e.mass_low == 3);
  CHECK(e.mass_high == 1);
}

TEST_CASE("rate function values") {
  CHECK(q_rate(0) == 1);
  CHECK(q_rate(1) == 0);
  CHECK(q_rate(2) == doctest::Approx(2 * std::log(2.0) - 1));
  CHECK(q_rate(0.5) == doctest::Approx(0.5 * std::log(0.5) + 0.5));
  CHECK_THROWS_AS(q_rate(-1), InvalidArgument);
}

TEST_CASE("poisson partial sums") {
  CHECK(poisson_partial(3, 0, 3) == doctest::Approx(13 * std::exp(-3.0)));
  CHECK(poisson_partial(2, 0) == doctest::Approx(1.0));
  CHECK(poisson_partial(5, 0, 4) + poisson_partial(5, 5) == doctest::Approx(1.0));
  CHECK(poisson_partial(1, 3, 2) == 0);
  CHECK_THROWS_AS(poisson_partial(0, 0, 1), InvalidArgument);
}

TEST_CASE("ratios against the upper-bound shape") {
  const SiftedSet s = sift(100000, SieveCondition{});
  const WeightedHistogram h = weighted_histogram(s, builtin("one"), GKind::omega, PrimeSet::all());
  const HrRatioReport a = hr_ratio(h, 1.0);
  const HrRatioReport b = hr_ratio(h, 2.0);
  REQUIRE(a.rows.size() == b.rows.size());
  REQUIRE(!a.rows.empty());
  for (std::size_t i = 1; i < a.rows.size(); ++i) CHECK(b.rows[i].ratio < a.rows[i].ratio);
  CHECK(a.rows_all_primes.size() + 1 == a.rows.size());
  CHECK(a.rows_all_primes.front().k == 1);
  const HrRatioReport c = hr_ratio(weighted_histogram(s, builtin("one"), GKind::omega, PrimeSet::residue(4, {1})), 1.0);
  CHECK(c.rows_all_primes.empty());
  CHECK_THROWS_AS(hr_ratio(h, 0), InvalidArgument);
}
