#include <doctest.h>

#include <cmath>
#include <random>

#include "hrsift/aliquot.hpp"
#include "hrsift/error.hpp"
#include "oracle.hpp"

using namespace hrsift;

TEST_CASE("aliquot sum examples") {
  const AliquotWindow w = aliquot_window(1, 30);
  CHECK(w.s(1) == 0);
  CHECK(w.s(2) == 1);
  CHECK(w.s(12) == 16);
  CHECK(w.s(6) == 6);
  CHECK(w.s(28) == 28);
  CHECK(w.s(25) == 6);
  CHECK_THROWS_AS(aliquot_window(5, 5), InvalidArgument);
  CHECK_THROWS_AS(aliquot_window(0, 5), InvalidArgument);
}

TEST_CASE("sieve and factorization paths agree") {
  const AliquotWindow a = aliquot_window(1, 100000);
  const AliquotWindow b = aliquot_window_factored(1, 100000);
  CHECK(a.s_values == b.s_values);
  for (u64 n = 1; n < 3000; ++n) CHECK(a.s(n) == oracle::sigma(n) - n);

  std::mt19937_64 rng(17);
  const u64 lo = 99000000, hi = 100000001;
  const AliquotWindow big = aliquot_window(lo, hi);
  for (int i = 0; i < 10000; ++i) {
    const u64 n = lo + rng() % (hi - lo);
    REQUIRE(big.s(n) == oracle::sigma(n) - n);
  }
  const AliquotWindow bigf = aliquot_window_factored(hi - 50000, hi);
  for (u64 n = hi - 50000; n < hi; ++n) CHECK(bigf.s(n) == big.s(n));
}

TEST_CASE("perfect numbers are fixed points") {
  const AliquotWindow w = aliquot_window(1, 10000);
  std::vector<u64> fixed;
  for (u64 n = 2; n < 10000; ++n)
    if (w.s(n) == n) fixed.push_back(n);
  CHECK(fixed == std::vector<u64>{6, 28, 496, 8128});
}

TEST_CASE("iterated logarithm") {
  CHECK(log4(1000) < 0);
  CHECK(log4(3e6) < 0);
  CHECK(std::isnan(log4(10)));
  CHECK(log4(4e6) > 0);
  CHECK(log4(1e7) == doctest::Approx(std::log(std::log(std::log(std::log(1e7))))));
}

TEST_CASE("p divides sigma(n)") {
  const auto one = builtin("one");
  const SigmaDivReport r = count_p_divides_sigma(100, 2, one);
  CHECK(r.count == 83);
  CHECK(r.sum == 83);
  CHECK(r.ratio == doctest::Approx(r.sum / r.bound));
  const auto f = builtin("z_omega", 0.5);
  const u64 x = 20000;
  for (u64 p = 2; p <= 50; ++p) {
    if (!oracle::is_prime(p)) continue;
    const SigmaDivReport s = count_p_divides_sigma(x, p, f);
    double sum = 0;
    u64 count = 0;
    for (u64 n = 1; n <= x; ++n)
      if (oracle::sigma(n) % p == 0) {
        sum += std::pow(0.5, static_cast<double>(oracle::factor(n).size()));
        ++count;
      }
    CHECK(s.count == count);
    CHECK(s.sum == doctest::Approx(sum).epsilon(1e-12));
  }
  CHECK_THROWS_AS(count_p_divides_sigma(100, 4, one), InvalidArgument);
  CHECK_THROWS_AS(count_p_divides_sigma(100, 3, one, 1.0), InvalidArgument);
}

TEST_CASE("d divides s(n)") {
  const auto one = builtin("one");
  const u64 x = 50000, y = 100, z = 10;
  const SDivReport r1 = count_d_divides_s(x, y, z, 1, one);
  const SDivReport r2 = count_d_divides_s(x, y, z, 2, one);
  CHECK(r1.count >= r2.count);
  for (u64 d : {1, 2, 3, 7, 10}) {
    u64 want = 0;
    for (u64 n = 2; n <= x; ++n) {
      const auto fac = oracle::factor(n);
      const auto& [P, e] = *fac.rbegin();
      if (P <= y || e != 1) continue;
      if ((oracle::sigma(n) - n) % d == 0) ++want;
    }
    const SDivReport r = count_d_divides_s(x, y, z, d, one);
    CHECK(r.count == want);
    CHECK(r.sum == static_cast<double>(want));
  }
  CHECK_THROWS_AS(count_d_divides_s(x, y, z, 11, one), InvalidArgument);
  CHECK_THROWS_AS(count_d_divides_s(x, 5, z, 1, one), InvalidArgument);
}

TEST_CASE("omega of gcd(sigma(n), n)") {
  const auto one = builtin("one");
  const u64 x = 10000;
  const OmegaGcdReport r = mean_omega_gcd_sigma(x, one);
  double want = 0;
  for (u64 n = 1; n <= x; ++n) {
    const u64 s = oracle::sigma(n);
    for (const auto& [p, e] : oracle::factor(n)) want += s % p == 0;
  }
  CHECK(r.sum == want);
  CHECK(std::isnan(r.bound));
  CHECK(mean_omega_gcd_sigma(6, one).sum - mean_omega_gcd_sigma(5, one).sum == 2);
}

TEST_CASE("deviation of omega(s(n))") {
  const auto one = builtin("one");
  const EgpsReport r = egps_deviation(100000, one, 1.0, std::nullopt);
  CHECK(r.excluded == 1);
  CHECK(r.unfactored == 0);
  CHECK(r.center == doctest::Approx(std::log(std::log(1e5))));
  CHECK(std::isnan(r.log4x));
  REQUIRE(r.grid.size() == 7);
  for (std::size_t i = 1; i < r.grid.size(); ++i) CHECK(r.grid[i].normalized <= r.grid[i - 1].normalized);
  CHECK(r.main.lambda == 1.0);
  CHECK(r.main.total == 99999);

  // Direct count at a small x.
  const u64 x = 2000;
  const EgpsReport small = egps_deviation(x, one, 1.0, std::nullopt);
  const double c = std::log(std::log(static_cast<double>(x)));
  double dev = 0;
  for (u64 n = 2; n <= x; ++n) {
    const double w = static_cast<double>(oracle::factor(oracle::sigma(n) - n).size());
    if (std::abs(w - c) >= std::sqrt(c)) dev += 1;
  }
  CHECK(small.main.mass_low + small.main.mass_high == dev);

  CHECK_THROWS_AS(egps_deviation(100000, one, std::nullopt, 1.0), InvalidArgument);
  CHECK_THROWS_AS(egps_deviation(100000, one, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(egps_deviation(100000, one, std::nullopt, std::nullopt), InvalidArgument);
  CHECK_THROWS_AS(egps_deviation(10, one, 1.0, std::nullopt), InvalidArgument);
}

TEST_CASE("egps output is thread independent") {
  const auto f = builtin("z_omega", 1.2);
  Exec a;
  a.threads = 1;
  a.window = 3000;
  Exec b;
  b.threads = 4;
  b.window = 3000;
  const EgpsReport r1 = egps_deviation(50000, f, 2.0, std::nullopt, a);
  const EgpsReport r2 = egps_deviation(50000, f, 2.0, std::nullopt, b);
  CHECK(r1.main.mass_low == r2.main.mass_low);
  CHECK(r1.main.mass_high == r2.main.mass_high);
  CHECK(r1.main.total == r2.main.total);
}
