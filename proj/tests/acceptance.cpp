// Acceptance checks: one PASS/FAIL line per criterion.
// Usage: acceptance [path-to-hrsift-binary]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <numeric>
#include <unordered_set>
#include <vector>

#include <sys/wait.h>

#include "hrsift/aliquot.hpp"
#include "hrsift/cli.hpp"
#include "hrsift/hr_lab.hpp"
#include "hrsift/shifted.hpp"
#include "hrsift/table.hpp"
#include "oracle.hpp"

using namespace hrsift;

namespace {

std::string g_binary;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int report(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << name << " (" << sec << " s)"
            << o.detail.str() << std::endl;
  return o.pass ? 0 : 1;
}

u64 lambda_from(const std::map<u64, unsigned>& fac) {
  u64 l = 1;
  for (const auto& [p, e] : fac) {
    u64 pk = 1;
    for (unsigned i = 1; i < e; ++i) pk *= p;
    u64 term = pk * (p - 1);
    if (p == 2 && e >= 3) term /= 2;
    l = std::lcm(l, term);
  }
  return l;
}

// Largest element order, each order found by stripping prime factors of phi(n).
u64 max_order(u64 n) {
  if (n <= 2) return 1;
  const u64 ph = oracle::phi(n);
  const auto qs = oracle::factor(ph);
  u64 best = 1;
  for (u64 a = 2; a < n; ++a) {
    if (std::gcd(a, n) != 1) continue;
    u64 k = ph;
    for (const auto& [q, e] : qs)
      while (k % q == 0 && powmod(a, k / q, n) == 1) k /= q;
    best = std::max(best, k);
  }
  return best;
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

void criterion1(Outcome& o) {
  const u64 N = 100000;
  const PrimeTable t(isqrt(N) + 1);
  u64 bad = 0;
  for (u64 n = 1; n <= N; ++n) {
    const Factorization f = factorize(n, t);
    const auto ref = oracle::factor(n);
    std::map<u64, unsigned> got;
    for (const auto& pp : f.parts()) got[pp.p] = pp.e;
    int big = 0, m = 1;
    for (const auto& [p, e] : ref) {
      big += static_cast<int>(e);
      m = e > 1 ? 0 : -m;
    }
    const u64 s = oracle::sigma(n);
    const bool ok = got == ref && omega(f) == static_cast<int>(ref.size()) && big_omega(f) == big &&
                    sigma(f) == s && aliquot_s(f) == s - n && phi(f) == oracle::phi(n) &&
                    carmichael_lambda(f) == lambda_from(ref) && mu(f) == m;
    bad += !ok;
  }
  o.detail << " mismatches=" << bad;
  o.require(bad == 0, "oracle mismatch");
}

void criterion2(Outcome& o) {
  const PrimeTable t(101);
  u64 bad = 0;
  for (u64 n = 1; n <= 10000; ++n) bad += carmichael_lambda(factorize(n, t)) != max_order(n);
  o.detail << " mismatches=" << bad;
  o.require(bad == 0, "lambda differs from the largest order");
}

void criterion3(Outcome& o) {
  std::vector<double> maxima;
  for (const u64 x : {100000ull, 1000000ull, 10000000ull}) {
    const WeightedHistogram h = weighted_histogram(sift(x, SieveCondition{}), builtin("one"), GKind::omega,
                                                   PrimeSet::all());
    const HrRatioReport r = hr_ratio(h, hr_constant(x));
    const double kmax = 2 * std::log(std::log(static_cast<double>(x)));
    double best = 0;
    for (const HrRow& row : r.rows)
      if (row.k >= 1 && row.k <= kmax) best = std::max(best, row.ratio);
    maxima.push_back(best);
    o.detail << " x=" << x << ":" << best;
  }
  o.require(std::isfinite(spread(maxima)) && spread(maxima) <= 3, "max ratio varies by more than x3");
}

void criterion4(Outcome& o) {
  std::unordered_set<u64> products;
  u64 bad = 0;
  for (u64 N = 1; N <= 300; ++N) {
    for (u64 b = 1; b <= N; ++b) products.insert(N * b);
    bad += table_count(N) != products.size();
  }
  o.detail << " mismatches=" << bad;
  o.require(bad == 0, "A(N) differs from the product set");
  const double r3 = ford_ratio(1000, table_count(1000));
  const double r4 = ford_ratio(10000, table_count(10000));
  o.detail << " ford(1e3)=" << r3 << " ford(1e4)=" << r4 << " eta0=" << eta0();
  o.require(std::max(r3, r4) / std::min(r3, r4) <= 2, "ford ratios differ by more than x2");
  o.require(std::abs(eta0() - 0.0860713) < 5e-7, "eta0 differs from 0.0860713");
}

void criterion5(Outcome& o) {
  std::vector<double> shapes;
  for (const u64 x : {10000ull, 1000000ull}) {
    const SiftedTableReport r = sifted_table_sum(sift(x, SieveCondition{}), builtin("one"));
    shapes.push_back(r.shape_ratio);
    o.detail << " x=" << x << ":" << r.shape_ratio << "(" << r.regime << ")";
  }
  o.require(std::isfinite(spread(shapes)) && spread(shapes) <= 5, "shape ratios differ by more than x5");
}

void criterion6(Outcome& o) {
  const u64 small = shifted_divisor_count(1, 1, -1, 20, 3, true).count;
  o.detail << " fixture=" << small;
  o.require(small == 6, "fixture count is not 6");
  std::vector<u64> counts;
  std::vector<double> ratios;
  for (const u64 y : {10ull, 100ull, 1000ull, 10000ull, 100000ull}) {
    const ShiftedDivisorReport r = shifted_divisor_count(1, 1, -1, 1000000, y, true);
    counts.push_back(r.count);
    if (y == 1000 || y == 10000) ratios.push_back(r.bound_ratio);
    o.detail << " y=" << y << ":" << r.count << "/" << r.bound_ratio;
  }
  o.require(spread(ratios) <= 3, "bound ratios at y=1e3, 1e4 differ by more than x3");
  o.require(std::is_sorted(counts.rbegin(), counts.rend()), "count increases with y");
}

void criterion7(Outcome& o) {
  const u64 M = 10000000, L = 2000;
  std::vector<u32> spf(M + 1, 0);
  for (u64 i = 2; i <= M; ++i)
    if (spf[i] == 0)
      for (u64 j = i; j <= M; j += i)
        if (spf[j] == 0) spf[j] = static_cast<u32>(i);
  std::vector<bool> image(L + 1, false);
  image[1] = true;
  for (u64 m = 2; m <= M; ++m) {
    u64 n = m, l = 1;
    bool over = false;
    while (n > 1 && !over) {
      const u64 p = spf[n];
      u64 pk = 1;
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        pk *= p;
        ++e;
      }
      u64 term = pk / p * (p - 1);
      if (p == 2 && e >= 3) term /= 2;
      l = std::lcm(l, term);
      over = l > L;
    }
    if (!over) image[l] = true;
  }
  const PrimeTable t(100);
  u64 bad = 0;
  for (u64 n = 1; n <= L; ++n) bad += is_lambda_value(n, t) != image[n];
  o.detail << " mismatches=" << bad;
  o.require(bad == 0, "lambda image mismatch");
  const LambdaImageReport a = lambda_image_intersection(1, -1, 1000000);
  const LambdaImageReport b = lambda_image_intersection(1, 1, 1000000);
  o.detail << " (1,-1):" << a.normalized << " (1,1):" << b.normalized;
  o.require(a.normalized >= 0.3 && a.normalized <= 1.5, "(1,-1) ratio outside [0.3, 1.5]");
  o.require(b.normalized < a.normalized, "(1,1) ratio not smaller");
}

void criterion8(Outcome& o) {
  for (const std::string spec : {"one", "zomega:1.2"}) {
    const MultiplicativeFunction f = parse_function(spec);
    std::vector<double> v;
    for (const u64 x : {100000ull, 1000000ull, 10000000ull}) {
      const EgpsReport r = egps_deviation(x, f, 2.0, std::nullopt);
      v.push_back(r.main.normalized);
      o.detail << " " << spec << "@" << x << ":" << r.main.normalized;
    }
    for (std::size_t i = 1; i < v.size(); ++i)
      o.require(v[i] <= 1.3 * v[i - 1], spec + " statistic increases beyond 30% noise");
    if (spec == "one") o.require(v.back() < 0.25, "statistic at 1e7 is not below 0.25");
  }
}

void criterion9(Outcome& o) {
  const u64 x = 100000;
  const SiftedSet s = sift(x, SieveCondition{});
  double worst = 0;
  for (const std::string spec : {"one", "musq"}) {
    const MultiplicativeFunction f = parse_function(spec);
    const WeightedHistogram h = weighted_histogram(s, f, GKind::omega, PrimeSet::all());
    for (const double z : {0.5, 1.0, 1.5}) {
      const double sum = mgf_sum(s, f, GKind::omega, PrimeSet::all(), z).sum;
      double ref = 0;
      for (std::size_t k = 0; k < h.bins.size(); ++k) ref += h.bins[k] * std::pow(z, static_cast<double>(k));
      worst = std::max(worst, std::abs(sum - ref) / ref);
      if (z == 1.0) o.require(sum == h.total, spec + ": z = 1 does not reproduce the total");
    }
  }
  o.detail << " worst_rel=" << worst;
  o.require(worst <= 1e-9, "relative difference above 1e-9");
}

std::string capture(const std::vector<std::string>& args, int& code) {
  if (g_binary.empty()) {
    std::ostringstream out, err;
    code = cli::dispatch(args, out, err);
    return out.str();
  }
  std::string cmd = g_binary;
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("cannot run " + g_binary);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int status = pclose(p);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

void criterion10(Outcome& o) {
  // Sizes above the default 2^20 window so the work really is split.
  const std::vector<std::vector<std::string>> runs = {
      {"primes", "--x", "3000000"},
      {"hist", "--x", "2500000", "--f", "zomega:1.5", "--e", "mod:4:1"},
      {"hr-check", "--x", "2500000"},
      {"mgf", "--x", "2500000", "--z", "1.5", "--f", "musq"},
      {"tails", "--x", "2500000", "--g", "bigomega", "--beta", "1.9", "--delta", "0.5"},
      {"dev", "--x", "2500000", "--lambda", "0.5,1,2", "--sieve", "avoid:-1/modp<=100"},
      {"table", "--n", "3000", "--shift", "1"},
      {"table-sifted", "--x", "2500000"},
      {"spd", "--x", "2000000", "--y", "1000"},
      {"lambda-image", "--u", "1", "--v", "-1", "--x", "2000000"},
      {"sp-dev", "--a", "1", "--b", "-1", "--x", "2000000", "--f", "zomega:0.8"},
      {"qf-dev", "--form", "1,0,1", "--e", "mod:4:1", "--x", "2500000", "--lambda", "1"},
      {"jointpoly", "--q", "1,0,1", "--q", "1,1", "--x", "2000000", "--y", "1500000", "--k", "2,2"},
      {"apcount", "--x", "2500000", "--d", "4", "--a", "1", "--k", "2"},
      {"egps", "--x", "2500000"},
      {"sigma-div", "--x", "2500000", "--p", "3"},
      {"s-div", "--x", "2500000", "--y", "1000", "--z", "10", "--d", "3"},
      {"omega-gcd", "--x", "2500000"},
      {"constants"},
  };
  for (const auto& args : runs) {
    auto a1 = args, a8 = args;
    a1.insert(a1.end(), {"--threads", "1"});
    a8.insert(a8.end(), {"--threads", "8"});
    int c1 = 0, c8 = 0;
    const std::string o1 = capture(a1, c1), o8 = capture(a8, c8);
    const bool same = c1 == 0 && c8 == 0 && o1 == o8 && !o1.empty();
    o.require(same, args[0] + " output differs or failed (exit " + std::to_string(c1) + "/" + std::to_string(c8) + ")");
  }
  o.detail << " subcommands=" << runs.size();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_binary = argv[1];
  int failed = 0;
  failed += report(1, "arithmetic functions match trial-division oracles for n <= 1e5", criterion1);
  failed += report(2, "lambda(n) is the largest element order for n <= 1e4", criterion2);
  failed += report(3, "upper-bound ratio stable across x in {1e5, 1e6, 1e7}", criterion3);
  failed += report(4, "multiplication table counts and Ford ratio", criterion4);
  failed += report(5, "sifted table shape ratio stable for x in {1e4, 1e6}", criterion5);
  failed += report(6, "shifted-prime divisor counts", criterion6);
  failed += report(7, "Carmichael image and shifted-prime intersection", criterion7);
  failed += report(8, "omega(s(n)) deviation decreases with x", criterion8);
  failed += report(9, "generating function equals the histogram transform", criterion9);
  failed += report(10, "CLI output identical for 1 and 8 threads", criterion10);
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << std::endl;
  return failed == 0 ? 0 : 1;
}
