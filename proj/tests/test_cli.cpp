#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hrsift/cli.hpp"

using hrsift::cli::dispatch;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> r;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) r.push_back(l);
  return r;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Small invocations of every subcommand with their expected header row.
const std::vector<std::pair<std::vector<std::string>, std::string>>& goldens() {
  static const std::vector<std::pair<std::vector<std::string>, std::string>> g = {
      {{"primes", "--x", "100"}, "x,pi"},
      {{"hist", "--x", "1000"}, "experiment,x,f,g,E,sieve,k,mass,bound,ratio"},
      {{"hr-check", "--x", "1000"}, "experiment,x,f,g,E,sieve,k,mass,bound,ratio"},
      {{"mgf", "--x", "1000", "--z", "1.5"}, "x,f,g,E,sieve,z,sum,bound,ratio"},
      {{"tails", "--x", "1000"},
       "x,f,g,E,sieve,delta,M,low,high,low_bound,high_bound,low_ratio,high_ratio"},
      {{"dev", "--x", "1000", "--lambda", "0.5,1"}, "x,lambda,M,mass_low,mass_high,normalized,gauss_ref"},
      {{"table", "--n", "50", "--shift", "1"}, "N,A,ford_ratio,s,A_shifted"},
      {{"table-sifted", "--x", "1000"},
       "x,f,sieve,sum,count,M,M_nu,R,regime,bound_small_R,bound_mid_R,shape_ratio"},
      {{"spd", "--x", "1000", "--y", "10"}, "a,u,v,x,y,count,pi_x,normalized,bound_ratio"},
      {{"lambda-image", "--u", "1", "--v", "-1", "--x", "1000"}, "u,v,x,count,pi_x,normalized"},
      {{"sp-dev", "--a", "1", "--b", "-1", "--x", "1000"}, "x,lambda,M,mass_low,mass_high,normalized,gauss_ref"},
      {{"qf-dev", "--form", "1,0,1", "--e", "mod:4:1", "--x", "1000"},
       "x,lambda,M,mass_low,mass_high,normalized,gauss_ref"},
      {{"jointpoly", "--q", "1,0,1", "--q", "1,1", "--x", "2000", "--y", "1000", "--k", "1,2"},
       "polys,x,y,k,count,primes_in_window,degenerate,diag_limit,M_diag"},
      {{"apcount", "--x", "1000", "--d", "4", "--a", "1", "--k", "2"}, "x,d,a,g,k,count"},
      {{"egps", "--x", "1000"},
       "row,x,f,lambda,M,mass_low,mass_high,normalized,gauss_ref,log4x,excluded,unfactored"},
      {{"sigma-div", "--x", "1000", "--p", "3"}, "x,p,f,eps,count,sum,bound,ratio"},
      {{"s-div", "--x", "1000", "--y", "20", "--z", "5", "--d", "2"}, "x,y,z,d,f,count,sum"},
      {{"omega-gcd", "--x", "1000"}, "x,f,sum,bound,ratio"},
      {{"constants"}, "name,value,note"},
  };
  return g;
}

}  // namespace

TEST_CASE("double formatting") {
  CHECK(hrsift::cli::format_double(0.5) == "0.5");
  CHECK(hrsift::cli::format_double(0.1) == "0.1");
  CHECK(hrsift::cli::format_double(3) == "3");
  CHECK(hrsift::cli::format_double(std::nan("")) == "nan");
  CHECK(std::stod(hrsift::cli::format_double(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("csv and jsonl rendering") {
  hrsift::cli::Table t{{"a", "b", "c"}, {{std::uint64_t{1}, std::string("x,y"), std::monostate{}}}};
  CHECK(hrsift::cli::to_csv(t) == "a,b,c\n1,\"x,y\",\n");
  const auto j = nlohmann::json::parse(hrsift::cli::to_jsonl(t));
  CHECK(j["a"] == 1);
  CHECK(j["b"] == "x,y");
  CHECK(j["c"].is_null());
  CHECK(hrsift::cli::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(hrsift::cli::fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("hist at x = 10") {
  const Run r = run({"hist", "--x", "10"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 4);
  CHECK(ls[1] == "hist,10,one,omega,all,none,0,1,,");
  CHECK(ls[2] == "hist,10,one,omega,all,none,1,7,,");
  CHECK(ls[3] == "hist,10,one,omega,all,none,2,2,,");
}

TEST_CASE("primes subcommand") {
  CHECK(run({"primes", "--x", "100"}).out == "x,pi\n100,25\n");
  CHECK(lines(run({"primes", "--x", "10", "--list"}).out) == std::vector<std::string>{"p", "2", "3", "5", "7"});
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"hist", "--x", "10", "--bogus", "1"}).code == 2);
  CHECK(run({"hist"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"nosuch"}).code == 2);
  CHECK(run({"hist", "--x", "10", "--e", "bogus:1"}).code == 2);
  CHECK(run({"hist", "--x", "10", "--threads", "0"}).code == 2);
  CHECK(run({"mgf", "--x", "1000", "--z", "3", "--g", "bigomega"}).code == 2);
  CHECK(run({"jointpoly", "--q", "1,0,-1", "--x", "100", "--y", "50", "--k", "1"}).code == 2);
  CHECK(run({"sp-dev", "--a", "1", "--b", "-100", "--x", "50"}).code == 2);
  const Run h = run({"--help"});
  CHECK(h.code == 0);
  CHECK(run({"--version"}).out.find("1.0.0") != std::string::npos);
}

TEST_CASE("trivial shifted-divisor case needs an explicit flag") {
  CHECK(run({"spd", "--v", "-1", "--x", "20", "--y", "3"}).code == 2);
  const Run r = run({"spd", "--v", "-1", "--x", "20", "--y", "3", "--allow-trivial"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out)[1].rfind("1,1,-1,20,3,6,8,", 0) == 0);
}

TEST_CASE("overflow and budget exit codes") {
  CHECK(run({"table", "--n", "10", "--budget-mb", "0.000001"}).code == 3);
  CHECK(run({"spd", "--u", "4000000000", "--x", "10000000000", "--y", "10", "--budget-mb", "1"}).code != 0);
}

TEST_CASE("header rows of every subcommand") {
  for (const auto& [args, header] : goldens()) {
    CAPTURE(args[0]);
    const Run r = run(args);
    CHECK(r.code == 0);
    CHECK(first_line(r.out) == header);
    CHECK(lines(r.out).size() >= 2);
  }
}

TEST_CASE("constants") {
  const Run r = run({"constants"});
  REQUIRE(r.code == 0);
  bool eta = false, c2 = false;
  for (const auto& l : lines(r.out)) {
    if (l.rfind("eta0,", 0) == 0) {
      eta = true;
      CHECK(std::stod(l.substr(5)) == doctest::Approx(0.0860713).epsilon(1e-6));
    }
    if (l.rfind("C2,", 0) == 0) {
      c2 = true;
      CHECK(std::stod(l.substr(3)) == doctest::Approx(1.3203236).epsilon(1e-6));
    }
  }
  CHECK(eta);
  CHECK(c2);
}

TEST_CASE("jsonl output carries the same values") {
  const Run csv = run({"hist", "--x", "10"});
  const Run js = run({"hist", "--x", "10", "--format", "jsonl"});
  REQUIRE(js.code == 0);
  const auto ls = lines(js.out);
  REQUIRE(ls.size() == 3);
  const auto j = nlohmann::json::parse(ls[1]);
  CHECK(j["k"] == 1);
  CHECK(j["mass"] == 7.0);
  CHECK(j["experiment"] == "hist");
  CHECK(j["bound"].is_null());
}

TEST_CASE("manifest records parameters and checksum") {
  const std::string out = "cli_test_out.csv", man = "cli_test_manifest.json";
  const Run r = run({"dev", "--x", "5000", "--lambda", "1,2", "--out", out, "--manifest", man});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const std::string bytes = slurp(out);
  const auto m = nlohmann::json::parse(slurp(man));
  CHECK(m["subcommand"] == "dev");
  CHECK(m["version"] == "1.0.0");
  CHECK(m["output_checksum"] == "fnv1a64:" + hrsift::cli::fnv1a_hex(bytes));
  CHECK(m["parameters"]["x"] == "5000");
  CHECK(m["parameters"]["lambda"] == "1,2");
  CHECK(m["parameters"]["f"] == "one");
  CHECK(m["wall_time_sec"].get<double>() >= 0);
  CHECK(m["threads"].get<int>() >= 1);
  std::remove(out.c_str());
  std::remove(man.c_str());
}

TEST_CASE("output does not depend on the thread count") {
  for (const auto& [args, header] : goldens()) {
    CAPTURE(args[0]);
    auto one = args, eight = args;
    one.insert(one.end(), {"--threads", "1"});
    eight.insert(eight.end(), {"--threads", "8"});
    CHECK(run(one).out == run(eight).out);
  }
}
