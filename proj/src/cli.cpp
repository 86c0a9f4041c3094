#include "hrsift/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "hrsift/aliquot.hpp"
#include "hrsift/error.hpp"
#include "hrsift/hr_lab.hpp"
#include "hrsift/shifted.hpp"
#include "hrsift/spec_text.hpp"
#include "hrsift/table.hpp"

namespace hrsift::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const { return csv_field(s); }
  } visit;
  return std::visit(visit, c);
}

}  // namespace

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + csv_field(t.header[i]);
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += '\n';
  }
  return out;
}

std::string to_jsonl(const Table& t) {
  std::string out;
  for (const auto& row : t.rows) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size() && i < t.header.size(); ++i) {
      const Cell& c = row[i];
      auto& slot = j[t.header[i]];
      if (std::holds_alternative<std::uint64_t>(c)) slot = std::get<std::uint64_t>(c);
      else if (std::holds_alternative<std::int64_t>(c)) slot = std::get<std::int64_t>(c);
      else if (std::holds_alternative<double>(c)) slot = std::get<double>(c);
      else if (std::holds_alternative<std::string>(c)) slot = std::get<std::string>(c);
      else slot = nullptr;
    }
    out += j.dump() + '\n';
  }
  return out;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

using Row = std::vector<Cell>;

Cell num(u64 v) { return Cell{std::uint64_t{v}}; }
Cell num(i64 v) { return Cell{std::int64_t{v}}; }
Cell num(int v) { return Cell{std::int64_t{v}}; }
Cell num(double v) { return Cell{v}; }
Cell str(std::string s) { return Cell{std::move(s)}; }

// Flags shared by the statistics subcommands.
struct Params {
  u64 x = 0;
  u64 y = 0;
  u64 z_int = 0;
  u64 n = 0;
  std::string f = "one";
  std::string g = "omega";
  std::string e = "all";
  std::string sieve = "none";
  std::vector<double> lambda;
  std::optional<double> c0;
  double delta = 0.5;
  double z = 1;
  std::optional<double> C;
  std::optional<double> beta;
  std::optional<i64> shift;
  i64 a = 1;
  i64 b = -1;
  u64 u = 1;
  i64 v = -1;
  u64 d = 1;
  u64 p = 2;
  u64 p0 = 2;
  int k = 1;
  double eps = 0.1;
  std::string form;
  std::vector<std::string> q;
  std::string ks;
  bool list = false;
  i64 spd_v = 1;
  bool allow_trivial = false;
  std::string res = "0";
};

struct Common {
  std::string out;
  std::string manifest;
  std::string format = "csv";
  unsigned threads = Exec::default_threads();
  double budget_mb = 0;
  double budget_sec = 0;

  Exec exec() const {
    Exec e;
    e.threads = std::max(1u, threads);
    e.budget.max_mb = budget_mb;
    e.budget.max_sec = budget_sec;
    return e;
  }
};

std::string f_label(const MultiplicativeFunction& f) { return f.spec().empty() ? f.name() : f.spec(); }

double default_beta(GKind g) { return g == GKind::omega ? 2.0 : 1.9; }

Row deviation_row(const DeviationReport& r) {
  return {num(r.x), num(r.lambda), num(r.M), num(r.mass_low), num(r.mass_high), num(r.normalized),
          num(r.gauss_ref)};
}

const std::vector<std::string> kDeviationHeader = {"x",         "lambda",     "M",        "mass_low",
                                                   "mass_high", "normalized", "gauss_ref"};

std::vector<double> lambdas_or(const std::vector<double>& given, double fallback) {
  return given.empty() ? std::vector<double>{fallback} : given;
}

// ---------------------------------------------------------------------------

Table run_primes(const Params& p, const Exec&) {
  Table t;
  if (p.list) {
    t.header = {"p"};
    if (p.x >= 2) {
      const PrimeTable table(p.x);
      for (const u64 q : table.primes()) t.rows.push_back({num(q)});
    }
    return t;
  }
  t.header = {"x", "pi"};
  const u64 pi = p.x >= 2 ? PrimeTable(p.x).pi() : 0;
  t.rows.push_back({num(p.x), num(pi)});
  return t;
}

struct StatInputs {
  MultiplicativeFunction f;
  GKind g;
  PrimeSet e;
  SiftedSet set;
};

StatInputs stat_inputs(const Params& p, const Exec& exec) {
  if (p.x < 2) throw InvalidArgument("--x must be >= 2");
  return {parse_function(p.f), parse_gkind(p.g), PrimeSet::parse(p.e), parse_set(p.sieve, p.x, exec)};
}

const std::vector<std::string> kHrHeader = {"experiment", "x", "f", "g", "E", "sieve", "k", "mass", "bound", "ratio"};

Table run_hist(const Params& p, const Exec& exec) {
  const StatInputs in = stat_inputs(p, exec);
  const WeightedHistogram h = weighted_histogram(in.set, in.f, in.g, in.e, exec);
  Table t{kHrHeader, {}};
  for (std::size_t k = 0; k < h.bins.size(); ++k)
    t.rows.push_back({str("hist"), num(h.x), str(h.f_label), str(to_string(h.g_kind)), str(h.E.to_spec()),
                      str(h.set_label), num(static_cast<u64>(k)), num(h.bins[k]), Cell{}, Cell{}});
  return t;
}

Table run_hr_check(const Params& p, const Exec& exec) {
  const StatInputs in = stat_inputs(p, exec);
  const WeightedHistogram h = weighted_histogram(in.set, in.f, in.g, in.e, exec);
  const double C = p.C.value_or(hr_constant(p.x));
  const HrRatioReport r = hr_ratio(h, C, p.beta.value_or(default_beta(in.g)));
  Table t{kHrHeader, {}};
  auto emit = [&](const char* name, const std::vector<HrRow>& rows) {
    for (const auto& row : rows)
      t.rows.push_back({str(name), num(h.x), str(h.f_label), str(to_string(h.g_kind)), str(h.E.to_spec()),
                        str(h.set_label), num(row.k), num(row.mass), num(row.bound), num(row.ratio)});
  };
  emit("hr", r.rows);
  emit("hr_all_primes", r.rows_all_primes);
  return t;
}

Table run_mgf(const Params& p, const Exec& exec) {
  const StatInputs in = stat_inputs(p, exec);
  const MgfReport r = mgf_sum(in.set, in.f, in.g, in.e, p.z, exec);
  Table t{{"x", "f", "g", "E", "sieve", "z", "sum", "bound", "ratio"}, {}};
  t.rows.push_back({num(p.x), str(f_label(in.f)), str(to_string(in.g)), str(in.e.to_spec()), str(in.set.label()),
                    num(r.z), num(r.sum), num(r.bound), num(r.ratio)});
  return t;
}

Table run_tails(const Params& p, const Exec& exec) {
  const StatInputs in = stat_inputs(p, exec);
  const WeightedHistogram h = weighted_histogram(in.set, in.f, in.g, in.e, exec);
  const TailReport r = tail_masses(h, p.delta, p.beta.value_or(default_beta(in.g)));
  Table t{{"x", "f", "g", "E", "sieve", "delta", "M", "low", "high", "low_bound", "high_bound", "low_ratio",
           "high_ratio"},
          {}};
  t.rows.push_back({num(p.x), str(h.f_label), str(to_string(h.g_kind)), str(h.E.to_spec()), str(h.set_label),
                    num(r.delta), num(h.mertens.M), num(r.low), num(r.high), num(r.low_bound), num(r.high_bound),
                    num(r.low_ratio), num(r.high_ratio)});
  return t;
}

Table run_dev(const Params& p, const Exec& exec) {
  const StatInputs in = stat_inputs(p, exec);
  const WeightedHistogram h = weighted_histogram(in.set, in.f, in.g, in.e, exec);
  Table t{kDeviationHeader, {}};
  for (const double lam : lambdas_or(p.lambda, 1.0)) t.rows.push_back(deviation_row(deviation(h, lam)));
  return t;
}

Table run_table(const Params& p, const Exec& exec) {
  const TableReport r = table_report(p.n, p.shift, exec);
  Table t;
  t.header = {"N", "A", "ford_ratio"};
  Row row{num(r.N), num(r.A), num(r.ford_ratio)};
  if (r.s) {
    t.header.insert(t.header.end(), {"s", "A_shifted"});
    row.push_back(num(*r.s));
    row.push_back(num(*r.A_shifted));
  }
  t.rows.push_back(std::move(row));
  return t;
}

Table run_table_sifted(const Params& p, const Exec& exec) {
  const auto f = parse_function(p.f);
  const SiftedSet set = parse_set(p.sieve, p.x, exec);
  const SiftedTableReport r = sifted_table_sum(set, f, exec);
  Table t{{"x", "f", "sieve", "sum", "count", "M", "M_nu", "R", "regime", "bound_small_R", "bound_mid_R",
           "shape_ratio"},
          {}};
  t.rows.push_back({num(r.x), str(f_label(f)), str(set.label()), num(r.sum), num(r.count), num(r.M), num(r.M_nu),
                    num(r.R), str(r.regime), num(r.bound_small_R), num(r.bound_mid_R), num(r.shape_ratio)});
  return t;
}

Table run_spd(const Params& p, const Exec& exec) {
  const ShiftedDivisorReport r = shifted_divisor_count(p.a, p.u, p.spd_v, p.x, p.y, p.allow_trivial, exec);
  Table t{{"a", "u", "v", "x", "y", "count", "pi_x", "normalized", "bound_ratio"}, {}};
  t.rows.push_back({num(r.a), num(r.u), num(r.v), num(r.x), num(r.y), num(r.count), num(r.pi_x), num(r.normalized),
                    num(r.bound_ratio)});
  return t;
}

Table run_lambda_image(const Params& p, const Exec& exec) {
  const LambdaImageReport r = lambda_image_intersection(p.u, p.v, p.x, exec);
  Table t{{"u", "v", "x", "count", "pi_x", "normalized"}, {}};
  t.rows.push_back({num(r.u), num(r.v), num(r.x), num(r.count), num(r.pi_x), num(r.normalized)});
  return t;
}

Table run_sp_dev(const Params& p, const Exec& exec) {
  if (p.a < 1) throw InvalidArgument("--a must be >= 1");
  const auto f = parse_function(p.f);
  const PrimeSet e = PrimeSet::parse(p.e);
  Table t{kDeviationHeader, {}};
  for (const double lam : lambdas_or(p.lambda, 1.0))
    t.rows.push_back(deviation_row(
        weighted_sp_deviation(static_cast<u64>(p.a), p.b, f, e, parse_gkind(p.g), p.x, lam, exec)));
  return t;
}

QuadraticForm parse_form(const std::string& text) {
  const auto parts = spec::split(text, ',');
  if (parts.size() != 3) throw InvalidArgument("malformed --form '" + text + "': expected a,b,c");
  return {spec::parse_i64(parts[0], text), spec::parse_i64(parts[1], text), spec::parse_i64(parts[2], text)};
}

Table run_qf_dev(const Params& p, const Exec& exec) {
  const QuadraticForm form = parse_form(p.form);
  const PrimeSet e = PrimeSet::parse(p.e);
  Table t{kDeviationHeader, {}};
  for (const double lam : lambdas_or(p.lambda, 1.0))
    t.rows.push_back(deviation_row(qf_deviation(form, p.shift, e, parse_gkind(p.g), p.x, lam, p.p0, exec)));
  return t;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? std::string(1, sep) : "") + parts[i];
  return s;
}

Table run_jointpoly(const Params& p, const Exec& exec) {
  if (p.q.empty()) throw InvalidArgument("jointpoly needs at least one --q");
  std::vector<Polynomial> polys;
  std::vector<std::string> names;
  for (const auto& s : p.q) {
    polys.push_back(Polynomial::parse(s));
    names.push_back(polys.back().to_string());
  }
  std::vector<int> ks;
  std::vector<std::string> k_text;
  for (const auto& tok : spec::split(p.ks, ',')) {
    const i64 k = spec::parse_i64(tok, p.ks);
    if (k < 0 || k > 64) throw InvalidArgument("--k entries must lie in 0..64");
    ks.push_back(static_cast<int>(k));
    k_text.push_back(std::to_string(k));
  }
  const JointPolyReport r = joint_poly_omega(polys, p.x, p.y, ks, exec);
  std::vector<std::string> diag;
  for (const double m : r.M_diag) diag.push_back(format_double(m));
  Table t{{"polys", "x", "y", "k", "count", "primes_in_window", "degenerate", "diag_limit", "M_diag"}, {}};
  t.rows.push_back({str(join(names, ';')), num(p.x), num(p.y), str(join(k_text, ';')), num(r.count),
                    num(r.primes_in_window), num(r.degenerate), num(r.diag_limit), str(join(diag, ';'))});
  return t;
}

Table run_apcount(const Params& p, const Exec& exec) {
  const u64 a = spec::parse_u64(p.res, "--a");
  const u64 c = ap_prime_factor_count(p.x, p.d, a, parse_gkind(p.g), p.k, exec);
  Table t{{"x", "d", "a", "g", "k", "count"}, {}};
  t.rows.push_back({num(p.x), num(p.d), num(a), str(p.g), num(p.k), num(c)});
  return t;
}

Table run_egps(const Params& p, const Exec& exec) {
  if (!p.lambda.empty() && p.c0) throw InvalidArgument("egps: give --lambda or --c0, not both");
  if (p.lambda.size() > 1) throw InvalidArgument("egps: --lambda takes one value; the grid is always emitted");
  const auto f = parse_function(p.f);
  std::optional<double> lam;
  if (!p.lambda.empty()) lam = p.lambda.front();
  else if (!p.c0) lam = 2.0;
  const EgpsReport r = egps_deviation(p.x, f, lam, p.c0, exec);
  Table t{{"row", "x", "f", "lambda", "M", "mass_low", "mass_high", "normalized", "gauss_ref", "log4x", "excluded",
           "unfactored"},
          {}};
  auto emit = [&](const char* name, const DeviationReport& d) {
    t.rows.push_back({str(name), num(d.x), str(f_label(f)), num(d.lambda), num(d.M), num(d.mass_low),
                      num(d.mass_high), num(d.normalized), num(d.gauss_ref), num(r.log4x), num(r.excluded),
                      num(r.unfactored)});
  };
  emit("main", r.main);
  for (const auto& d : r.grid) emit("grid", d);
  return t;
}

Table run_sigma_div(const Params& p, const Exec& exec) {
  const auto f = parse_function(p.f);
  const SigmaDivReport r = count_p_divides_sigma(p.x, p.p, f, p.eps, exec);
  Table t{{"x", "p", "f", "eps", "count", "sum", "bound", "ratio"}, {}};
  t.rows.push_back({num(r.x), num(r.p), str(f_label(f)), num(r.eps), num(r.count), num(r.sum), num(r.bound),
                    num(r.ratio)});
  return t;
}

Table run_s_div(const Params& p, const Exec& exec) {
  const auto f = parse_function(p.f);
  const SDivReport r = count_d_divides_s(p.x, p.y, p.z_int, p.d, f, exec);
  Table t{{"x", "y", "z", "d", "f", "count", "sum"}, {}};
  t.rows.push_back({num(p.x), num(p.y), num(p.z_int), num(p.d), str(f_label(f)), num(r.count), num(r.sum)});
  return t;
}

Table run_omega_gcd(const Params& p, const Exec& exec) {
  const auto f = parse_function(p.f);
  const OmegaGcdReport r = mean_omega_gcd_sigma(p.x, f, exec);
  Table t{{"x", "f", "sum", "bound", "ratio"}, {}};
  t.rows.push_back({num(r.x), str(f_label(f)), num(r.sum), num(r.bound), num(r.ratio)});
  return t;
}

Table run_constants(const Params&, const Exec&) {
  Table t{{"name", "value", "note"}, {}};
  t.rows.push_back({str("eta0"), num(eta0()), str("1-(1+log log 2)/log 2")});
  constexpr u64 kTwinLimit = 10000000;
  const PrimeTable table(kTwinLimit);
  double c2 = 2;
  for (const u64 q : table.primes()) {
    if (q == 2) continue;
    const double qm = static_cast<double>(q) - 1;
    c2 *= 1 - 1 / (qm * qm);
  }
  t.rows.push_back({str("C2"), num(c2),
                    str("2*prod over 2<p<=1e7 of (1-1/(p-1)^2); omitted tail changes it by about 1/(P log P) = "
                        "6e-9 relative")});
  for (int v = 1; v <= 5; ++v)
    t.rows.push_back({str("s_" + std::to_string(v)), num(1 + 2 / std::expm1(0.53 / v)), str("1+2/(e^(0.53/v)-1)")});
  for (const double y : {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0})
    t.rows.push_back({str("Q(" + format_double(y) + ")"), num(q_rate(y)), str("y log y - y + 1")});
  return t;
}

// ---------------------------------------------------------------------------

struct Command {
  CLI::App* app;
  std::function<Table(const Params&, const Exec&)> run;
};

void add_common(CLI::App* s, Common& c) {
  s->add_option("--out", c.out, "Write the table to PATH instead of standard output");
  s->add_option("--manifest", c.manifest, "Write a JSON run manifest to PATH");
  s->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  s->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
  s->add_option("--budget-mb", c.budget_mb, "Memory budget in MB (0 = unlimited)")->check(CLI::NonNegativeNumber);
  s->add_option("--budget-sec", c.budget_sec, "Time budget in seconds (0 = unlimited)")->check(CLI::NonNegativeNumber);
}

void add_stat(CLI::App* s, Params& p) {
  s->add_option("--x", p.x, "Upper limit x")->required();
  s->add_option("--f", p.f, "Weight spec");
  s->add_option("--g", p.g, "omega or bigomega");
  s->add_option("--e", p.e, "Prime set spec");
  s->add_option("--sieve", p.sieve, "Sieve condition or exact set spec");
}

nlohmann::ordered_json parameter_map(const CLI::App* s) {
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const CLI::Option* opt : s->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
    const std::string& name = opt->get_lnames()[0];
    if (opt->count() > 0) {
      std::string v;
      for (std::size_t i = 0; i < opt->results().size(); ++i) v += (i ? "," : "") + opt->results()[i];
      params[name] = v;
    } else {
      params[name] = opt->get_default_str();
    }
  }
  return params;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
  f << bytes;
  if (!f) throw InvalidArgument("failed writing '" + path + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact sieve experiments on prime factor counts over sifted sets"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Params p;
  Common c;
  std::vector<Command> commands;
  auto sub = [&](const char* name, const char* help, Table (*fn)(const Params&, const Exec&)) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s, c);
    commands.push_back({s, fn});
    return s;
  };

  {
    auto* s = sub("primes", "pi(x), or the primes up to x with --list", run_primes);
    s->add_option("--x", p.x, "Upper limit")->required();
    s->add_flag("--list", p.list, "List the primes");
  }
  add_stat(sub("hist", "Weighted histogram of g(n, E) over a set", run_hist), p);
  {
    auto* s = sub("hr-check", "Histogram against the Hardy-Ramanujan bound shape", run_hr_check);
    add_stat(s, p);
    s->add_option("--C", p.C, "Additive constant (default: hr_constant(x))");
    s->add_option("--beta", p.beta, "k range is 0..beta*M (default 2 for omega, 1.9 for bigomega)");
  }
  {
    auto* s = sub("mgf", "Sum of f(n) z^g(n,E) against its bound shape", run_mgf);
    add_stat(s, p);
    s->add_option("--z", p.z, "Generating-function variable")->required();
  }
  {
    auto* s = sub("tails", "Lower and upper tail masses", run_tails);
    add_stat(s, p);
    s->add_option("--delta", p.delta, "Relative tail width");
    s->add_option("--beta", p.beta, "Upper range factor");
  }
  {
    auto* s = sub("dev", "Deviation mass |g - M| >= lambda sqrt(M)", run_dev);
    add_stat(s, p);
    s->add_option("--lambda", p.lambda, "One or more lambda values")->delimiter(',');
  }
  {
    auto* s = sub("table", "Distinct products A(N) and A(N; P_s)", run_table);
    s->add_option("--n", p.n, "Table size N")->required();
    s->add_option("--shift", p.shift, "Shift s for ab + s prime");
  }
  {
    auto* s = sub("table-sifted", "Weighted sum over the sifted multiplication table", run_table_sifted);
    s->add_option("--x", p.x, "Upper limit")->required();
    s->add_option("--f", p.f, "Weight spec");
    s->add_option("--sieve", p.sieve, "Sieve condition or exact set spec");
  }
  {
    auto* s = sub("spd", "Primes p <= x with up + v divisible by some q - a > y, q prime", run_spd);
    s->add_option("--a", p.a, "Shift a");
    s->add_option("--u", p.u, "Multiplier u");
    s->add_option("--v", p.spd_v, "Offset v");
    s->add_option("--x", p.x, "Prime limit")->required();
    s->add_option("--y", p.y, "Divisor threshold")->required();
    s->add_flag("--allow-trivial", p.allow_trivial, "Run v = -au, where up + v = u(p - a)");
  }
  {
    auto* s = sub("lambda-image", "Values up + v <= x lying in the Carmichael lambda image", run_lambda_image);
    s->add_option("--u", p.u, "Multiplier u");
    s->add_option("--v", p.v, "Offset v");
    s->add_option("--x", p.x, "Upper limit")->required();
  }
  {
    auto* s = sub("sp-dev", "Weighted deviation of g(ap + b, E) over p <= x", run_sp_dev);
    s->add_option("--a", p.a, "Multiplier a");
    s->add_option("--b", p.b, "Offset b");
    s->add_option("--f", p.f, "Weight spec");
    s->add_option("--g", p.g, "omega or bigomega");
    s->add_option("--e", p.e, "Prime set spec");
    s->add_option("--x", p.x, "Prime limit")->required();
    s->add_option("--lambda", p.lambda, "One or more lambda values")->delimiter(',');
  }
  {
    auto* s = sub("qf-dev", "Deviation of g(n, E) over values of a binary quadratic form", run_qf_dev);
    s->add_option("--form", p.form, "a,b,c")->required();
    s->add_option("--shift", p.shift, "Restrict to values n with n + k prime");
    s->add_option("--g", p.g, "omega or bigomega");
    s->add_option("--e", p.e, "Prime set spec");
    s->add_option("--p0", p.p0, "Smallest prime allowed in E");
    s->add_option("--x", p.x, "Upper limit")->required();
    s->add_option("--lambda", p.lambda, "One or more lambda values")->delimiter(',');
  }
  {
    auto* s = sub("jointpoly", "Primes in (x - y, x] with omega(Q_j(p)) = k_j", run_jointpoly);
    s->add_option("--q", p.q, "Polynomial coefficients, leading first (repeatable)")->required();
    s->add_option("--x", p.x, "Window end")->required();
    s->add_option("--y", p.y, "Window length")->required();
    s->add_option("--k", p.ks, "Targets k1[,k2...]")->required();
  }
  {
    auto* s = sub("apcount", "n <= x with n = a mod d and g(n) = k", run_apcount);
    s->add_option("--x", p.x, "Upper limit")->required();
    s->add_option("--d", p.d, "Modulus");
    s->add_option("--a", p.res, "Residue");
    s->add_option("--g", p.g, "omega or bigomega");
    s->add_option("--k", p.k, "Target count")->required();
  }
  {
    auto* s = sub("egps", "Deviation of omega(s(n)) from log log x", run_egps);
    s->add_option("--x", p.x, "Upper limit")->required();
    s->add_option("--f", p.f, "Weight spec");
    s->add_option("--lambda", p.lambda, "Deviation threshold (default 2)");
    s->add_option("--c0", p.c0, "Use lambda = c0 sqrt(log4 x)");
  }
  {
    auto* s = sub("sigma-div", "Weighted count of n <= x with p | sigma(n)", run_sigma_div);
    s->add_option("--x", p.x, "Upper limit")->required();
    s->add_option("--p", p.p, "Prime p")->required();
    s->add_option("--f", p.f, "Weight spec");
    s->add_option("--eps", p.eps, "Exponent slack in the bound");
  }
  {
    auto* s = sub("s-div", "Weighted count of n <= x with d | s(n), P+(n) > y, P+(n)^2 not dividing n", run_s_div);
    s->add_option("--x", p.x, "Upper limit")->required();
    s->add_option("--y", p.y, "Largest-prime threshold")->required();
    s->add_option("--z", p.z_int, "Bound on d")->required();
    s->add_option("--d", p.d, "Divisor d")->required();
    s->add_option("--f", p.f, "Weight spec");
  }
  {
    auto* s = sub("omega-gcd", "Weighted sum of omega(gcd(sigma(n), n))", run_omega_gcd);
    s->add_option("--x", p.x, "Upper limit")->required();
    s->add_option("--f", p.f, "Weight spec");
  }
  sub("constants", "Numerical constants used by the bounds", run_constants);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  for (const Command& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    const Exec exec = c.exec();
    const Table t = cmd.run(p, exec);
    const std::string bytes = c.format == "jsonl" ? to_jsonl(t) : to_csv(t);
    if (c.out.empty()) out << bytes;
    else write_file(c.out, bytes);
    if (!c.manifest.empty()) {
      nlohmann::ordered_json m;
      m["subcommand"] = cmd.app->get_name();
      m["parameters"] = parameter_map(cmd.app);
      m["version"] = kVersion;
      m["wall_time_sec"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      m["threads"] = exec.threads;
      m["output_checksum"] = "fnv1a64:" + fnv1a_hex(bytes);
      write_file(c.manifest, m.dump(2) + "\n");
    }
    return 0;
  }
  return 2;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return run(argc, argv, out, err);
  } catch (const ResourceError& e) {
    err << "hrsift: resource budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const ArithmeticOverflow& e) {
    err << "hrsift: arithmetic overflow: " << e.what() << '\n';
    return 4;
  } catch (const InvalidArgument& e) {
    err << "hrsift: invalid argument: " << e.what() << '\n';
    return 2;
  } catch (const EmptySetError& e) {
    err << "hrsift: empty set: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "hrsift: error: " << e.what() << '\n';
    return 1;
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("hrsift");
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hrsift::cli
