#include "hrsift/prime_set.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "hrsift/error.hpp"
#include "hrsift/spec_text.hpp"

namespace hrsift {

struct PrimeSet::Node {
  Kind kind = Kind::all;
  u64 a = 0;  // p0, modulus, interval start
  u64 b = 0;  // interval end
  i64 discriminant = 0;
  int sign = 1;
  std::vector<u64> values;  // residues or explicit primes, sorted
  std::string source;
  std::vector<PrimeSet> children;
};

PrimeSet::PrimeSet() : PrimeSet(all()) {}

PrimeSet PrimeSet::all() {
  static const auto node = std::make_shared<const Node>();
  return PrimeSet(node);
}

PrimeSet PrimeSet::none() { return explicit_list({}); }

PrimeSet PrimeSet::min_threshold(u64 p0) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::min_threshold;
  n->a = p0;
  return PrimeSet(std::move(n));
}

PrimeSet PrimeSet::residue(u64 modulus, std::vector<u64> allowed) {
  if (modulus == 0) throw InvalidArgument("residue prime set: modulus must be >= 1");
  for (auto& r : allowed) r %= modulus;
  std::sort(allowed.begin(), allowed.end());
  allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
  auto n = std::make_shared<Node>();
  n->kind = Kind::residue;
  n->a = modulus;
  n->values = std::move(allowed);
  return PrimeSet(std::move(n));
}

PrimeSet PrimeSet::kronecker(i64 discriminant, int sign) {
  if (sign != 1 && sign != -1) throw InvalidArgument("kronecker prime set: sign must be +1 or -1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kronecker;
  n->discriminant = discriminant;
  n->sign = sign;
  return PrimeSet(std::move(n));
}

PrimeSet PrimeSet::explicit_list(std::vector<u64> primes, std::string source) {
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (const u64 p : primes)
    if (!is_prime(p)) throw InvalidArgument("explicit prime set contains non-prime " + std::to_string(p));
  auto n = std::make_shared<Node>();
  n->kind = Kind::explicit_list;
  n->values = std::move(primes);
  n->source = std::move(source);
  return PrimeSet(std::move(n));
}

PrimeSet PrimeSet::interval(u64 a, u64 b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::interval;
  n->a = a;
  n->b = b;
  return PrimeSet(std::move(n));
}

PrimeSet PrimeSet::complement(const PrimeSet& e) {
  if (e.kind() == Kind::complement) return e.node_->children.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::complement;
  n->children = {e};
  return PrimeSet(std::move(n));
}

PrimeSet PrimeSet::intersection(std::vector<PrimeSet> parts) {
  if (parts.empty()) return all();
  auto n = std::make_shared<Node>();
  n->kind = Kind::intersection;
  n->children = std::move(parts);
  return PrimeSet(std::move(n));
}

PrimeSet::Kind PrimeSet::kind() const { return node_->kind; }

bool PrimeSet::contains(u64 p) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::all:
      return true;
    case Kind::min_threshold:
      return p >= n.a;
    case Kind::residue:
      return std::binary_search(n.values.begin(), n.values.end(), p % n.a);
    case Kind::kronecker:
      return hrsift::kronecker(n.discriminant, p) == n.sign;
    case Kind::explicit_list:
      return std::binary_search(n.values.begin(), n.values.end(), p);
    case Kind::interval:
      return p >= n.a && p <= n.b;
    case Kind::complement:
      return !n.children.front().contains(p);
    case Kind::intersection:
      return std::all_of(n.children.begin(), n.children.end(), [p](const PrimeSet& c) { return c.contains(p); });
  }
  return false;
}

std::optional<u64> PrimeSet::min_element(const PrimeTable& table) const {
  for (const u64 p : table.primes())
    if (contains(p)) return p;
  return std::nullopt;
}

namespace {

std::string join(const std::vector<u64>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

bool is_inline_list(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || c == ','; });
}

std::vector<u64> read_prime_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open prime list file '" + path + "'");
  std::vector<u64> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = spec::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(spec::parse_u64(t, "prime list entry"));
  }
  return out;
}

}  // namespace

std::string PrimeSet::to_spec() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::all:
      return "all";
    case Kind::min_threshold:
      return "pmin:" + std::to_string(n.a);
    case Kind::residue:
      return "mod:" + std::to_string(n.a) + ":" + join(n.values);
    case Kind::kronecker:
      return "kron:" + std::to_string(n.discriminant) + (n.sign > 0 ? ":+1" : ":-1");
    case Kind::explicit_list:
      return "list:" + (n.source.empty() ? join(n.values) : n.source);
    case Kind::interval:
      return "interval:" + std::to_string(n.a) + ":" + std::to_string(n.b);
    case Kind::complement:
      return "not:" + n.children.front().to_spec();
    case Kind::intersection: {
      std::string s = "and:";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) s += ';';
        s += n.children[i].to_spec();
      }
      return s;
    }
  }
  return "all";
}

PrimeSet PrimeSet::parse(const std::string& text) {
  const std::string s = spec::trim(text);
  const auto [head, rest] = spec::split_head(s);
  if (head == "all" && rest.empty()) return all();
  if (head == "pmin") return min_threshold(spec::parse_u64(rest, s));
  if (head == "mod") {
    const auto [m, residues] = spec::split_head(rest);
    std::vector<u64> allowed;
    for (const auto& r : spec::split(residues, ',')) allowed.push_back(spec::parse_u64(r, s));
    if (allowed.empty()) throw InvalidArgument("malformed prime set spec '" + s + "': no residues");
    return residue(spec::parse_u64(m, s), std::move(allowed));
  }
  if (head == "kron") {
    const auto [d, sg] = spec::split_head(rest);
    int sign;
    if (sg == "+1" || sg == "1")
      sign = 1;
    else if (sg == "-1")
      sign = -1;
    else
      throw InvalidArgument("malformed prime set spec '" + s + "': sign must be +1 or -1");
    return kronecker(spec::parse_i64(d, s), sign);
  }
  if (head == "list") {
    if (is_inline_list(rest)) {
      std::vector<u64> ps;
      for (const auto& t : spec::split(rest, ',')) ps.push_back(spec::parse_u64(t, s));
      return explicit_list(std::move(ps));
    }
    return explicit_list(read_prime_file(rest), rest);
  }
  if (head == "interval") {
    const auto [a, b] = spec::split_head(rest);
    return interval(spec::parse_u64(a, s), spec::parse_u64(b, s));
  }
  if (head == "not") return complement(parse(rest));
  if (head == "and") {
    std::vector<PrimeSet> parts;
    for (const auto& t : spec::split(rest, ';')) parts.push_back(parse(t));
    if (parts.empty()) throw InvalidArgument("malformed prime set spec '" + s + "'");
    return intersection(std::move(parts));
  }
  throw InvalidArgument("malformed prime set spec: unknown token '" + head + "' in '" + s + "'");
}

int omega_in(const Factorization& fac, const PrimeSet& e) {
  if (e.is_all()) return omega(fac);
  int r = 0;
  for (const auto& pp : fac.parts())
    if (e.contains(pp.p)) ++r;
  return r;
}

int big_omega_in(const Factorization& fac, const PrimeSet& e) {
  if (e.is_all()) return big_omega(fac);
  int r = 0;
  for (const auto& pp : fac.parts())
    if (e.contains(pp.p)) r += static_cast<int>(pp.e);
  return r;
}

}  // namespace hrsift
