#include "hrsift/spec_text.hpp"

#include <charconv>

#include "hrsift/error.hpp"

namespace hrsift::spec {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::pair<std::string, std::string> split_head(const std::string& s) {
  const auto pos = s.find(':');
  if (pos == std::string::npos) return {s, {}};
  return {s.substr(0, pos), s.substr(pos + 1)};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

namespace {

[[noreturn]] void bad(const std::string& token, const std::string& context) {
  throw InvalidArgument("malformed spec '" + context + "': bad token '" + token + "'");
}

template <class T>
T parse_int(const std::string& raw, const std::string& context) {
  std::string token = trim(raw);
  if (!token.empty() && token.front() == '+') token.erase(0, 1);
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (token.empty() || ec != std::errc() || ptr != last) bad(raw, context);
  return value;
}

}  // namespace

u64 parse_u64(const std::string& token, const std::string& context) { return parse_int<u64>(token, context); }
i64 parse_i64(const std::string& token, const std::string& context) { return parse_int<i64>(token, context); }

double parse_double(const std::string& raw, const std::string& context) {
  const std::string token = trim(raw);
  double value = 0;
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), last, value);
  if (token.empty() || ec != std::errc() || ptr != last) bad(raw, context);
  return value;
}

}  // namespace hrsift::spec
