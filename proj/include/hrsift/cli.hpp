#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace hrsift::cli {

constexpr const char* kVersion = "1.0.0";

using Cell = std::variant<std::monostate, std::uint64_t, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest round-trip decimal ("nan", "inf" for non-finite values).
std::string format_double(double v);

std::string to_csv(const Table& t);
std::string to_jsonl(const Table& t);

/// 64-bit FNV-1a, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Runs one subcommand. Exit codes: 0 ok, 2 usage or invalid input,
/// 3 resource budget exceeded, 4 arithmetic overflow, 1 anything else.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hrsift::cli
