#pragma once

// Tokenizing helpers shared by the spec mini-languages.

#include <string>
#include <utility>
#include <vector>

#include "hrsift/arith.hpp"

namespace hrsift::spec {

std::string trim(const std::string& s);
/// "head:rest" -> {head, rest}; no colon -> {s, ""}.
std::pair<std::string, std::string> split_head(const std::string& s);
/// Splits on `sep`; empty input gives an empty vector.
std::vector<std::string> split(const std::string& s, char sep);

// Each throws InvalidArgument naming the offending token and its context.
u64 parse_u64(const std::string& token, const std::string& context);
i64 parse_i64(const std::string& token, const std::string& context);
double parse_double(const std::string& token, const std::string& context);

}  // namespace hrsift::spec
