#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace common {

std::string_view trim(std::string_view s);

// Splits on every separator; empty fields are kept.
std::vector<std::string> split(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, char sep);

// Strict parsers: the whole string must be consumed.
bool parse_i64(std::string_view s, int64_t& out);
bool parse_u64(std::string_view s, uint64_t& out);
bool parse_f64(std::string_view s, double& out);

}  // namespace common
