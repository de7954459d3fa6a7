#include "common/text.hpp"

#include <cerrno>
#include <cstdlib>

namespace common {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(sep);
        out += parts[i];
    }
    return out;
}

bool parse_i64(std::string_view s, int64_t& out) {
    if (s.empty()) return false;
    std::string buf(s);
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(buf.c_str(), &end, 10);
    if (errno != 0 || end != buf.c_str() + buf.size()) return false;
    out = v;
    return true;
}

bool parse_u64(std::string_view s, uint64_t& out) {
    if (s.empty() || s.front() == '-') return false;
    std::string buf(s);
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(buf.c_str(), &end, 10);
    if (errno != 0 || end != buf.c_str() + buf.size()) return false;
    out = v;
    return true;
}

bool parse_f64(std::string_view s, double& out) {
    if (s.empty()) return false;
    std::string buf(s);
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (errno != 0 || end != buf.c_str() + buf.size()) return false;
    out = v;
    return true;
}

}  // namespace common
