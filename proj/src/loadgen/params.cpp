#include "loadgen/params.hpp"

#include <cmath>
#include <stdexcept>

#include "common/text.hpp"

namespace loadgen {

void validate(const LoadParams& params) {
    if (!(params.duty_p >= 0.0 && params.duty_p <= 1.0))
        throw std::invalid_argument("duty_p out of range [0,1]");
    if (params.net_seconds < 0.0) throw std::invalid_argument("net_seconds must be >= 0");
    if (params.cpu_seconds < 0.0) throw std::invalid_argument("cpu_seconds must be >= 0");
    if (!(params.pareto_alpha > 0.0)) throw std::invalid_argument("pareto_alpha must be > 0");
    if (!(params.pareto_xmin > 0.0)) throw std::invalid_argument("pareto_xmin must be > 0");
    if (params.slot_ms < 1) throw std::invalid_argument("slot_ms must be >= 1");
    if (!(params.connect_timeout_s > 0.0)) throw std::invalid_argument("connect_timeout_s must be > 0");
}

namespace {

void apply_entry(LoadParams& p, std::string_view key, std::string_view value, const std::string& where) {
    auto bad_value = [&]() -> std::invalid_argument {
        return std::invalid_argument(where + ": cannot parse value '" + std::string(value) + "' for key '" +
                                     std::string(key) + "'");
    };
    double d = 0.0;
    uint64_t u = 0;
    int64_t i = 0;
    if (key == "net_seconds") {
        if (!common::parse_f64(value, d)) throw bad_value();
        p.net_seconds = d;
    } else if (key == "mem_bytes") {
        if (!common::parse_u64(value, u)) throw bad_value();
        p.mem_bytes = u;
    } else if (key == "cpu_seconds") {
        if (!common::parse_f64(value, d)) throw bad_value();
        p.cpu_seconds = d;
    } else if (key == "duty_p") {
        if (!common::parse_f64(value, d)) throw bad_value();
        p.duty_p = d;
    } else if (key == "pareto_alpha") {
        if (!common::parse_f64(value, d)) throw bad_value();
        p.pareto_alpha = d;
    } else if (key == "pareto_xmin") {
        if (!common::parse_f64(value, d)) throw bad_value();
        p.pareto_xmin = d;
    } else if (key == "sink_addr") {
        p.sink_addr = std::string(value);
    } else if (key == "rng_seed") {
        if (!common::parse_u64(value, u)) throw bad_value();
        p.rng_seed = u;
    } else if (key == "slot_ms") {
        if (!common::parse_i64(value, i)) throw bad_value();
        p.slot_ms = static_cast<int>(i);
    } else if (key == "connect_timeout_s") {
        if (!common::parse_f64(value, d)) throw bad_value();
        p.connect_timeout_s = d;
    } else {
        throw std::invalid_argument(where + ": unknown config key '" + std::string(key) + "'");
    }
}

void apply_line(LoadParams& p, std::string_view line, const std::string& where) {
    size_t eq = line.find('=');
    if (eq == std::string_view::npos)
        throw std::invalid_argument(where + ": expected key=value, got '" + std::string(line) + "'");
    std::string_view key = common::trim(line.substr(0, eq));
    std::string_view value = common::trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument(where + ": empty key");
    apply_entry(p, key, value, where);
}

}  // namespace

LoadParams parse_config(const std::string& file_text, const std::vector<std::string>& overrides) {
    LoadParams params;
    int lineno = 0;
    for (const auto& raw : common::split(file_text, '\n')) {
        ++lineno;
        std::string_view line = common::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        apply_line(params, line, "line " + std::to_string(lineno));
    }
    for (const auto& entry : overrides) {
        apply_line(params, common::trim(entry), "override '" + entry + "'");
    }
    validate(params);
    return params;
}

}  // namespace loadgen
