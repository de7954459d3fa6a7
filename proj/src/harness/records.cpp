#include "harness/records.hpp"

#include <fstream>
#include <stdexcept>

#include "common/text.hpp"

namespace harness {

double percent_difference(double expected_s, double observed_s) {
    if (!(expected_s > 0.0)) throw std::invalid_argument("expected_s must be > 0");
    return (observed_s - expected_s) / expected_s * 100.0;
}

void write_records_csv(const std::string& path, const std::vector<JobRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write records file " + path);
    out << "job_id,mode,submit_t,start_t,end_t,expected_s,observed_s,status\n";
    for (const auto& r : records) {
        out << r.job_id << ',' << r.mode << ',' << r.submit_t << ',' << r.start_t << ',' << r.end_t << ','
            << r.expected_s << ',' << r.observed_s << ',' << r.status << "\n";
    }
}

std::vector<JobRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read records file " + path);
    std::vector<JobRecord> records;
    std::string line;
    bool first = true;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto trimmed = common::trim(line);
        if (trimmed.empty()) continue;
        if (first) {
            first = false;
            if (trimmed.rfind("job_id,", 0) == 0) continue;  // header
        }
        auto f = common::split(trimmed, ',');
        if (f.size() != 8) throw std::runtime_error(path + " line " + std::to_string(lineno) + ": want 8 columns");
        JobRecord r;
        r.job_id = f[0];
        r.mode = f[1];
        if (!common::parse_i64(f[2], r.submit_t) || !common::parse_i64(f[3], r.start_t) ||
            !common::parse_i64(f[4], r.end_t) || !common::parse_i64(f[5], r.expected_s) ||
            !common::parse_i64(f[6], r.observed_s))
            throw std::runtime_error(path + " line " + std::to_string(lineno) + ": unparsable record");
        r.status = f[7];
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace harness
