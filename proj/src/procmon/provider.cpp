#include "procmon/provider.hpp"

#include <dirent.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "common/text.hpp"

namespace procmon {

Scan scan_process_table(ProcessTableProvider& provider) {
    Scan scan = provider.snapshot();
    std::set<int64_t> seen;
    std::vector<ProcessSnapshot> unique;
    unique.reserve(scan.processes.size());
    for (auto& p : scan.processes) {
        if (seen.insert(p.pid).second) unique.push_back(std::move(p));
    }
    scan.processes = std::move(unique);
    return scan;
}

OsProcProvider::OsProcProvider() {
    long hz = sysconf(_SC_CLK_TCK);
    if (hz > 0) ticks_per_s_ = static_cast<int>(hz);
    long ncpu = sysconf(_SC_NPROCESSORS_ONLN);
    if (ncpu > 0) cpu_count_ = static_cast<int>(ncpu);
    long page = sysconf(_SC_PAGESIZE);
    if (page > 0) page_size_ = page;
}

namespace {

// /proc/<pid>/stat: pid (comm) state ppid ... utime(14) stime(15) ... rss(24)
bool parse_proc_stat(const std::string& text, ProcessSnapshot& out, std::string& comm, long page_size) {
    size_t open = text.find('(');
    size_t close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) return false;
    if (!common::parse_i64(common::trim(text.substr(0, open)), out.pid)) return false;
    comm = text.substr(open + 1, close - open - 1);

    std::istringstream rest(text.substr(close + 1));
    std::string field;
    uint64_t utime = 0, stime = 0;
    long rss_pages = 0;
    // fields counted from 3 ("state"); utime=14, stime=15, rss=24
    for (int idx = 3; rest >> field; ++idx) {
        switch (idx) {
            case 4: {
                int64_t ppid = 0;
                if (!common::parse_i64(field, ppid)) return false;
                out.ppid = ppid;
                break;
            }
            case 14: utime = std::strtoull(field.c_str(), nullptr, 10); break;
            case 15: stime = std::strtoull(field.c_str(), nullptr, 10); break;
            case 24: rss_pages = std::strtol(field.c_str(), nullptr, 10); break;
            default: break;
        }
        if (idx >= 24) break;
    }
    out.cpu_ticks = utime + stime;
    out.resident_bytes = rss_pages > 0 ? static_cast<uint64_t>(rss_pages) * static_cast<uint64_t>(page_size) : 0;
    return true;
}

std::string read_cmdline(const std::string& pid_dir, const std::string& comm) {
    std::ifstream in(pid_dir + "/cmdline", std::ios::binary);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    for (auto& c : raw)
        if (c == '\0') c = ' ';
    std::string cmd(common::trim(raw));
    if (cmd.empty()) cmd = "[" + comm + "]";
    return cmd;
}

bool read_system_totals(SystemTotals& totals) {
    std::ifstream in("/proc/stat");
    std::string line;
    if (!std::getline(in, line)) return false;
    std::istringstream ss(line);
    std::string tag;
    uint64_t user = 0, nice = 0, system = 0, idle = 0, iowait = 0, irq = 0, softirq = 0, steal = 0;
    ss >> tag >> user >> nice >> system >> idle >> iowait >> irq >> softirq >> steal;
    if (tag != "cpu") return false;
    totals.busy_ticks = user + nice + system + irq + softirq + steal;
    totals.idle_ticks = idle + iowait;
    return true;
}

}  // namespace

Scan OsProcProvider::snapshot() {
    Scan scan;
    scan.t = static_cast<int64_t>(::time(nullptr));

    if (!read_system_totals(scan.totals)) throw ProviderError("cannot read /proc/stat");

    DIR* dir = ::opendir("/proc");
    if (!dir) throw ProviderError("cannot open /proc");
    while (dirent* entry = ::readdir(dir)) {
        const char* name = entry->d_name;
        if (!std::isdigit(static_cast<unsigned char>(name[0]))) continue;
        std::string pid_dir = std::string("/proc/") + name;

        std::ifstream stat_file(pid_dir + "/stat");
        std::string stat_text;
        if (!std::getline(stat_file, stat_text)) continue;  // process vanished

        ProcessSnapshot snap;
        std::string comm;
        if (!parse_proc_stat(stat_text, snap, comm, page_size_)) continue;
        snap.command = read_cmdline(pid_dir, comm);
        snap.snapshot_time = scan.t;

        struct stat st {};
        if (::stat(pid_dir.c_str(), &st) == 0) snap.uid = static_cast<int64_t>(st.st_uid);

        scan.processes.push_back(std::move(snap));
    }
    ::closedir(dir);
    return scan;
}

ScriptedProvider ScriptedProvider::from_text(const std::string& text, bool loop) {
    ScriptedProvider provider;
    provider.loop_ = loop;

    std::map<int64_t, Scan> frames;
    std::set<int64_t> have_totals;
    int lineno = 0;
    for (const auto& raw : common::split(text, '\n')) {
        ++lineno;
        std::string_view line = common::trim(raw);
        const std::string where = "scripted line " + std::to_string(lineno);
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body = common::trim(line.substr(1));
            int64_t v = 0;
            if (body.rfind("ticks_per_s=", 0) == 0 && common::parse_i64(body.substr(12), v))
                provider.ticks_per_s_ = static_cast<int>(v);
            if (body.rfind("ncpus=", 0) == 0 && common::parse_i64(body.substr(6), v))
                provider.cpu_count_ = static_cast<int>(v);
            continue;
        }
        auto fields = common::split(line, ',');
        int64_t t = 0;
        if (fields.size() < 2 || !common::parse_i64(common::trim(fields[0]), t))
            throw std::invalid_argument(where + ": bad timestamp");
        Scan& frame = frames[t];
        frame.t = t;

        if (common::trim(fields[1]) == "TOTAL") {
            uint64_t busy = 0, idle = 0;
            if (fields.size() != 4 || !common::parse_u64(common::trim(fields[2]), busy) ||
                !common::parse_u64(common::trim(fields[3]), idle))
                throw std::invalid_argument(where + ": TOTAL row wants t,TOTAL,busy_ticks,idle_ticks");
            frame.totals = SystemTotals{busy, idle};
            have_totals.insert(t);
        } else {
            if (fields.size() != 7)
                throw std::invalid_argument(where + ": want t,pid,ppid,uid,command,cpu_ticks,resident_bytes");
            ProcessSnapshot p;
            if (!common::parse_i64(common::trim(fields[1]), p.pid) ||
                !common::parse_i64(common::trim(fields[2]), p.ppid) ||
                !common::parse_i64(common::trim(fields[3]), p.uid) ||
                !common::parse_u64(common::trim(fields[5]), p.cpu_ticks) ||
                !common::parse_u64(common::trim(fields[6]), p.resident_bytes))
                throw std::invalid_argument(where + ": unparsable process row");
            p.command = std::string(common::trim(fields[4]));
            p.snapshot_time = t;
            frame.processes.push_back(std::move(p));
        }
    }

    for (const auto& [t, frame] : frames) {
        (void)frame;
        if (!have_totals.count(t))
            throw std::invalid_argument("scripted timeline: t=" + std::to_string(t) + " has no TOTAL row");
    }
    for (auto& [t, frame] : frames) {
        (void)t;
        provider.frames_.push_back(std::move(frame));
    }
    if (provider.frames_.empty()) throw std::invalid_argument("scripted timeline is empty");
    return provider;
}

ScriptedProvider ScriptedProvider::from_file(const std::string& path, bool loop) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scripted timeline " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_text(text, loop);
}

Scan ScriptedProvider::snapshot() {
    if (index_ >= frames_.size()) {
        if (!loop_) throw ProviderError("scripted timeline exhausted");
        int64_t span = frames_.back().t - frames_.front().t + 1;
        loop_offset_ += span;
        index_ = 0;
    }
    Scan scan = frames_[index_++];
    scan.t += loop_offset_;
    for (auto& p : scan.processes) p.snapshot_time = scan.t;
    return scan;
}

}  // namespace procmon
