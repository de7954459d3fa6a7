#include "procmon/grouping.hpp"

#include <stdexcept>

namespace procmon {

GroupingPolicy policy_from_string(const std::string& s) {
    if (s == "all") return GroupingPolicy::AllManagedJobs;
    if (s == "user") return GroupingPolicy::PerUser;
    if (s == "app") return GroupingPolicy::PerApplication;
    throw std::invalid_argument("unknown grouping policy '" + s + "' (want all|user|app)");
}

const char* to_string(GroupingPolicy policy) {
    switch (policy) {
        case GroupingPolicy::AllManagedJobs: return "all";
        case GroupingPolicy::PerUser: return "user";
        case GroupingPolicy::PerApplication: return "app";
    }
    return "?";
}

std::map<std::string, std::set<int64_t>> build_process_groups(const std::vector<ProcessSnapshot>& snapshots,
                                                              const GroupingConfig& config) {
    std::map<std::string, std::set<int64_t>> groups;
    if (config.marker.empty()) return groups;

    std::map<int64_t, const ProcessSnapshot*> by_pid;
    for (const auto& p : snapshots) by_pid.emplace(p.pid, &p);

    auto is_marked = [&](const ProcessSnapshot& p) { return p.command.find(config.marker) != std::string::npos; };

    auto group_key = [&](const ProcessSnapshot& root) -> std::string {
        switch (config.policy) {
            case GroupingPolicy::AllManagedJobs: return "all";
            case GroupingPolicy::PerUser: return std::to_string(root.uid);
            case GroupingPolicy::PerApplication: return root.command;
        }
        return "all";
    };

    for (const auto& p : snapshots) {
        // Walk up the ppid chain to the nearest marked ancestor (or self).
        const ProcessSnapshot* cursor = &p;
        const ProcessSnapshot* marked_root = nullptr;
        std::set<int64_t> walked;
        while (cursor) {
            if (!walked.insert(cursor->pid).second) break;  // ppid cycle guard
            if (is_marked(*cursor)) {
                marked_root = cursor;
                break;
            }
            auto it = by_pid.find(cursor->ppid);
            cursor = (it == by_pid.end() || it->second->pid == cursor->pid) ? nullptr : it->second;
        }
        if (marked_root) groups[group_key(*marked_root)].insert(p.pid);
    }
    return groups;
}

}  // namespace procmon
