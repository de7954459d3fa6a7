#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "procmon/snapshot.hpp"

namespace procmon {

enum class GroupingPolicy { AllManagedJobs, PerUser, PerApplication };

GroupingPolicy policy_from_string(const std::string& s);
const char* to_string(GroupingPolicy policy);

struct GroupingConfig {
    GroupingPolicy policy = GroupingPolicy::AllManagedJobs;
    std::string marker;  // command-line token identifying managed jobs
};

// A pid is grouped iff its command carries the marker or it is a descendant
// (transitive ppid closure) of a marked pid. Group keys: "all" for
// AllManagedJobs; the nearest marked ancestor's uid for PerUser; its command
// for PerApplication. A marked pid is its own nearest marked ancestor.
std::map<std::string, std::set<int64_t>> build_process_groups(const std::vector<ProcessSnapshot>& snapshots,
                                                              const GroupingConfig& config);

}  // namespace procmon
