#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rrdb {

struct LayerSpec {
    int64_t resolution_s = 0;  // seconds per slot
    int64_t slot_count = 0;
};

// Parses "1x900,15x960,300x1152". Throws std::invalid_argument.
std::vector<LayerSpec> parse_layer_specs(const std::string& text);

// Each successive resolution must be an integer multiple of the previous
// one and layer spans must strictly increase. Throws std::invalid_argument.
void validate_layer_specs(const std::vector<LayerSpec>& specs);

inline std::vector<LayerSpec> default_layer_specs() {
    return {{1, 900}, {15, 960}, {300, 1152}};  // 15 min / 4 h / 4 days
}

struct SeriesKey {
    std::string host;
    std::string metric;
    std::string group;  // empty for host-level series

    auto operator<=>(const SeriesKey&) const = default;
};

struct ExportRecord {
    int64_t t = 0;
    SeriesKey key;
    double value = 0.0;
    int64_t resolution_s = 0;
};

// Fixed-memory layered wheel store. Values accumulate as (sum, count) into
// the covering slot of every layer, so a coarse slot is always the exact
// arithmetic mean of the raw values that fell in its interval; slots whose
// time range has wrapped are overwritten in place. Total slot memory is
// fixed at creation.
class RoundRobinDb {
public:
    RoundRobinDb(SeriesKey key, std::vector<LayerSpec> specs);

    enum class InsertResult { Ok, Stale };

    // t older than the finest layer's retained window is rejected as stale
    // and the store is unchanged; out-of-order but in-window inserts land in
    // their correct slot. Negative t throws std::invalid_argument.
    InsertResult insert(int64_t t, double value);

    struct Point {
        int64_t t = 0;
        double value = 0.0;
        int64_t resolution_s = 0;
    };

    // Serves [t_from, t_to] from the finest layer whose retained window
    // covers the full range (if want_resolution_s is set, the finest layer
    // at or coarser than it). Empty slots are omitted. A range entirely
    // older than the coarsest layer yields an empty result.
    // Throws std::invalid_argument when t_from > t_to.
    std::vector<Point> query(int64_t t_from, int64_t t_to,
                             std::optional<int64_t> want_resolution_s = std::nullopt) const;

    struct ExportStats {
        size_t records = 0;
        int64_t gap_slots = 0;  // unexported fine slots lost to wrap since last export
    };

    // Streams finest-layer slots in [t_from, t_to] to the writer as
    // ExportRecords. Idempotent per slot: slots at or below the high-water
    // mark are skipped on re-export.
    ExportStats export_high_frequency(int64_t t_from, int64_t t_to,
                                      const std::function<void(const ExportRecord&)>& writer);

    const SeriesKey& key() const { return key_; }
    int64_t last_t() const { return max_t_; }
    bool empty() const { return max_t_ < 0; }
    int64_t finest_resolution_s() const { return layers_.front().res; }
    int64_t export_high_water() const { return export_high_water_; }

    // Bytes held in slot storage; constant for the life of the database.
    size_t footprint_bytes() const;

private:
    struct Slot {
        double sum = 0.0;
        int64_t count = 0;
        int64_t start_t = -1;  // -1: never written
    };

    struct Layer {
        int64_t res = 0;
        std::vector<Slot> slots;

        int64_t span() const { return res * static_cast<int64_t>(slots.size()); }
        // Oldest slot start still retained, given the newest timestamp seen.
        int64_t window_start(int64_t max_t) const { return (max_t / res - (static_cast<int64_t>(slots.size()) - 1)) * res; }
        const Slot& slot_for(int64_t slot_start) const { return slots[(slot_start / res) % static_cast<int64_t>(slots.size())]; }
        Slot& slot_for(int64_t slot_start) { return slots[(slot_start / res) % static_cast<int64_t>(slots.size())]; }
    };

    const Layer* pick_layer(int64_t t_from, std::optional<int64_t> want_resolution_s) const;

    SeriesKey key_;
    std::vector<Layer> layers_;  // fine -> coarse
    int64_t max_t_ = -1;
    int64_t export_high_water_ = -1;  // start_t of last exported fine slot
};

}  // namespace rrdb
