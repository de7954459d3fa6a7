#include "rrdb/rrdb.hpp"

#include <algorithm>
#include <stdexcept>

#include "common/text.hpp"

namespace rrdb {

std::vector<LayerSpec> parse_layer_specs(const std::string& text) {
    std::vector<LayerSpec> specs;
    for (const auto& part : common::split(text, ',')) {
        auto fields = common::split(common::trim(part), 'x');
        int64_t res = 0, count = 0;
        if (fields.size() != 2 || !common::parse_i64(fields[0], res) || !common::parse_i64(fields[1], count))
            throw std::invalid_argument("bad layer spec '" + std::string(part) + "' (want RESxCOUNT)");
        specs.push_back(LayerSpec{res, count});
    }
    validate_layer_specs(specs);
    return specs;
}

void validate_layer_specs(const std::vector<LayerSpec>& specs) {
    if (specs.empty()) throw std::invalid_argument("at least one layer is required");
    for (const auto& s : specs) {
        if (s.resolution_s <= 0 || s.slot_count <= 0)
            throw std::invalid_argument("layer resolution and slot count must be positive");
    }
    for (size_t i = 1; i < specs.size(); ++i) {
        if (specs[i].resolution_s % specs[i - 1].resolution_s != 0)
            throw std::invalid_argument("layer resolution " + std::to_string(specs[i].resolution_s) +
                                        " is not a multiple of " + std::to_string(specs[i - 1].resolution_s));
        int64_t span_prev = specs[i - 1].resolution_s * specs[i - 1].slot_count;
        int64_t span = specs[i].resolution_s * specs[i].slot_count;
        if (span <= span_prev)
            throw std::invalid_argument("layer spans must strictly increase (" + std::to_string(span) +
                                        " after " + std::to_string(span_prev) + ")");
    }
}

RoundRobinDb::RoundRobinDb(SeriesKey key, std::vector<LayerSpec> specs) : key_(std::move(key)) {
    validate_layer_specs(specs);
    layers_.reserve(specs.size());
    for (const auto& s : specs) {
        Layer layer;
        layer.res = s.resolution_s;
        layer.slots.resize(static_cast<size_t>(s.slot_count));
        layers_.push_back(std::move(layer));
    }
}

RoundRobinDb::InsertResult RoundRobinDb::insert(int64_t t, double value) {
    if (t < 0) throw std::invalid_argument("timestamp must be non-negative");
    const Layer& fine = layers_.front();
    if (max_t_ >= 0 && t / fine.res < fine.window_start(std::max(max_t_, t)) / fine.res)
        return InsertResult::Stale;

    for (auto& layer : layers_) {
        int64_t slot_start = (t / layer.res) * layer.res;
        Slot& slot = layer.slot_for(slot_start);
        if (slot.start_t != slot_start) {
            slot.sum = 0.0;
            slot.count = 0;
            slot.start_t = slot_start;
        }
        slot.sum += value;
        slot.count += 1;
    }
    max_t_ = std::max(max_t_, t);
    return InsertResult::Ok;
}

const RoundRobinDb::Layer* RoundRobinDb::pick_layer(int64_t t_from, std::optional<int64_t> want_resolution_s) const {
    const Layer* fallback = nullptr;
    for (const auto& layer : layers_) {
        if (want_resolution_s && layer.res < *want_resolution_s) continue;
        fallback = &layer;
        if (t_from >= layer.window_start(max_t_)) return &layer;
    }
    // No layer retains the whole range; answer what the coarsest can.
    return fallback ? fallback : &layers_.back();
}

std::vector<RoundRobinDb::Point> RoundRobinDb::query(int64_t t_from, int64_t t_to,
                                                     std::optional<int64_t> want_resolution_s) const {
    if (t_from > t_to) throw std::invalid_argument("query range start exceeds end");
    std::vector<Point> out;
    if (empty()) return out;

    const Layer& layer = *pick_layer(std::max<int64_t>(t_from, 0), want_resolution_s);
    int64_t first = std::max<int64_t>(t_from / layer.res, layer.window_start(max_t_) / layer.res);
    int64_t last = std::min(t_to / layer.res, max_t_ / layer.res);
    for (int64_t sn = first; sn <= last; ++sn) {
        const Slot& slot = layer.slot_for(sn * layer.res);
        if (slot.count > 0 && slot.start_t == sn * layer.res)
            out.push_back(Point{slot.start_t, slot.sum / static_cast<double>(slot.count), layer.res});
    }
    return out;
}

RoundRobinDb::ExportStats RoundRobinDb::export_high_frequency(
    int64_t t_from, int64_t t_to, const std::function<void(const ExportRecord&)>& writer) {
    ExportStats stats;
    if (empty() || t_from > t_to) return stats;

    const Layer& fine = layers_.front();
    int64_t window_start = fine.window_start(max_t_);
    int64_t first = std::max(t_from / fine.res, window_start / fine.res);
    int64_t last = std::min(t_to / fine.res, max_t_ / fine.res);

    // Slots between the high-water mark and the retained window were
    // overwritten before they could be exported.
    if (export_high_water_ >= 0 && window_start > export_high_water_ + fine.res)
        stats.gap_slots = (window_start - export_high_water_) / fine.res - 1;

    for (int64_t sn = first; sn <= last; ++sn) {
        int64_t slot_start = sn * fine.res;
        if (slot_start <= export_high_water_) continue;  // already durable
        const Slot& slot = fine.slot_for(slot_start);
        if (slot.count > 0 && slot.start_t == slot_start) {
            writer(ExportRecord{slot_start, key_, slot.sum / static_cast<double>(slot.count), fine.res});
            ++stats.records;
        }
        export_high_water_ = std::max(export_high_water_, slot_start);
    }
    return stats;
}

size_t RoundRobinDb::footprint_bytes() const {
    size_t bytes = 0;
    for (const auto& layer : layers_) bytes += layer.slots.capacity() * sizeof(Slot);
    return bytes;
}

}  // namespace rrdb
