#include <csignal>

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include "common/net.hpp"
#include "rrdb/rrdb.hpp"
#include "wire/transport.hpp"

namespace {

std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop = true; }

class Collector {
public:
    Collector(std::vector<rrdb::LayerSpec> layers, std::string export_path)
        : layers_(std::move(layers)), export_path_(std::move(export_path)) {}

    void ingest(const wire::MetricPacket& packet) {
        std::lock_guard<std::mutex> lock(mu_);
        for (const auto& m : packet.metrics) {
            rrdb::SeriesKey key{packet.host, m.name, m.group.value_or("")};
            auto it = dbs_.find(key);
            if (it == dbs_.end()) it = dbs_.emplace(key, rrdb::RoundRobinDb(key, layers_)).first;
            if (it->second.insert(packet.t, m.value) == rrdb::RoundRobinDb::InsertResult::Stale) ++stale_;
        }
    }

    // Exports complete fine slots; `final` also flushes the in-progress slot.
    void export_all(bool final) {
        std::lock_guard<std::mutex> lock(mu_);
        std::ofstream out(export_path_, std::ios::app);
        if (!out) {
            std::fprintf(stderr, "collectord: cannot open %s\n", export_path_.c_str());
            return;
        }
        if (!header_written_) {
            std::ifstream probe(export_path_);
            if (probe.peek() == std::ifstream::traits_type::eof())
                out << "t,host,metric,group,value,resolution_s\n";
            header_written_ = true;
        }
        for (auto& [key, db] : dbs_) {
            if (db.empty()) continue;
            int64_t to = final ? db.last_t() : db.last_t() - db.finest_resolution_s();
            auto stats = db.export_high_frequency(0, to, [&](const rrdb::ExportRecord& rec) {
                char line[512];
                std::snprintf(line, sizeof(line), "%lld,%s,%s,%s,%.6g,%lld\n",
                              static_cast<long long>(rec.t), rec.key.host.c_str(), rec.key.metric.c_str(),
                              rec.key.group.c_str(), rec.value, static_cast<long long>(rec.resolution_s));
                out << line;
            });
            records_ += stats.records;
            gap_slots_ += stats.gap_slots;
        }
    }

    size_t series_count() const { return dbs_.size(); }
    size_t records() const { return records_; }
    uint64_t stale() const { return stale_; }
    int64_t gap_slots() const { return gap_slots_; }

private:
    std::vector<rrdb::LayerSpec> layers_;
    std::string export_path_;
    std::mutex mu_;
    std::map<rrdb::SeriesKey, rrdb::RoundRobinDb> dbs_;
    bool header_written_ = false;
    size_t records_ = 0;
    uint64_t stale_ = 0;
    int64_t gap_slots_ = 0;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metric collector: XML-over-UDP ingest into round-robin storage"};
    std::string listen = "0.0.0.0:8649", mode = "unicast", layers_text = "1x900,15x960,300x1152";
    std::string export_dir = ".";
    int export_every = 30;
    app.add_option("--listen", listen, "addr:port (bind address, or group for multicast)");
    app.add_option("--mode", mode, "unicast|multicast");
    app.add_option("--layers", layers_text, "layer specs, e.g. 1x900,15x960,300x1152");
    app.add_option("--export-dir", export_dir, "directory for metrics.csv");
    app.add_option("--export-every", export_every, "seconds between high-frequency exports");
    CLI11_PARSE(app, argc, argv);

    try {
        auto hp = common::parse_host_port(listen);
        wire::TransportConfig transport;
        transport.mode = wire::transport_mode_from_string(mode);
        transport.addr = hp.host;
        transport.port = hp.port;

        Collector collector(rrdb::parse_layer_specs(layers_text), export_dir + "/metrics.csv");
        wire::UdpReceiver receiver(transport);
        std::fprintf(stderr, "collectord: listening on %s:%u (%s)\n", hp.host.c_str(), receiver.port(),
                     mode.c_str());

        std::thread recv_thread([&] {
            receiver.run([&](const wire::MetricPacket& p) { collector.ingest(p); });
        });

        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        auto last_export = std::chrono::steady_clock::now();
        while (!g_stop) {
            std::this_thread::sleep_for(std::chrono::milliseconds(200));
            auto now = std::chrono::steady_clock::now();
            if (now - last_export >= std::chrono::seconds(export_every)) {
                collector.export_all(false);
                last_export = now;
            }
        }
        receiver.stop();
        recv_thread.join();
        collector.export_all(true);
        std::printf("collectord: %zu series, %zu records exported, %llu stale inserts, %lld wrapped slots, "
                    "%llu datagrams dropped\n",
                    collector.series_count(), collector.records(),
                    static_cast<unsigned long long>(collector.stale()),
                    static_cast<long long>(collector.gap_slots()),
                    static_cast<unsigned long long>(receiver.dropped()));
    } catch (const std::exception& e) {
        std::cerr << "collectord: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
