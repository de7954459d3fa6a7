#include <csignal>

#include <CLI11.hpp>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <memory>

#include "common/net.hpp"
#include "procmon/sampler.hpp"
#include "wire/transport.hpp"

namespace {

std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop = true; }

// Batches one window's samples into a single metric packet.
class WireEmitter {
public:
    WireEmitter(const wire::TransportConfig& transport, std::string host, bool emit_mem)
        : sender_(transport), host_(std::move(host)), emit_mem_(emit_mem) {}

    void on_sample(const procmon::GroupSample& s) {
        auto gaps = s.gaps > 0 ? std::optional<int64_t>(s.gaps) : std::nullopt;
        if (s.group_id == procmon::kTotalSeries) {
            pending_.push_back(wire::Metric{"cpu.total", s.cpu_percent, "%", std::nullopt, gaps});
        } else if (s.group_id == procmon::kIdleSeries) {
            pending_.push_back(wire::Metric{"cpu.idle", s.cpu_percent, "%", std::nullopt, gaps});
        } else {
            pending_.push_back(wire::Metric{"cpu.attributed", s.cpu_percent, "%", s.group_id, gaps});
            if (emit_mem_)
                pending_.push_back(
                    wire::Metric{"mem.attributed", static_cast<double>(s.mem_bytes), "bytes", s.group_id, std::nullopt});
        }
        ticks_per_s_ = s.ticks_per_s;
    }

    void on_window_end(int64_t t) {
        if (pending_.empty()) return;
        pending_.push_back(wire::Metric{"mon.ticks_per_s", static_cast<double>(ticks_per_s_), "hz", std::nullopt,
                                        std::nullopt});
        wire::MetricPacket packet{host_, t, std::move(pending_)};
        pending_ = {};
        try {
            sender_.send(packet);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "monitord: send failed: %s\n", e.what());
        }
    }

private:
    wire::UdpSender sender_;
    std::string host_;
    bool emit_mem_;
    std::vector<wire::Metric> pending_;
    int ticks_per_s_ = 0;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"per-process resource monitor daemon"};
    int period = 1, window = 15;
    std::string policy = "all", marker = "gridjob", emit, provider_spec = "os", mode = "unicast";
    std::string hostname, metrics = "cpu,mem";
    bool instant = false;
    double footprint_window = 0.0;
    app.add_option("--period", period, "sampling period, seconds");
    app.add_option("--window", window, "averaging window, seconds (multiple of period)");
    app.add_option("--policy", policy, "grouping: all|user|app");
    app.add_option("--marker", marker, "command-line token identifying managed jobs");
    app.add_option("--emit", emit, "host:port to send metric packets to");
    app.add_option("--mode", mode, "unicast|multicast");
    app.add_option("--provider", provider_spec, "os | scripted:<path>");
    app.add_option("--hostname", hostname, "override the host tag in emitted samples");
    app.add_option("--metrics", metrics, "comma list from {cpu,mem}");
    app.add_flag("--instant", instant, "replay a scripted provider without wall-clock pacing");
    app.add_option("--footprint-window", footprint_window,
                   "measure own CPU footprint over this many seconds and exit");
    CLI11_PARSE(app, argc, argv);

    try {
        std::unique_ptr<procmon::ProcessTableProvider> provider;
        bool realtime = true;
        if (provider_spec == "os") {
            provider = std::make_unique<procmon::OsProcProvider>();
        } else if (provider_spec.rfind("scripted:", 0) == 0) {
            provider = std::make_unique<procmon::ScriptedProvider>(
                procmon::ScriptedProvider::from_file(provider_spec.substr(9)));
            realtime = !instant;
        } else {
            throw std::invalid_argument("unknown provider '" + provider_spec + "'");
        }

        if (footprint_window > 0.0) {
            double pct = procmon::measure_self_footprint(*provider, footprint_window, period * 1000);
            std::printf("self_footprint_percent=%.4f\n", pct);
            return 0;
        }

        procmon::SamplerConfig config;
        config.period_s = period;
        config.window_s = window;
        config.grouping.policy = procmon::policy_from_string(policy);
        config.grouping.marker = marker;
        config.host = hostname;
        config.measure_cpu = metrics.find("cpu") != std::string::npos;
        config.measure_mem = metrics.find("mem") != std::string::npos;
        procmon::validate(config);

        if (emit.empty()) throw std::invalid_argument("--emit host:port is required");
        auto hp = common::parse_host_port(emit);
        wire::TransportConfig transport;
        transport.mode = wire::transport_mode_from_string(mode);
        transport.addr = hp.host;
        transport.port = hp.port;

        WireEmitter emitter(transport, hostname.empty() ? common::local_hostname() : hostname,
                            config.measure_mem);
        procmon::SamplerHooks hooks;
        hooks.emit = [&emitter](const procmon::GroupSample& s) { emitter.on_sample(s); };
        hooks.window_end = [&emitter](int64_t t) { emitter.on_window_end(t); };

        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        std::fprintf(stderr, "monitord: sampling every %ds, emitting %ds windows to %s\n", period, window,
                     emit.c_str());
        procmon::run_sampler(config, *provider, hooks, &g_stop, realtime);
    } catch (const std::exception& e) {
        std::cerr << "monitord: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
