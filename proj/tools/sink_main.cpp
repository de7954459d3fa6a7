#include <csignal>

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <thread>

#include "loadgen/sink.hpp"

namespace {
std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop = true; }
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"receive-and-discard byte sink for network loading"};
    std::string listen = "0.0.0.0:9009";
    app.add_option("--listen", listen, "host:port to listen on");
    CLI11_PARSE(app, argc, argv);

    try {
        loadgen::ByteSink sink(listen);
        sink.start();
        std::fprintf(stderr, "sink: listening on %s\n", listen.c_str());

        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));

        sink.stop();
        std::printf("sink: received %llu bytes over %llu connections\n",
                    static_cast<unsigned long long>(sink.total_bytes()),
                    static_cast<unsigned long long>(sink.connections()));
    } catch (const std::exception& e) {
        std::cerr << "sink: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
