#include "tsrkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "tsrkit/errors.hpp"

namespace tsrkit {

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw Error(Errc::empty_source, "percentile of an empty sample");
    q = std::clamp(q, 0.0, 1.0);
    std::sort(values.begin(), values.end());
    // Nearest rank: the ceil(q * n)-th smallest value, 1-based.
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    if (rank == 0) rank = 1;
    return values[rank - 1];
}

BenchReport summarize_latencies(const std::string& model, const std::string& host, int threads,
                                const std::vector<double>& latencies_ms, double wall_s) {
    if (latencies_ms.empty()) throw Error(Errc::empty_source, "no frames were measured");

    BenchReport report;
    report.model = model;
    report.host = host;
    report.threads = threads;
    report.frames = static_cast<long>(latencies_ms.size());
    report.wall_s = wall_s;
    report.fps = wall_s > 0.0 ? static_cast<double>(report.frames) / wall_s : 0.0;
    report.p50_ms = percentile(latencies_ms, 0.50);
    report.p90_ms = percentile(latencies_ms, 0.90);
    report.p99_ms = percentile(latencies_ms, 0.99);
    return report;
}

BenchReport run_benchmark(const std::string& model, const std::string& host, long frame_count,
                          int warmup, int threads, const std::function<void(long)>& process) {
    if (frame_count <= 0) throw Error(Errc::empty_source, "no frames to benchmark");
    threads = std::max(1, threads);

    using clock = std::chrono::steady_clock;
    for (int i = 0; i < warmup; ++i) process(i % frame_count);

    std::vector<double> latencies(static_cast<std::size_t>(frame_count));
    const auto wall_start = clock::now();
    if (threads == 1) {
        for (long i = 0; i < frame_count; ++i) {
            const auto t0 = clock::now();
            process(i);
            latencies[i] = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (long i = t; i < frame_count; i += threads) {
                    const auto t0 = clock::now();
                    process(i);
                    latencies[i] =
                        std::chrono::duration<double, std::milli>(clock::now() - t0).count();
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }
    const double wall_s = std::chrono::duration<double>(clock::now() - wall_start).count();

    return summarize_latencies(model, host, threads, latencies, wall_s);
}

std::string BenchReport::to_json() const {
    nlohmann::json j;
    j["model"] = model;
    j["host"] = host;
    j["threads"] = threads;
    j["frames"] = frames;
    j["wall_s"] = wall_s;
    j["fps"] = fps;
    j["p50_ms"] = p50_ms;
    j["p90_ms"] = p90_ms;
    j["p99_ms"] = p99_ms;
    return j.dump();
}

} // namespace tsrkit
