#pragma once

#include <functional>
#include <string>
#include <vector>

namespace tsrkit {

struct BenchReport {
    std::string model;
    std::string host;
    int threads = 1;
    long frames = 0;
    double wall_s = 0.0;
    double fps = 0.0;
    double p50_ms = 0.0;
    double p90_ms = 0.0;
    double p99_ms = 0.0;

    std::string to_json() const;
};

// Nearest-rank percentile: the ceil(q * n)-th smallest value. q in (0, 1];
// throws empty_source on an empty sample.
double percentile(std::vector<double> values, double q);

// Statistics over measured per-frame latencies (milliseconds). fps =
// frames / wall_s. Throws empty_source when latencies is empty.
BenchReport summarize_latencies(const std::string& model, const std::string& host,
                                int threads, const std::vector<double>& latencies_ms,
                                double wall_s);

// Runs process(i) for every frame index and times each call. warmup extra
// calls (process(i % frame_count)) run untimed first. threads > 1 processes
// frames concurrently; wall time spans the timed pass only. frame_count
// must be positive (empty_source otherwise).
BenchReport run_benchmark(const std::string& model, const std::string& host,
                          long frame_count, int warmup, int threads,
                          const std::function<void(long)>& process);

} // namespace tsrkit
