#include "asnn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include "asnn/errors.hpp"
#include "asnn/io.hpp"
#include "asnn/segmentation.hpp"

namespace asnn {

const char* to_string(BenchBackend backend) {
    return backend == BenchBackend::Sequential ? "sequential" : "parallel";
}

namespace {

using Clock = std::chrono::steady_clock;

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};

Stats mean_stddev(const std::vector<double>& samples) {
    Stats stats;
    for (double s : samples) stats.mean += s;
    stats.mean /= static_cast<double>(samples.size());
    if (samples.size() > 1) {
        double acc = 0.0;
        for (double s : samples) acc += (s - stats.mean) * (s - stats.mean);
        stats.stddev = std::sqrt(acc / static_cast<double>(samples.size() - 1));
    }
    return stats;
}

} // namespace

BenchResult run_bench(const std::vector<BenchCase>& corpus, const ParallelConfig& cfg,
                      const BenchProtocol& protocol) {
    BenchResult result;

    for (const BenchCase& bench_case : corpus) {
        const Network& net = bench_case.network;
        try {
            const RequiredSet required = compute_required(net);
            const LayerAssignment assignment = segment(net, required);
            const LayeredLayout layout = flatten(net, assignment);

            const std::vector<float> inputs(layout.input_order.size(), protocol.input_value);
            const std::uint32_t layers = static_cast<std::uint32_t>(depth(assignment));
            const std::uint64_t connections = net.connections.size();

            auto timed_reps = [&](BenchBackend backend, std::uint32_t reps) {
                auto run_once = [&] {
                    if (protocol.include_preprocessing) {
                        const RequiredSet req = compute_required(net);
                        const LayerAssignment assign = segment(net, req);
                        const LayeredLayout flat = flatten(net, assign);
                        return backend == BenchBackend::Sequential
                                   ? eval_sequential(flat, inputs)
                                   : eval_parallel(flat, inputs, cfg);
                    }
                    return backend == BenchBackend::Sequential ? eval_sequential(layout, inputs)
                                                               : eval_parallel(layout, inputs, cfg);
                };
                for (std::uint32_t w = 0; w < protocol.warmup; ++w) (void)run_once();
                std::vector<double> samples;
                samples.reserve(reps);
                for (std::uint32_t r = 0; r < reps; ++r) {
                    const auto t0 = Clock::now();
                    (void)run_once();
                    const auto t1 = Clock::now();
                    samples.push_back(
                        std::chrono::duration<double, std::micro>(t1 - t0).count());
                }
                return samples;
            };

            const auto seq_samples = timed_reps(BenchBackend::Sequential, protocol.reps_sequential);
            const auto par_samples = timed_reps(BenchBackend::Parallel, protocol.reps_parallel);
            const Stats seq = mean_stddev(seq_samples);
            const Stats par = mean_stddev(par_samples);

            if (seq.mean <= 0.0 || par.mean <= 0.0)
                throw std::runtime_error("nonpositive duration from monotonic clock");

            result.records.push_back({bench_case.id, connections, layers,
                                      BenchBackend::Sequential, protocol.reps_sequential, seq.mean,
                                      seq.stddev});
            result.records.push_back({bench_case.id, connections, layers, BenchBackend::Parallel,
                                      protocol.reps_parallel, par.mean, par.stddev});
            result.speedups.push_back({bench_case.id, connections, layers, seq.mean / par.mean});
        } catch (const std::exception& e) {
            result.failures.push_back({bench_case.id, e.what()});
        }
    }
    return result;
}

void write_csv(const std::vector<BenchRecord>& records,
               const std::vector<SpeedupRecord>& speedups, const std::string& prefix) {
    auto sorted_records = records;
    std::sort(sorted_records.begin(), sorted_records.end(),
              [](const BenchRecord& a, const BenchRecord& b) {
                  if (a.network_id != b.network_id) return a.network_id < b.network_id;
                  return a.backend < b.backend; // Sequential enumerates before Parallel
              });
    auto sorted_speedups = speedups;
    std::sort(sorted_speedups.begin(), sorted_speedups.end(),
              [](const SpeedupRecord& a, const SpeedupRecord& b) {
                  return a.network_id < b.network_id;
              });

    const std::string timings_path = prefix + ".timings.csv";
    std::ofstream timings(timings_path, std::ios::binary);
    if (!timings) throw IoError("cannot open " + timings_path + " for writing");
    timings << "network_id,connections,layers,backend,repetitions,mean_time_us,stddev_us\n";
    for (const auto& r : sorted_records) {
        timings << r.network_id << ',' << r.connections << ',' << r.layers << ','
                << to_string(r.backend) << ',' << r.repetitions << ','
                << format_double(r.mean_time_us) << ',' << format_double(r.stddev_us) << '\n';
    }
    if (!timings.flush()) throw IoError("failed writing " + timings_path);

    const std::string speedup_path = prefix + ".speedup.csv";
    std::ofstream speedup(speedup_path, std::ios::binary);
    if (!speedup) throw IoError("cannot open " + speedup_path + " for writing");
    speedup << "network_id,connections,layers,speedup\n";
    for (const auto& s : sorted_speedups) {
        speedup << s.network_id << ',' << s.connections << ',' << s.layers << ','
                << format_double(s.speedup) << '\n';
    }
    if (!speedup.flush()) throw IoError("failed writing " + speedup_path);
}

void write_meta(const std::string& prefix,
                const std::vector<std::pair<std::string, std::string>>& entries) {
    const std::string path = prefix + ".meta";
    std::ofstream meta(path, std::ios::binary);
    if (!meta) throw IoError("cannot open " + path + " for writing");
    for (const auto& [key, value] : entries) meta << key << '=' << value << '\n';
    if (!meta.flush()) throw IoError("failed writing " + path);
}

} // namespace asnn
