#pragma once

#include <string>
#include <utility>
#include <vector>

#include "asnn/eval.hpp"
#include "asnn/network.hpp"

namespace asnn {

enum class BenchBackend { Sequential, Parallel };

const char* to_string(BenchBackend backend);

struct BenchRecord {
    std::string network_id;
    std::uint64_t connections = 0;
    std::uint32_t layers = 0;
    BenchBackend backend = BenchBackend::Sequential;
    std::uint32_t repetitions = 0;
    double mean_time_us = 0.0;
    double stddev_us = 0.0;
};

struct SpeedupRecord {
    std::string network_id;
    std::uint64_t connections = 0;
    std::uint32_t layers = 0;
    double speedup = 0.0; // sequential mean / parallel mean
};

struct BenchCase {
    std::string id;
    Network network;
};

// Measurement protocol: sequential runs 5 times, parallel 10, each after
// `warmup` untimed runs. Preprocessing (segment + flatten) stays outside the
// timed region unless include_preprocessing is set.
struct BenchProtocol {
    std::uint32_t reps_sequential = 5;
    std::uint32_t reps_parallel = 10;
    std::uint32_t warmup = 1;
    bool include_preprocessing = false;
    float input_value = 0.5f;
};

struct BenchFailure {
    std::string network_id;
    std::string reason;
};

struct BenchResult {
    std::vector<BenchRecord> records;
    std::vector<SpeedupRecord> speedups;
    std::vector<BenchFailure> failures;
};

// Times both backends over the corpus, one network at a time (no overlapping
// timed regions). Per-network failures are recorded and skipped, not fatal.
BenchResult run_bench(const std::vector<BenchCase>& corpus, const ParallelConfig& cfg,
                      const BenchProtocol& protocol = {});

// Writes <prefix>.timings.csv and <prefix>.speedup.csv with fixed headers and
// deterministic row order (network_id ascending, sequential before parallel).
void write_csv(const std::vector<BenchRecord>& records,
               const std::vector<SpeedupRecord>& speedups, const std::string& prefix);

// Writes <prefix>.meta as key=value lines.
void write_meta(const std::string& prefix,
                const std::vector<std::pair<std::string, std::string>>& entries);

} // namespace asnn
