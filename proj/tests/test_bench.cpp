#include "doctest.h"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "asnn/bench.hpp"
#include "asnn/io.hpp"
#include "test_helpers.hpp"

using namespace asnn;
using namespace testutil;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

double to_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    REQUIRE(res.ec == std::errc{});
    return v;
}

} // namespace

TEST_CASE("run_bench: record arity and default protocol on one network") {
    std::vector<BenchCase> corpus{{"tiny", fixture_two_in_one_out()}};
    const BenchResult result = run_bench(corpus, ParallelConfig{});
    REQUIRE(result.records.size() == 2);
    REQUIRE(result.speedups.size() == 1);
    CHECK(result.failures.empty());

    const auto& seq = result.records[0];
    const auto& par = result.records[1];
    CHECK(seq.backend == BenchBackend::Sequential);
    CHECK(seq.repetitions == 5);
    CHECK(par.backend == BenchBackend::Parallel);
    CHECK(par.repetitions == 10);
    CHECK(seq.connections == 2);
    CHECK(seq.layers == 2);
    CHECK(seq.mean_time_us > 0.0);
    CHECK(par.mean_time_us > 0.0);

    // Speedup is definitionally the ratio of the two means.
    const double expected = seq.mean_time_us / par.mean_time_us;
    CHECK(std::abs(result.speedups[0].speedup - expected) <= 1e-9 * std::abs(expected));
}

TEST_CASE("run_bench: protocol overrides are honored") {
    BenchProtocol protocol;
    protocol.reps_sequential = 3;
    protocol.reps_parallel = 4;
    protocol.warmup = 2;
    std::vector<BenchCase> corpus{{"tiny", fixture_two_in_one_out()}};
    const BenchResult result = run_bench(corpus, ParallelConfig{}, protocol);
    CHECK(result.records[0].repetitions == 3);
    CHECK(result.records[1].repetitions == 4);
}

TEST_CASE("run_bench records failures instead of aborting the sweep") {
    Network broken = make_network({0}, {2}, {{3, 2, 1.0f}}, {0}); // output unreachable
    std::vector<BenchCase> corpus{{"bad", broken}, {"good", fixture_two_in_one_out()}};
    const BenchResult result = run_bench(corpus, ParallelConfig{});
    REQUIRE(result.failures.size() == 1);
    CHECK(result.failures[0].network_id == "bad");
    CHECK(result.records.size() == 2); // the good network still ran
    CHECK(result.speedups.size() == 1);
}

TEST_CASE("run_bench can include preprocessing in the timed region") {
    std::vector<BenchCase> corpus{{"tiny", fixture_skip_connection()}};
    BenchProtocol protocol;
    protocol.include_preprocessing = true;
    const BenchResult result = run_bench(corpus, ParallelConfig{}, protocol);
    CHECK(result.records.size() == 2);
    CHECK(result.failures.empty());
}

TEST_CASE("write_csv: exact headers, row order, parse-back fidelity") {
    const auto prefix = (std::filesystem::temp_directory_path() / "asnn_bench_test").string();

    std::vector<BenchRecord> records{
        {"b", 10, 3, BenchBackend::Parallel, 10, 12.5, 0.25},
        {"a", 20, 4, BenchBackend::Parallel, 10, 8.125, 0.0},
        {"a", 20, 4, BenchBackend::Sequential, 5, 3.0625, 0.5},
        {"b", 10, 3, BenchBackend::Sequential, 5, 7.75, 1.125},
    };
    std::vector<SpeedupRecord> speedups{
        {"b", 10, 3, 7.75 / 12.5},
        {"a", 20, 4, 3.0625 / 8.125},
    };
    write_csv(records, speedups, prefix);

    const auto timing_lines = split_lines(read_file(prefix + ".timings.csv"));
    REQUIRE(timing_lines.size() == 5);
    CHECK(timing_lines[0] == "network_id,connections,layers,backend,repetitions,mean_time_us,stddev_us");
    // network_id ascending, sequential before parallel
    CHECK(split_csv_line(timing_lines[1])[0] == "a");
    CHECK(split_csv_line(timing_lines[1])[3] == "sequential");
    CHECK(split_csv_line(timing_lines[2])[3] == "parallel");
    CHECK(split_csv_line(timing_lines[3])[0] == "b");
    CHECK(split_csv_line(timing_lines[3])[3] == "sequential");

    // Every numeric field parses back to the exact stored value.
    const auto row = split_csv_line(timing_lines[1]);
    CHECK(to_double(row[1]) == 20.0);
    CHECK(to_double(row[2]) == 4.0);
    CHECK(to_double(row[4]) == 5.0);
    CHECK(to_double(row[5]) == 3.0625);
    CHECK(to_double(row[6]) == 0.5);

    const auto speedup_lines = split_lines(read_file(prefix + ".speedup.csv"));
    REQUIRE(speedup_lines.size() == 3);
    CHECK(speedup_lines[0] == "network_id,connections,layers,speedup");
    CHECK(split_csv_line(speedup_lines[1])[0] == "a");
    CHECK(to_double(split_csv_line(speedup_lines[1])[3]) == 3.0625 / 8.125);
    CHECK(to_double(split_csv_line(speedup_lines[2])[3]) == 7.75 / 12.5);

    std::filesystem::remove(prefix + ".timings.csv");
    std::filesystem::remove(prefix + ".speedup.csv");
}

TEST_CASE("write_csv: empty record set leaves only the headers") {
    const auto prefix = (std::filesystem::temp_directory_path() / "asnn_bench_empty").string();
    write_csv({}, {}, prefix);
    CHECK(read_file(prefix + ".timings.csv") ==
          "network_id,connections,layers,backend,repetitions,mean_time_us,stddev_us\n");
    CHECK(read_file(prefix + ".speedup.csv") == "network_id,connections,layers,speedup\n");
    std::filesystem::remove(prefix + ".timings.csv");
    std::filesystem::remove(prefix + ".speedup.csv");
}

TEST_CASE("write_meta emits key=value lines") {
    const auto prefix = (std::filesystem::temp_directory_path() / "asnn_meta_test").string();
    write_meta(prefix, {{"workers", "2"}, {"warmup_runs", "1"}});
    CHECK(read_file(prefix + ".meta") == "workers=2\nwarmup_runs=1\n");
    std::filesystem::remove(prefix + ".meta");
}
