#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "test_helpers.hpp"

using namespace testutil;

namespace {

namespace fs = std::filesystem;

struct ScratchDir {
    fs::path path;
    ScratchDir() {
        path = fs::temp_directory_path() /
               ("asnn_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("generate writes the file and reports the shape") {
    ScratchDir dir;
    const auto res = run_cli("generate --inputs 2 --outputs 1 --hidden 0 --connections 2 "
                             "--depth 2 --seed 7 -o " + dir.file("f.asnn"));
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("nodes=3 connections=2 depth=2") != std::string::npos);
    CHECK(fs::exists(dir.file("f.asnn")));
}

TEST_CASE("generate is byte-deterministic across invocations") {
    ScratchDir dir;
    const std::string flags = "generate --inputs 3 --outputs 2 --hidden 12 --connections 60 "
                              "--depth 5 --seed 21 -o ";
    REQUIRE(run_cli(flags + dir.file("a.asnn")).exit_code == 0);
    REQUIRE(run_cli(flags + dir.file("b.asnn")).exit_code == 0);
    CHECK(slurp(dir.file("a.asnn")) == slurp(dir.file("b.asnn")));
}

TEST_CASE("generate rejects infeasible specs with exit 2") {
    ScratchDir dir;
    const auto res = run_cli("generate --inputs 2 --outputs 1 --hidden 3 --connections 100 "
                             "--depth 50 -o " + dir.file("x.asnn"));
    CHECK(res.exit_code == 2);
    CHECK(res.output.find("infeasible") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.file("x.asnn")));
}

TEST_CASE("segment prints the layer structure") {
    ScratchDir dir;
    std::ofstream(dir.file("f.asnn"))
        << "asnn 1\ninputs 0 1\noutputs 2\nedge 0 2 0.5\nedge 1 2 -0.25\n";
    const auto res = run_cli("segment " + dir.file("f.asnn"));
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("layers=2 widths=[2,1] unassigned=0") != std::string::npos);

    const auto json = run_cli("segment --json " + dir.file("f.asnn"));
    CHECK(json.exit_code == 0);
    CHECK(json.output.find("\"layers\":[[0,1],[2]]") != std::string::npos);
    CHECK(json.output.find("\"unassigned\":[]") != std::string::npos);
}

TEST_CASE("segment exits 3 when an output is unreachable") {
    ScratchDir dir;
    // Node 3 feeds the output but nothing feeds node 3.
    std::ofstream(dir.file("u.asnn")) << "asnn 1\ninputs 0\noutputs 2\nedge 3 2 1.0\n";
    const auto res = run_cli("segment " + dir.file("u.asnn"));
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("unassigned output") != std::string::npos);
}

TEST_CASE("eval prints identical values for both backends") {
    ScratchDir dir;
    std::ofstream(dir.file("f.asnn"))
        << "asnn 1\ninputs 0 1\noutputs 2\nedge 0 2 0.5\nedge 1 2 -0.25\n";
    const auto seq = run_cli("eval " + dir.file("f.asnn") + " --inputs 0,0 --backend seq");
    const auto par = run_cli("eval " + dir.file("f.asnn") + " --inputs 0,0 --backend par");
    REQUIRE(seq.exit_code == 0);
    REQUIRE(par.exit_code == 0);
    CHECK(seq.output == par.output);
    // sigmoid(0.5*0.5 - 0.25*0.5) = sigmoid(0.125), hand-checked range
    const double value = std::stod(seq.output);
    CHECK(value == doctest::Approx(static_cast<double>(ref_sigmoid(0.125L))).epsilon(1e-6));
}

TEST_CASE("eval maps inputs in declared order on sparse-id files") {
    ScratchDir dir;
    std::ofstream(dir.file("s.asnn"))
        << "asnn 1\ninputs 30 5\noutputs 90\nedge 5 90 1\nedge 30 90 -1\n";
    // Equal inputs cancel through the antisymmetric weights.
    const auto res = run_cli("eval " + dir.file("s.asnn") + " --inputs 0.8,0.8");
    REQUIRE(res.exit_code == 0);
    CHECK(std::stod(res.output) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("eval exits 2 on wrong arity and 3 on segmentation failure") {
    ScratchDir dir;
    std::ofstream(dir.file("f.asnn"))
        << "asnn 1\ninputs 0 1\noutputs 2\nedge 0 2 0.5\nedge 1 2 -0.25\n";
    CHECK(run_cli("eval " + dir.file("f.asnn") + " --inputs 0").exit_code == 2);

    std::ofstream(dir.file("u.asnn")) << "asnn 1\ninputs 0\noutputs 2\nedge 3 2 1.0\n";
    CHECK(run_cli("eval " + dir.file("u.asnn") + " --inputs 0").exit_code == 3);
}

TEST_CASE("CLI usage errors exit 2") {
    CHECK(run_cli("verify --trials 0").exit_code == 2);
    CHECK(run_cli("verify --no-such-flag").exit_code == 2);
    CHECK(run_cli("eval").exit_code == 2);
    CHECK(run_cli("bogus-subcommand").exit_code == 2);
}

TEST_CASE("missing input file exits 1") {
    CHECK(run_cli("segment /does/not/exist.asnn").exit_code == 1);
}

TEST_CASE("malformed network file exits 2") {
    ScratchDir dir;
    std::ofstream(dir.file("bad.asnn")) << "asnn 99\ninputs 0\noutputs 1\n";
    CHECK(run_cli("segment " + dir.file("bad.asnn")).exit_code == 2);
}

TEST_CASE("verify succeeds on the real build") {
    const auto res = run_cli("verify --trials 10 --min-conn 50 --max-conn 500 --seed 3");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("verified 10 networks") != std::string::npos);
}

TEST_CASE("verify detects an injected fault with exit 4, naming the node") {
    const auto res =
        run_cli("verify --trials 3 --min-conn 200 --max-conn 400 --seed 11 --inject-fault");
    CHECK(res.exit_code == 4);
    CHECK(res.output.find("DIVERGENCE") != std::string::npos);
    CHECK(res.output.find("node=") != std::string::npos);
    CHECK(res.output.find("net_seed=") != std::string::npos);
}

TEST_CASE("bench writes both CSVs plus the metadata sidecar") {
    ScratchDir dir;
    const std::string prefix = dir.file("out");
    const auto res = run_cli("bench --connections 50,200 --depths 3,4 --seed 9 --csv " + prefix);
    REQUIRE(res.exit_code == 0);

    const auto timings = split_lines(slurp(prefix + ".timings.csv"));
    REQUIRE(timings.size() == 1 + 2 * 2 * 2); // header + |conn| x |depth| x 2 backends
    CHECK(timings[0] == "network_id,connections,layers,backend,repetitions,mean_time_us,stddev_us");
    // Default protocol: sequential rows say 5 repetitions, parallel rows 10.
    for (std::size_t i = 1; i < timings.size(); ++i) {
        const auto fields = split_csv_line(timings[i]);
        REQUIRE(fields.size() == 7);
        if (fields[3] == "sequential") CHECK(fields[4] == "5");
        if (fields[3] == "parallel") CHECK(fields[4] == "10");
    }

    const auto speedups = split_lines(slurp(prefix + ".speedup.csv"));
    CHECK(speedups.size() == 1 + 2 * 2);

    const std::string meta = slurp(prefix + ".meta");
    CHECK(meta.find("reps_sequential=5") != std::string::npos);
    CHECK(meta.find("reps_parallel=10") != std::string::npos);
    CHECK(meta.find("protocol_override=none") != std::string::npos);
    CHECK(meta.find("failures=0") != std::string::npos);
}

TEST_CASE("bench records protocol overrides in the sidecar") {
    ScratchDir dir;
    const std::string prefix = dir.file("ovr");
    const auto res = run_cli("bench --connections 50 --depths 3 --reps-seq 2 --reps-par 3 "
                             "--csv " + prefix);
    REQUIRE(res.exit_code == 0);
    const std::string meta = slurp(prefix + ".meta");
    CHECK(meta.find("protocol_override=reps_sequential,reps_parallel") != std::string::npos);
}
