#include <algorithm>
#include <cstdint>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "asnn/bench.hpp"
#include "asnn/errors.hpp"
#include "asnn/eval.hpp"
#include "asnn/io.hpp"
#include "asnn/layout.hpp"
#include "asnn/netgen.hpp"
#include "asnn/network.hpp"
#include "asnn/rng.hpp"
#include "asnn/segmentation.hpp"

#include <omp.h>

using namespace asnn;

namespace {

// Exit codes are a stable contract:
//   0 success, 1 I/O, 2 usage or infeasible spec, 3 segmentation failure,
//   4 verification divergence.
constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSegmentation = 3;
constexpr int kExitDivergence = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int run_guarded(const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const InfeasibleSpec& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InputArityMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const OutputUnreachable& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSegmentation;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

std::vector<float> parse_float_list(const std::string& csv) {
    std::vector<float> values;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string token =
            csv.substr(pos, comma == std::string::npos ? csv.size() - pos : comma - pos);
        try {
            std::size_t used = 0;
            values.push_back(std::stof(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw UsageError("bad number '" + token + "' in list");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return values;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& csv) {
    std::vector<std::uint64_t> values;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string token =
            csv.substr(pos, comma == std::string::npos ? csv.size() - pos : comma - pos);
        try {
            std::size_t used = 0;
            if (!token.empty() && token[0] == '-') throw std::invalid_argument(token);
            values.push_back(std::stoull(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw UsageError("bad integer '" + token + "' in list");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return values;
}

// Corpus parameterization shared by verify and bench: hidden nodes scale
// with connection count (one order of magnitude fewer), never below what the
// depth needs, and grow until the band arrangement can hold the requested
// edges.
GenSpec make_corpus_spec(std::uint64_t connections, std::uint32_t depth, std::uint32_t inputs,
                         std::uint32_t outputs, std::uint64_t seed) {
    GenSpec spec;
    spec.input_count = inputs;
    spec.output_count = outputs;
    spec.connection_count = connections;
    spec.target_depth = depth;
    spec.seed = seed;

    if (depth > 2) {
        const std::uint64_t ceiling = connections > outputs ? connections - outputs : 0;
        std::uint64_t hidden = std::max<std::uint64_t>(depth - 2, connections / 10);
        hidden = std::min(hidden, ceiling);
        spec.hidden_count = static_cast<std::uint32_t>(hidden);
        while (max_connections(spec) < connections && hidden < ceiling) {
            hidden = std::min(hidden * 2 + 1, ceiling);
            spec.hidden_count = static_cast<std::uint32_t>(hidden);
        }
    }
    return spec;
}

struct GenerateOptions {
    std::uint32_t inputs = 2;
    std::uint32_t outputs = 1;
    std::uint32_t hidden = 0;
    std::uint64_t connections = 0;
    std::uint32_t depth = 2;
    std::uint64_t seed = 1;
    float weight_min = -1.0f;
    float weight_max = 1.0f;
    std::string out_path;
};

int cmd_generate(const GenerateOptions& opt) {
    GenSpec spec;
    spec.input_count = opt.inputs;
    spec.output_count = opt.outputs;
    spec.hidden_count = opt.hidden;
    spec.connection_count = opt.connections;
    spec.target_depth = opt.depth;
    spec.weight_min = opt.weight_min;
    spec.weight_max = opt.weight_max;
    spec.seed = opt.seed;

    const Network net = generate(spec);
    write_network(net, opt.out_path);
    std::cout << "nodes=" << net.nodes.size() << " connections=" << net.connections.size()
              << " depth=" << spec.target_depth << '\n';
    return kExitOk;
}

struct SegmentOptions {
    std::string in_path;
    bool json = false;
};

int cmd_segment(const SegmentOptions& opt) {
    const Network net = read_network(opt.in_path);
    const LayerAssignment assignment = segment(net, compute_required(net));

    if (opt.json) {
        nlohmann::json j;
        j["layers"] = assignment.layers;
        j["unassigned"] = assignment.unassigned;
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "layers=" << assignment.layers.size() << " widths=[";
        for (std::size_t i = 0; i < assignment.layers.size(); ++i)
            std::cout << (i ? "," : "") << assignment.layers[i].size();
        std::cout << "] unassigned=" << assignment.unassigned.size() << '\n';
    }

    if (const auto missing = unassigned_outputs(net, assignment); !missing.empty()) {
        std::cerr << "error: unassigned output node(s):";
        for (NodeId id : missing) std::cerr << ' ' << id;
        std::cerr << '\n';
        return kExitSegmentation;
    }
    return kExitOk;
}

struct EvalOptions {
    std::string in_path;
    std::string inputs;
    std::string backend = "seq";
    std::uint32_t workers = 0;
};

int cmd_eval(const EvalOptions& opt) {
    const Network net = normalize(read_network(opt.in_path));
    const LayerAssignment assignment = segment(net, compute_required(net));
    const LayeredLayout layout = flatten(net, assignment);

    const std::vector<float> input_values = parse_float_list(opt.inputs);
    ActivationState state;
    if (opt.backend == "par") {
        ParallelConfig cfg;
        cfg.workers = opt.workers;
        state = eval_parallel(layout, input_values, cfg);
    } else {
        state = eval_sequential(layout, input_values);
    }

    for (float value : read_outputs(state, net)) std::cout << format_float(value) << '\n';
    return kExitOk;
}

struct VerifyOptions {
    std::uint32_t trials = 100;
    std::uint64_t min_conn = 100;
    std::uint64_t max_conn = 50000;
    std::uint64_t seed = 42;
    double tolerance = 1e-5;
    std::uint32_t workers = 0;
    bool inject_fault = false;
};

int cmd_verify(const VerifyOptions& opt) {
    if (opt.min_conn > opt.max_conn) throw UsageError("--min-conn exceeds --max-conn");
    if (opt.min_conn < 10) throw UsageError("--min-conn must be at least 10");

    SplitMix64 master(opt.seed);
    ParallelConfig cfg;
    cfg.workers = opt.workers;

    double max_divergence = 0.0;
    for (std::uint32_t trial = 0; trial < opt.trials; ++trial) {
        const std::uint64_t net_seed = master.next();
        SplitMix64 rng(net_seed);

        const std::uint64_t connections =
            opt.min_conn + rng.bounded(opt.max_conn - opt.min_conn + 1);
        const std::uint32_t depth =
            connections < 64 ? 3 + static_cast<std::uint32_t>(rng.bounded(2))
                             : 3 + static_cast<std::uint32_t>(rng.bounded(38));
        const std::uint32_t inputs = 1 + static_cast<std::uint32_t>(rng.bounded(8));
        const std::uint32_t outputs = 1 + static_cast<std::uint32_t>(rng.bounded(4));

        const Network net =
            generate(make_corpus_spec(connections, depth, inputs, outputs, net_seed));
        const LayerAssignment assignment = segment(net, compute_required(net));
        LayeredLayout layout = flatten(net, assignment);

        std::vector<float> input_values(layout.input_order.size());
        for (float& v : input_values) v = rng.uniform(-2.0f, 2.0f);

        const ActivationState seq = eval_sequential(layout, input_values);

        if (opt.inject_fault) {
            // Flip the strongest weight so the parallel run diverges.
            FlatNode* worst_node = nullptr;
            std::size_t worst_slot = 0;
            for (FlatNode& node : layout.nodes)
                for (std::size_t i = 0; i < node.in_weights.size(); ++i)
                    if (!worst_node ||
                        std::abs(node.in_weights[i]) > std::abs(worst_node->in_weights[worst_slot])) {
                        worst_node = &node;
                        worst_slot = i;
                    }
            if (worst_node) worst_node->in_weights[worst_slot] *= -1.0f;
        }

        const ActivationState par = eval_parallel(layout, input_values, cfg);

        for (const FlatNode& node : layout.nodes) {
            const double diff = std::abs(static_cast<double>(seq.outputs[node.id]) -
                                         static_cast<double>(par.outputs[node.id]));
            max_divergence = std::max(max_divergence, diff);
            if (diff > opt.tolerance) {
                std::cout << "DIVERGENCE trial=" << trial << " net_seed=" << net_seed
                          << " node=" << node.id << " sequential=" << format_float(seq.outputs[node.id])
                          << " parallel=" << format_float(par.outputs[node.id])
                          << " diff=" << format_double(diff) << '\n';
                return kExitDivergence;
            }
        }
    }

    std::cout << "verified " << opt.trials << " networks (connections " << opt.min_conn << ".."
              << opt.max_conn << "): max divergence " << format_double(max_divergence) << '\n';
    return kExitOk;
}

struct BenchOptions {
    std::string connections;
    std::string depths;
    std::uint64_t seed = 42;
    std::uint32_t reps_seq = 5;
    std::uint32_t reps_par = 10;
    std::uint32_t warmup = 1;
    std::uint32_t workers = 0;
    bool include_preprocessing = false;
    float input_value = 0.5f;
    std::string csv_prefix;
};

int cmd_bench(const BenchOptions& opt) {
    const auto connection_list = parse_u64_list(opt.connections);
    const auto depth_list = parse_u64_list(opt.depths);
    if (connection_list.empty() || depth_list.empty())
        throw UsageError("--connections and --depths must be non-empty");

    constexpr std::uint32_t kCorpusInputs = 8;
    constexpr std::uint32_t kCorpusOutputs = 2;

    SplitMix64 master(opt.seed);
    std::vector<BenchCase> corpus;
    for (const std::uint64_t depth : depth_list) {
        for (const std::uint64_t conn : connection_list) {
            const std::uint64_t net_seed = master.next();
            const GenSpec spec =
                make_corpus_spec(conn, static_cast<std::uint32_t>(depth), kCorpusInputs,
                                 kCorpusOutputs, net_seed);
            corpus.push_back({"c" + std::to_string(conn) + "_d" + std::to_string(depth),
                              generate(spec)});
        }
    }

    ParallelConfig cfg;
    cfg.workers = opt.workers;
    BenchProtocol protocol;
    protocol.reps_sequential = opt.reps_seq;
    protocol.reps_parallel = opt.reps_par;
    protocol.warmup = opt.warmup;
    protocol.include_preprocessing = opt.include_preprocessing;
    protocol.input_value = opt.input_value;

    const BenchResult result = run_bench(corpus, cfg, protocol);

    for (const auto& s : result.speedups) {
        double seq_mean = 0.0;
        double par_mean = 0.0;
        for (const auto& r : result.records) {
            if (r.network_id != s.network_id) continue;
            (r.backend == BenchBackend::Sequential ? seq_mean : par_mean) = r.mean_time_us;
        }
        std::cout << s.network_id << ": seq_us=" << format_double(seq_mean)
                  << " par_us=" << format_double(par_mean)
                  << " speedup=" << format_double(s.speedup) << '\n';
    }
    for (const auto& failure : result.failures)
        std::cerr << "failed " << failure.network_id << ": " << failure.reason << '\n';

    write_csv(result.records, result.speedups, opt.csv_prefix);

    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("hardware_threads", std::to_string(omp_get_max_threads()));
    meta.emplace_back("workers", std::to_string(opt.workers ? opt.workers
                                                            : static_cast<std::uint32_t>(
                                                                  omp_get_max_threads())));
    meta.emplace_back("warmup_runs", std::to_string(opt.warmup));
    meta.emplace_back("reps_sequential", std::to_string(opt.reps_seq));
    meta.emplace_back("reps_parallel", std::to_string(opt.reps_par));
    std::string overrides;
    if (opt.reps_seq != 5) overrides += "reps_sequential";
    if (opt.reps_par != 10) overrides += std::string(overrides.empty() ? "" : ",") + "reps_parallel";
    meta.emplace_back("protocol_override", overrides.empty() ? "none" : overrides);
    meta.emplace_back("seed", std::to_string(opt.seed));
    meta.emplace_back("connections", opt.connections);
    meta.emplace_back("depths", opt.depths);
    meta.emplace_back("corpus_inputs", std::to_string(kCorpusInputs));
    meta.emplace_back("corpus_outputs", std::to_string(kCorpusOutputs));
    meta.emplace_back("input_value", format_float(opt.input_value));
    meta.emplace_back("include_preprocessing", opt.include_preprocessing ? "1" : "0");
    meta.emplace_back("failures", std::to_string(result.failures.size()));
    for (const auto& failure : result.failures)
        meta.emplace_back("failure_" + failure.network_id, failure.reason);
    write_meta(opt.csv_prefix, meta);

    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"asnn: segmentation and layer-parallel activation of sparse "
                 "arbitrary-topology feed-forward networks"};
    app.require_subcommand(1);

    int rc = kExitOk;

    GenerateOptions gen;
    auto* generate_cmd = app.add_subcommand("generate", "Generate a seeded random network");
    generate_cmd->add_option("--inputs", gen.inputs, "Input node count")->capture_default_str();
    generate_cmd->add_option("--outputs", gen.outputs, "Output node count")->capture_default_str();
    generate_cmd->add_option("--hidden", gen.hidden, "Hidden node count")->capture_default_str();
    generate_cmd->add_option("--connections", gen.connections, "Connection count")->required();
    generate_cmd->add_option("--depth", gen.depth, "Segmentation depth")->capture_default_str();
    generate_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
    generate_cmd->add_option("--weight-min", gen.weight_min, "Weight range low")
        ->capture_default_str();
    generate_cmd->add_option("--weight-max", gen.weight_max, "Weight range high")
        ->capture_default_str();
    generate_cmd->add_option("-o,--out", gen.out_path, "Output .asnn path")->required();
    generate_cmd->callback([&] { rc = run_guarded([&] { return cmd_generate(gen); }); });

    SegmentOptions seg;
    auto* segment_cmd = app.add_subcommand("segment", "Print the dependency-layer structure");
    segment_cmd->add_option("file", seg.in_path, "Network file")->required();
    segment_cmd->add_flag("--json", seg.json, "Emit the assignment as JSON");
    segment_cmd->callback([&] { rc = run_guarded([&] { return cmd_segment(seg); }); });

    EvalOptions ev;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a network on one input vector");
    eval_cmd->add_option("file", ev.in_path, "Network file")->required();
    eval_cmd->add_option("--inputs", ev.inputs, "Comma-separated input values")->required();
    eval_cmd->add_option("--backend", ev.backend, "seq or par")
        ->check(CLI::IsMember({"seq", "par"}))
        ->capture_default_str();
    eval_cmd->add_option("--workers", ev.workers, "Worker threads (0 = auto)")
        ->capture_default_str();
    eval_cmd->callback([&] { rc = run_guarded([&] { return cmd_eval(ev); }); });

    VerifyOptions ver;
    auto* verify_cmd =
        app.add_subcommand("verify", "Check parallel against sequential on random networks");
    verify_cmd->add_option("--trials", ver.trials, "Number of random networks")
        ->check(CLI::Range(1u, 1000000u))
        ->capture_default_str();
    verify_cmd->add_option("--min-conn", ver.min_conn, "Smallest connection count")
        ->capture_default_str();
    verify_cmd->add_option("--max-conn", ver.max_conn, "Largest connection count")
        ->capture_default_str();
    verify_cmd->add_option("--seed", ver.seed, "Corpus seed")->capture_default_str();
    verify_cmd->add_option("--tolerance", ver.tolerance, "Per-node absolute tolerance")
        ->capture_default_str();
    verify_cmd->add_option("--workers", ver.workers, "Worker threads (0 = auto)")
        ->capture_default_str();
    verify_cmd->add_flag("--inject-fault", ver.inject_fault)->group(""); // test hook
    verify_cmd->callback([&] { rc = run_guarded([&] { return cmd_verify(ver); }); });

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time both backends over a generated corpus");
    bench_cmd->add_option("--connections", bench.connections, "Comma list of connection counts")
        ->required();
    bench_cmd->add_option("--depths", bench.depths, "Comma list of depths")->required();
    bench_cmd->add_option("--seed", bench.seed, "Corpus seed")->capture_default_str();
    bench_cmd->add_option("--reps-seq", bench.reps_seq, "Sequential repetitions")
        ->check(CLI::Range(1u, 100000u))
        ->capture_default_str();
    bench_cmd->add_option("--reps-par", bench.reps_par, "Parallel repetitions")
        ->check(CLI::Range(1u, 100000u))
        ->capture_default_str();
    bench_cmd->add_option("--warmup", bench.warmup, "Untimed runs before timing")
        ->check(CLI::Range(1u, 100000u))
        ->capture_default_str();
    bench_cmd->add_option("--workers", bench.workers, "Worker threads (0 = auto)")
        ->capture_default_str();
    bench_cmd->add_flag("--include-preprocessing", bench.include_preprocessing,
                        "Time segmentation and flattening too");
    bench_cmd->add_option("--input-value", bench.input_value, "Fixed input value")
        ->capture_default_str();
    bench_cmd->add_option("--csv", bench.csv_prefix, "Output prefix for CSV files")->required();
    bench_cmd->callback([&] { rc = run_guarded([&] { return cmd_bench(bench); }); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    return rc;
}
