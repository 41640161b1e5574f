#include "asnn/netgen.hpp"

#include <algorithm>
#include <unordered_set>

#include "asnn/errors.hpp"
#include "asnn/rng.hpp"

namespace asnn {

namespace {

std::uint64_t pair_key(NodeId source, NodeId target) {
    return (static_cast<std::uint64_t>(source) << 32) | target;
}

// Band boundaries: band 0 = inputs, bands 1..depth-2 = hidden split as
// evenly as possible (earlier bands take the remainder), band depth-1 =
// outputs. Ids are assigned densely in band order, so every node in a band
// earlier than node b has a smaller id than b's band start.
std::vector<std::uint32_t> band_starts(const GenSpec& spec) {
    std::vector<std::uint32_t> starts{0};
    starts.push_back(spec.input_count);
    if (spec.target_depth > 2) {
        const std::uint32_t bands = spec.target_depth - 2;
        const std::uint32_t base = spec.hidden_count / bands;
        const std::uint32_t rem = spec.hidden_count % bands;
        for (std::uint32_t b = 0; b < bands; ++b)
            starts.push_back(starts.back() + base + (b < rem ? 1 : 0));
    }
    starts.push_back(starts.back() + spec.output_count);
    return starts; // length target_depth + 1; starts[k]..starts[k+1] is band k
}

void check_feasible(const GenSpec& spec, const std::vector<std::uint32_t>& starts) {
    if (spec.input_count == 0) throw InfeasibleSpec("infeasible: at least one input required");
    if (spec.output_count == 0) throw InfeasibleSpec("infeasible: at least one output required");
    if (spec.target_depth < 2) throw InfeasibleSpec("infeasible: depth must be at least 2");
    if (spec.target_depth == 2 && spec.hidden_count > 0)
        throw InfeasibleSpec("infeasible: hidden nodes require depth >= 3");
    if (spec.target_depth > 2 && spec.hidden_count < spec.target_depth - 2)
        throw InfeasibleSpec("infeasible: depth exceeds hidden capacity (need at least " +
                             std::to_string(spec.target_depth - 2) + " hidden nodes)");
    if (!(spec.weight_min <= spec.weight_max))
        throw InfeasibleSpec("infeasible: empty weight range");

    const std::uint64_t min_edges =
        static_cast<std::uint64_t>(spec.hidden_count) + spec.output_count;
    if (spec.connection_count < min_edges)
        throw InfeasibleSpec("infeasible: need at least " + std::to_string(min_edges) +
                             " connections so every non-input node has an incoming edge");

    std::uint64_t capacity = 0;
    for (std::size_t band = 1; band + 1 < starts.size(); ++band)
        capacity += static_cast<std::uint64_t>(starts[band + 1] - starts[band]) * starts[band];
    if (spec.connection_count > capacity)
        throw InfeasibleSpec("infeasible: band arrangement holds at most " +
                             std::to_string(capacity) + " forward connections");
}

} // namespace

std::uint64_t max_connections(const GenSpec& spec) {
    const auto starts = band_starts(spec);
    std::uint64_t capacity = 0;
    for (std::size_t band = 1; band + 1 < starts.size(); ++band)
        capacity += static_cast<std::uint64_t>(starts[band + 1] - starts[band]) * starts[band];
    return capacity;
}

Network generate(const GenSpec& spec) {
    const auto starts = band_starts(spec);
    check_feasible(spec, starts);

    const std::uint32_t node_count = starts.back();
    const std::uint32_t first_non_input = spec.input_count;
    SplitMix64 rng(spec.seed);

    auto band_of = [&starts](NodeId id) {
        std::uint32_t band = 0;
        while (starts[band + 1] <= id) ++band;
        return band;
    };

    std::vector<Connection> connections;
    connections.reserve(spec.connection_count);
    std::unordered_set<std::uint64_t> used;
    used.reserve(spec.connection_count * 2);

    auto draw_weight = [&rng, &spec] { return rng.uniform(spec.weight_min, spec.weight_max); };

    // Mandatory predecessor from the adjacent earlier band. This pins every
    // node's layer to its band index, making the segmentation depth exactly
    // target_depth and every output reachable.
    for (NodeId node = first_non_input; node < node_count; ++node) {
        const std::uint32_t band = band_of(node);
        const std::uint32_t lo = starts[band - 1];
        const std::uint32_t hi = starts[band];
        const NodeId pred = lo + static_cast<NodeId>(rng.bounded(hi - lo));
        used.insert(pair_key(pred, node));
        connections.push_back({pred, node, draw_weight()});
    }

    // Remaining edges go uniformly among unused forward pairs: target any
    // non-input node, source anything in a strictly earlier band. Because ids
    // are band-ordered, sources of node b are exactly ids < starts[band(b)].
    const std::uint64_t remaining = spec.connection_count - connections.size();
    std::vector<std::uint64_t> cumulative(node_count - first_non_input + 1, 0);
    for (NodeId node = first_non_input; node < node_count; ++node) {
        cumulative[node - first_non_input + 1] =
            cumulative[node - first_non_input] + starts[band_of(node)];
    }
    const std::uint64_t pair_space = cumulative.back();

    if (remaining * 2 > pair_space - connections.size()) {
        // Dense request: enumerate the free pairs and take a random prefix.
        std::vector<std::uint64_t> free_pairs;
        free_pairs.reserve(pair_space - connections.size());
        for (NodeId node = first_non_input; node < node_count; ++node)
            for (NodeId pred = 0; pred < starts[band_of(node)]; ++pred)
                if (!used.count(pair_key(pred, node))) free_pairs.push_back(pair_key(pred, node));
        for (std::uint64_t k = 0; k < remaining; ++k) {
            const std::uint64_t j = k + rng.bounded(free_pairs.size() - k);
            std::swap(free_pairs[k], free_pairs[j]);
            const NodeId pred = static_cast<NodeId>(free_pairs[k] >> 32);
            const NodeId node = static_cast<NodeId>(free_pairs[k] & 0xFFFFFFFFull);
            connections.push_back({pred, node, draw_weight()});
        }
    } else {
        // Sparse request: rejection-sample indices into the forward pair space.
        for (std::uint64_t k = 0; k < remaining;) {
            const std::uint64_t idx = rng.bounded(pair_space);
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), idx);
            const std::uint32_t slot = static_cast<std::uint32_t>(it - cumulative.begin()) - 1;
            const NodeId node = first_non_input + slot;
            const NodeId pred = static_cast<NodeId>(idx - cumulative[slot]);
            if (!used.insert(pair_key(pred, node)).second) continue;
            connections.push_back({pred, node, draw_weight()});
            ++k;
        }
    }

    std::sort(connections.begin(), connections.end(), [](const Connection& a, const Connection& b) {
        return a.source != b.source ? a.source < b.source : a.target < b.target;
    });

    Network net;
    net.nodes.resize(node_count);
    for (std::uint32_t i = 0; i < node_count; ++i) net.nodes[i] = i;
    net.inputs.resize(spec.input_count);
    for (std::uint32_t i = 0; i < spec.input_count; ++i) net.inputs[i] = i;
    net.outputs.resize(spec.output_count);
    for (std::uint32_t i = 0; i < spec.output_count; ++i)
        net.outputs[i] = starts[spec.target_depth - 1] + i;
    net.connections = std::move(connections);
    return net;
}

} // namespace asnn
