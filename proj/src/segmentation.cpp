#include "asnn/segmentation.hpp"

#include <algorithm>

namespace asnn {

std::optional<std::uint32_t> LayerAssignment::layer_of(NodeId id) const {
    auto it = std::lower_bound(index.begin(), index.end(), id,
                               [](const auto& entry, NodeId key) { return entry.first < key; });
    if (it == index.end() || it->first != id) return std::nullopt;
    return it->second;
}

std::size_t LayerAssignment::assigned_count() const {
    std::size_t count = 0;
    for (const auto& layer : layers) count += layer.size();
    return count;
}

LayerAssignment segment(const Network& net, const RequiredSet& required) {
    const std::size_t n = net.nodes.size();

    std::vector<std::vector<std::uint32_t>> pred(n);
    std::vector<std::vector<std::uint32_t>> succ(n);
    for (const auto& c : net.connections) {
        const auto si = node_index(net, c.source);
        const auto ti = node_index(net, c.target);
        if (si && ti && c.source != c.target) {
            pred[*ti].push_back(static_cast<std::uint32_t>(*si));
            succ[*si].push_back(static_cast<std::uint32_t>(*ti));
        }
    }

    std::vector<std::uint8_t> required_mask(n, 0);
    for (NodeId id : required.members)
        if (auto i = node_index(net, id)) required_mask[*i] = 1;

    std::vector<std::uint8_t> in_s(n, 0);
    LayerAssignment assignment;

    // Layer 0 is the input set, stored sorted ascending.
    std::vector<NodeId> input_layer = net.inputs;
    std::sort(input_layer.begin(), input_layer.end());
    input_layer.erase(std::unique(input_layer.begin(), input_layer.end()), input_layer.end());
    for (NodeId id : input_layer)
        if (auto i = node_index(net, id)) in_s[*i] = 1;
    assignment.layers.push_back(std::move(input_layer));

    // Frontier of nodes added last round; candidates are their successors.
    std::vector<std::uint32_t> frontier;
    for (std::size_t i = 0; i < n; ++i)
        if (in_s[i]) frontier.push_back(static_cast<std::uint32_t>(i));

    // A node with some predecessor in s stays a candidate until promoted, so
    // accumulating discoveries from each round's frontier recomputes exactly
    // the per-round candidate set.
    std::vector<std::uint8_t> is_candidate(n, 0);
    for (;;) {
        // c = { b : (a,b) in CON, a in s, b not in s }
        for (std::uint32_t a : frontier)
            for (std::uint32_t b : succ[a])
                if (!in_s[b]) is_candidate[b] = 1;

        // t = { n in c : n required and every predecessor of n in s }
        std::vector<std::uint32_t> promoted;
        for (std::size_t b = 0; b < n; ++b) {
            if (!is_candidate[b] || !required_mask[b]) continue;
            bool all_in = true;
            for (std::uint32_t p : pred[b]) {
                if (!in_s[p]) {
                    all_in = false;
                    break;
                }
            }
            if (all_in) promoted.push_back(static_cast<std::uint32_t>(b));
        }

        if (promoted.empty()) break;

        std::vector<NodeId> layer;
        layer.reserve(promoted.size());
        for (std::uint32_t b : promoted) {
            in_s[b] = 1;
            is_candidate[b] = 0;
            layer.push_back(net.nodes[b]);
        }
        std::sort(layer.begin(), layer.end());
        assignment.layers.push_back(std::move(layer));
        frontier = std::move(promoted);
    }

    for (std::size_t i = 0; i < n; ++i)
        if (!in_s[i]) assignment.unassigned.push_back(net.nodes[i]);

    for (std::uint32_t layer = 0; layer < assignment.layers.size(); ++layer)
        for (NodeId id : assignment.layers[layer])
            assignment.index.emplace_back(id, layer);
    std::sort(assignment.index.begin(), assignment.index.end());

    return assignment;
}

std::size_t depth(const LayerAssignment& assignment) {
    return assignment.layers.size();
}

std::vector<NodeId> unassigned_outputs(const Network& net, const LayerAssignment& assignment) {
    std::vector<NodeId> missing;
    for (NodeId id : net.outputs)
        if (!assignment.layer_of(id)) missing.push_back(id);
    return missing;
}

} // namespace asnn
