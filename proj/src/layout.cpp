#include "asnn/layout.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "asnn/errors.hpp"

namespace asnn {

LayeredLayout flatten(const Network& net, const LayerAssignment& assignment) {
    if (auto missing = unassigned_outputs(net, assignment); !missing.empty()) {
        std::string msg = "unassigned output node(s):";
        for (NodeId id : missing) msg += ' ' + std::to_string(id);
        throw UnassignedOutput(msg);
    }

    LayeredLayout layout;
    layout.total_layers = static_cast<std::uint32_t>(assignment.layers.size());
    layout.nodes_per_layer.reserve(layout.total_layers);
    layout.layer_offsets.assign(1, 0);
    layout.input_order = net.inputs;
    // Pruned nodes keep their ids, so the value arrays span the whole id
    // range, not just the assigned nodes.
    layout.id_bound = net.nodes.empty() ? 0 : net.nodes.back() + 1;

    // Layers are already id-sorted, so appending them in order yields the
    // (layer, id) sort.
    for (const auto& layer : assignment.layers) {
        layout.nodes_per_layer.push_back(static_cast<std::uint32_t>(layer.size()));
        layout.layer_offsets.push_back(layout.layer_offsets.back() +
                                       static_cast<std::uint32_t>(layer.size()));
    }

    layout.nodes.resize(assignment.assigned_count());
    std::vector<std::uint32_t> position(layout.id_bound, 0);
    {
        std::uint32_t pos = 0;
        for (std::uint32_t layer = 0; layer < layout.total_layers; ++layer) {
            for (NodeId id : assignment.layers[layer]) {
                FlatNode& node = layout.nodes[pos];
                node.id = id;
                node.layer = layer;
                node.is_sensor = (layer == 0);
                position[id] = pos;
                ++pos;
            }
        }
    }

    // An assigned target implies an assigned source, so dropped edges are
    // exactly those with an unassigned target.
    for (const auto& c : net.connections) {
        if (!assignment.layer_of(c.target)) {
            ++layout.dropped_connections;
            continue;
        }
        FlatNode& node = layout.nodes[position[c.target]];
        node.in_nodes.push_back(c.source);
        node.in_weights.push_back(c.weight);
    }

    // Predecessors sorted ascending by id fixes the accumulation order.
    for (FlatNode& node : layout.nodes) {
        if (node.in_nodes.size() < 2) continue;
        std::vector<std::uint32_t> order(node.in_nodes.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&node](std::uint32_t a, std::uint32_t b) {
            return node.in_nodes[a] < node.in_nodes[b];
        });
        std::vector<NodeId> ids(order.size());
        std::vector<float> weights(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            ids[i] = node.in_nodes[order[i]];
            weights[i] = node.in_weights[order[i]];
        }
        node.in_nodes = std::move(ids);
        node.in_weights = std::move(weights);
    }

    return layout;
}

std::pair<std::uint32_t, std::uint32_t> layer_slice_bounds(const LayeredLayout& layout,
                                                           std::uint32_t layer) {
    if (layer >= layout.total_layers)
        throw LayerOutOfRange("layer " + std::to_string(layer) + " out of range, total layers " +
                              std::to_string(layout.total_layers));
    return {layout.layer_offsets[layer], layout.nodes_per_layer[layer]};
}

} // namespace asnn
