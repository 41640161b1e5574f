#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "asnn/network.hpp"
#include "asnn/segmentation.hpp"

namespace asnn {

// One evaluable node in the flat execution layout.
struct FlatNode {
    NodeId id = 0;
    std::uint32_t layer = 0;
    bool is_sensor = false;
    std::vector<NodeId> in_nodes;   // predecessor ids, sorted ascending
    std::vector<float> in_weights;  // parallel to in_nodes

    std::uint32_t num_in() const { return static_cast<std::uint32_t>(in_nodes.size()); }
};

// Flat node array sorted ascending by layer (ties by id) plus per-layer
// counts. An evaluator's value arrays are indexed directly by id and span
// id_bound = max node id + 1; normalize() keeps that range compact for
// networks loaded with sparse ids.
struct LayeredLayout {
    std::uint32_t total_layers = 0;
    std::vector<std::uint32_t> nodes_per_layer;  // length total_layers
    std::vector<FlatNode> nodes;                 // sorted by (layer, id)
    std::vector<std::uint32_t> layer_offsets;    // prefix sums, length total_layers + 1
    std::vector<NodeId> input_order;             // sensor ids in declared input order
    std::uint64_t dropped_connections = 0;       // edges touching unassigned nodes
    std::uint32_t id_bound = 0;                  // max node id + 1; sizes the value arrays

    std::uint32_t node_count() const { return static_cast<std::uint32_t>(nodes.size()); }
};

// Flattens a segmented network. Connections into unassigned nodes are dropped
// (counted in dropped_connections). Throws UnassignedOutput if any output
// node is unassigned.
LayeredLayout flatten(const Network& net, const LayerAssignment& assignment);

// (startIndex, count) of the contiguous slice holding `layer`'s nodes.
std::pair<std::uint32_t, std::uint32_t> layer_slice_bounds(const LayeredLayout& layout,
                                                           std::uint32_t layer);

} // namespace asnn
