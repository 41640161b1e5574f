#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "asnn/network.hpp"

namespace asnn {

// Dependency layering of a network. layers[0] is the input set; every other
// layer holds nodes whose predecessors all sit in strictly earlier layers.
// Members of each layer are sorted ascending by id.
struct LayerAssignment {
    std::vector<std::vector<NodeId>> layers;
    std::vector<NodeId> unassigned;                       // sorted ascending
    std::vector<std::pair<NodeId, std::uint32_t>> index;  // (id, layer), sorted by id

    std::optional<std::uint32_t> layer_of(NodeId id) const;
    std::size_t assigned_count() const;
};

// Round-based layering: seed with the inputs, then repeatedly promote the
// required successors whose entire predecessor set is already assigned.
// Nodes that never qualify end up in `unassigned`.
LayerAssignment segment(const Network& net, const RequiredSet& required);

// Number of layers including the input layer.
std::size_t depth(const LayerAssignment& assignment);

// Output nodes that segmentation failed to place (hard error downstream).
std::vector<NodeId> unassigned_outputs(const Network& net, const LayerAssignment& assignment);

} // namespace asnn
