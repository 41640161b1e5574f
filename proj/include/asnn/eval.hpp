#pragma once

#include <functional>
#include <span>
#include <vector>

#include "asnn/layout.hpp"

namespace asnn {

// Shared value arrays of one evaluation, both indexed by node id. `inputs`
// holds the external values (meaningful at sensor ids only); `outputs` is the
// op array every node writes its activation into.
struct ActivationState {
    std::vector<float> inputs;
    std::vector<float> outputs;
};

struct ParallelConfig {
    enum class Backend { HostParallel, DeviceCompute };

    std::uint32_t workers = 0; // 0 = all hardware threads
    Backend backend = Backend::HostParallel;

    // Test instrumentation: runs right before each op write with the node id.
    std::function<void(NodeId)> node_hook;
};

// Reference evaluator: activates nodes one at a time in (layer, id) order.
ActivationState eval_sequential(const LayeredLayout& layout,
                                std::span<const float> input_values);

// Data-parallel evaluator: all nodes of a layer are activated concurrently
// with a full barrier between consecutive layers. Per-node accumulation uses
// the stored predecessor order, so results are bitwise identical to the
// sequential evaluator regardless of worker count or scheduling.
ActivationState eval_parallel(const LayeredLayout& layout,
                              std::span<const float> input_values,
                              const ParallelConfig& cfg = {});

// op values at the network's output ids, in declared output order.
std::vector<float> read_outputs(const ActivationState& state, const Network& net);

// Max over nodes_per_layer; sizes worker groups and capacity checks.
std::uint32_t max_layer_width(const LayeredLayout& layout);

} // namespace asnn
