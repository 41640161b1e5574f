#include "asnn/eval.hpp"

#include <omp.h>

#include <string>

#include "asnn/errors.hpp"

namespace asnn {

namespace {

// Single node activation shared by both backends. Keeping one definition in
// one translation unit makes the two evaluators bitwise comparable: the
// accumulation order is the stored predecessor order, nothing else.
inline float activate_node(const FlatNode& node, const float* op, const float* in) {
    if (node.is_sensor) return sigmoid32(in[node.id]);
    float sum = 0.0f;
    const std::size_t count = node.in_nodes.size();
    for (std::size_t i = 0; i < count; ++i)
        sum += node.in_weights[i] * op[node.in_nodes[i]];
    return sigmoid32(sum);
}

ActivationState make_state(const LayeredLayout& layout, std::span<const float> input_values) {
    if (input_values.size() != layout.input_order.size())
        throw InputArityMismatch("expected " + std::to_string(layout.input_order.size()) +
                                 " input values, got " + std::to_string(input_values.size()));
    ActivationState state;
    state.inputs.assign(layout.id_bound, 0.0f);
    state.outputs.assign(layout.id_bound, 0.0f);
    for (std::size_t i = 0; i < input_values.size(); ++i)
        state.inputs[layout.input_order[i]] = input_values[i];
    return state;
}

} // namespace

ActivationState eval_sequential(const LayeredLayout& layout,
                                std::span<const float> input_values) {
    ActivationState state = make_state(layout, input_values);
    float* op = state.outputs.data();
    const float* in = state.inputs.data();
    for (const FlatNode& node : layout.nodes)
        op[node.id] = activate_node(node, op, in);
    return state;
}

ActivationState eval_parallel(const LayeredLayout& layout, std::span<const float> input_values,
                              const ParallelConfig& cfg) {
    if (cfg.backend == ParallelConfig::Backend::DeviceCompute)
        throw BackendUnavailable("device-compute backend is not available in this build");

    ActivationState state = make_state(layout, input_values);
    float* op = state.outputs.data();
    const float* in = state.inputs.data();
    const FlatNode* nodes = layout.nodes.data();
    const int total_layers = static_cast<int>(layout.total_layers);
    const int workers = cfg.workers ? static_cast<int>(cfg.workers) : omp_get_max_threads();
    const auto* hook = cfg.node_hook ? &cfg.node_hook : nullptr;

#pragma omp parallel num_threads(workers)
    {
        for (int layer = 0; layer < total_layers; ++layer) {
            const std::int64_t start = layout.layer_offsets[layer];
            const std::int64_t count = layout.nodes_per_layer[layer];
            // The implicit barrier at the end of the worksharing loop is the
            // per-layer synchronization: all writes of this layer are visible
            // before any node of the next layer reads.
#pragma omp for schedule(static)
            for (std::int64_t i = 0; i < count; ++i) {
                const FlatNode& node = nodes[start + i];
                const float value = activate_node(node, op, in);
                if (hook) (*hook)(node.id);
                op[node.id] = value;
            }
        }
    }
    return state;
}

std::vector<float> read_outputs(const ActivationState& state, const Network& net) {
    std::vector<float> out;
    out.reserve(net.outputs.size());
    for (NodeId id : net.outputs) out.push_back(state.outputs[id]);
    return out;
}

std::uint32_t max_layer_width(const LayeredLayout& layout) {
    std::uint32_t width = 0;
    for (std::uint32_t count : layout.nodes_per_layer)
        if (count > width) width = count;
    return width;
}

} // namespace asnn
