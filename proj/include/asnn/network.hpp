#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace asnn {

using NodeId = std::uint32_t;

struct Connection {
    NodeId source = 0;
    NodeId target = 0;
    float weight = 0.0f;

    friend bool operator==(const Connection&, const Connection&) = default;
};

// Feed-forward network over an explicit node set. `nodes` is sorted ascending
// and unique; inputs/outputs keep their declared order. Equality is
// structural: connection order does not matter, weights compare bit-exact.
struct Network {
    std::vector<NodeId> nodes;
    std::vector<NodeId> inputs;
    std::vector<NodeId> outputs;
    std::vector<Connection> connections;

    friend bool operator==(const Network& a, const Network& b);
};

// Builds a network whose node set is the union of inputs, outputs and
// connection endpoints. `extra_nodes` covers isolated ids that appear nowhere
// else.
Network make_network(std::vector<NodeId> inputs, std::vector<NodeId> outputs,
                     std::vector<Connection> connections,
                     std::vector<NodeId> extra_nodes = {});

// Steepened logistic used for every activation. The result is kept strictly
// inside (0,1): at saturation the rounded value is clamped to the nearest
// representable neighbor of the endpoint.
inline double sigmoid(double x) {
    const double v = 1.0 / (1.0 + std::exp(-4.97 * x));
    if (v <= 0.0) return std::numeric_limits<double>::denorm_min();
    if (v >= 1.0) return 1.0 - std::numeric_limits<double>::epsilon() / 2;
    return v;
}

// 32-bit evaluation path: computed in double, rounded to float, clamped back
// into the open interval. Both evaluators and any recomputation of a node
// value must go through this one function.
inline float sigmoid32(float x) {
    const float v = static_cast<float>(sigmoid(x));
    if (v <= 0.0f) return std::numeric_limits<float>::denorm_min();
    if (v >= 1.0f) return 1.0f - std::numeric_limits<float>::epsilon() / 2;
    return v;
}

// Position of id in net.nodes, or nullopt for an unknown id.
std::optional<std::size_t> node_index(const Network& net, NodeId id);

// True when node ids are exactly 0..N-1.
bool has_dense_ids(const Network& net);

// Remaps sparse ids to dense 0..N-1 (ascending id order), preserving the
// declared input/output order. The evaluators index their output array
// directly by id, so they require a dense network.
Network normalize(const Network& net);

struct Violation {
    enum class Kind {
        EmptyInputs,
        EmptyOutputs,
        DuplicateDeclaration,
        InputOutputOverlap,
        UnknownNode,
        SelfLoop,
        DuplicateConnection,
        InputHasIncoming,
        Cycle,
    };
    Kind kind;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(Violation::Kind kind) const;
    std::vector<std::string> messages() const;
};

// Structural check covering every Network invariant. Violations are data,
// not failures; the report lists all of them.
ValidationReport validate(const Network& net);

struct RequiredSet {
    std::vector<NodeId> members; // sorted ascending

    bool contains(NodeId id) const;
};

// Nodes from which at least one output is reachable, plus the outputs
// themselves (backward reachability over the connection graph).
RequiredSet compute_required(const Network& net);

} // namespace asnn
