#include "asnn/network.hpp"

#include <algorithm>
#include <cstddef>
#include <unordered_set>

namespace asnn {

namespace {

std::string id_list(const std::vector<NodeId>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(ids[i]);
    }
    return out;
}

std::uint64_t edge_key(NodeId source, NodeId target) {
    return (static_cast<std::uint64_t>(source) << 32) | target;
}

} // namespace

bool operator==(const Network& a, const Network& b) {
    if (a.nodes != b.nodes || a.inputs != b.inputs || a.outputs != b.outputs) return false;
    if (a.connections.size() != b.connections.size()) return false;
    auto canonical = [](const Network& net) {
        auto edges = net.connections;
        std::sort(edges.begin(), edges.end(), [](const Connection& x, const Connection& y) {
            return x.source != y.source ? x.source < y.source : x.target < y.target;
        });
        return edges;
    };
    return canonical(a) == canonical(b);
}

Network make_network(std::vector<NodeId> inputs, std::vector<NodeId> outputs,
                     std::vector<Connection> connections, std::vector<NodeId> extra_nodes) {
    Network net;
    net.nodes = std::move(extra_nodes);
    net.nodes.insert(net.nodes.end(), inputs.begin(), inputs.end());
    net.nodes.insert(net.nodes.end(), outputs.begin(), outputs.end());
    for (const auto& c : connections) {
        net.nodes.push_back(c.source);
        net.nodes.push_back(c.target);
    }
    std::sort(net.nodes.begin(), net.nodes.end());
    net.nodes.erase(std::unique(net.nodes.begin(), net.nodes.end()), net.nodes.end());
    net.inputs = std::move(inputs);
    net.outputs = std::move(outputs);
    net.connections = std::move(connections);
    return net;
}

std::optional<std::size_t> node_index(const Network& net, NodeId id) {
    auto it = std::lower_bound(net.nodes.begin(), net.nodes.end(), id);
    if (it == net.nodes.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - net.nodes.begin());
}

bool has_dense_ids(const Network& net) {
    for (std::size_t i = 0; i < net.nodes.size(); ++i)
        if (net.nodes[i] != i) return false;
    return true;
}

Network normalize(const Network& net) {
    // net.nodes is sorted, so the new id of a node is its position.
    auto remap = [&net](NodeId id) {
        return static_cast<NodeId>(*node_index(net, id));
    };
    Network out;
    out.nodes.resize(net.nodes.size());
    for (std::size_t i = 0; i < out.nodes.size(); ++i) out.nodes[i] = static_cast<NodeId>(i);
    out.inputs.reserve(net.inputs.size());
    for (NodeId id : net.inputs) out.inputs.push_back(remap(id));
    out.outputs.reserve(net.outputs.size());
    for (NodeId id : net.outputs) out.outputs.push_back(remap(id));
    out.connections.reserve(net.connections.size());
    for (const auto& c : net.connections)
        out.connections.push_back({remap(c.source), remap(c.target), c.weight});
    return out;
}

bool ValidationReport::has(Violation::Kind kind) const {
    for (const auto& v : violations)
        if (v.kind == kind) return true;
    return false;
}

std::vector<std::string> ValidationReport::messages() const {
    std::vector<std::string> out;
    out.reserve(violations.size());
    for (const auto& v : violations) out.push_back(v.message);
    return out;
}

namespace {

// First cycle found by iterative DFS over the deduplicated edge set,
// formatted as "cycle: a->b->...->a". Self-loops are reported separately.
std::optional<std::string> find_cycle(const Network& net,
                                      const std::vector<std::vector<std::uint32_t>>& succ) {
    const std::size_t n = net.nodes.size();
    enum : std::uint8_t { White, Grey, Black };
    std::vector<std::uint8_t> color(n, White);
    std::vector<std::uint32_t> parent(n, 0);

    for (std::size_t root = 0; root < n; ++root) {
        if (color[root] != White) continue;
        // stack of (node, next child position)
        std::vector<std::pair<std::uint32_t, std::size_t>> stack;
        stack.emplace_back(static_cast<std::uint32_t>(root), 0);
        color[root] = Grey;
        while (!stack.empty()) {
            auto& [node, child_pos] = stack.back();
            if (child_pos < succ[node].size()) {
                const std::uint32_t next = succ[node][child_pos++];
                if (color[next] == Grey) {
                    // Walk the stack back to `next` to recover the cycle path.
                    std::vector<NodeId> path{net.nodes[next]};
                    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                        path.push_back(net.nodes[it->first]);
                        if (it->first == next) break;
                    }
                    std::reverse(path.begin(), path.end());
                    path.push_back(net.nodes[next]);
                    std::string msg = "cycle:";
                    for (std::size_t i = 0; i < path.size(); ++i) {
                        msg += (i ? "->" : " ") + std::to_string(path[i]);
                    }
                    return msg;
                }
                if (color[next] == White) {
                    color[next] = Grey;
                    stack.emplace_back(next, 0);
                }
            } else {
                color[node] = Black;
                stack.pop_back();
            }
        }
    }
    return std::nullopt;
}

} // namespace

ValidationReport validate(const Network& net) {
    ValidationReport report;
    auto add = [&report](Violation::Kind kind, std::string msg) {
        report.violations.push_back({kind, std::move(msg)});
    };

    if (net.inputs.empty()) add(Violation::Kind::EmptyInputs, "inputs list is empty");
    if (net.outputs.empty()) add(Violation::Kind::EmptyOutputs, "outputs list is empty");

    auto check_declared = [&](const std::vector<NodeId>& ids, const char* what) {
        std::unordered_set<NodeId> seen;
        for (NodeId id : ids) {
            if (!seen.insert(id).second)
                add(Violation::Kind::DuplicateDeclaration,
                    std::string("duplicate node ") + std::to_string(id) + " in " + what);
            if (!node_index(net, id))
                add(Violation::Kind::UnknownNode,
                    std::string("unknown node ") + std::to_string(id) + " in " + what);
        }
    };
    check_declared(net.inputs, "inputs");
    check_declared(net.outputs, "outputs");

    std::unordered_set<NodeId> input_set(net.inputs.begin(), net.inputs.end());
    {
        std::vector<NodeId> overlap;
        for (NodeId id : net.outputs)
            if (input_set.count(id)) overlap.push_back(id);
        if (!overlap.empty())
            add(Violation::Kind::InputOutputOverlap, "input/output overlap: " + id_list(overlap));
    }

    const std::size_t n = net.nodes.size();
    std::vector<std::vector<std::uint32_t>> succ(n);
    std::unordered_set<std::uint64_t> edge_seen;
    edge_seen.reserve(net.connections.size() * 2);
    for (const auto& c : net.connections) {
        const auto si = node_index(net, c.source);
        const auto ti = node_index(net, c.target);
        if (!si || !ti) {
            add(Violation::Kind::UnknownNode,
                "connection " + std::to_string(c.source) + "->" + std::to_string(c.target) +
                    " references an unknown node");
            continue;
        }
        if (c.source == c.target) {
            add(Violation::Kind::SelfLoop, "self-loop at node " + std::to_string(c.source));
            continue;
        }
        if (!edge_seen.insert(edge_key(c.source, c.target)).second) {
            add(Violation::Kind::DuplicateConnection,
                "duplicate connection " + std::to_string(c.source) + "->" +
                    std::to_string(c.target));
            continue;
        }
        if (input_set.count(c.target))
            add(Violation::Kind::InputHasIncoming,
                "input " + std::to_string(c.target) + " has incoming connection from " +
                    std::to_string(c.source));
        succ[*si].push_back(static_cast<std::uint32_t>(*ti));
    }

    if (auto cycle = find_cycle(net, succ)) add(Violation::Kind::Cycle, std::move(*cycle));

    return report;
}

bool RequiredSet::contains(NodeId id) const {
    return std::binary_search(members.begin(), members.end(), id);
}

RequiredSet compute_required(const Network& net) {
    const std::size_t n = net.nodes.size();
    std::vector<std::vector<std::uint32_t>> pred(n);
    for (const auto& c : net.connections) {
        const auto si = node_index(net, c.source);
        const auto ti = node_index(net, c.target);
        if (si && ti && c.source != c.target)
            pred[*ti].push_back(static_cast<std::uint32_t>(*si));
    }

    std::vector<std::uint8_t> reachable(n, 0);
    std::vector<std::uint32_t> frontier;
    for (NodeId id : net.outputs) {
        if (auto i = node_index(net, id); i && !reachable[*i]) {
            reachable[*i] = 1;
            frontier.push_back(static_cast<std::uint32_t>(*i));
        }
    }
    while (!frontier.empty()) {
        const std::uint32_t node = frontier.back();
        frontier.pop_back();
        for (std::uint32_t p : pred[node]) {
            if (!reachable[p]) {
                reachable[p] = 1;
                frontier.push_back(p);
            }
        }
    }

    RequiredSet required;
    for (std::size_t i = 0; i < n; ++i)
        if (reachable[i]) required.members.push_back(net.nodes[i]);
    return required;
}

} // namespace asnn
