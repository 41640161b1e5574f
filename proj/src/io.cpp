#include "asnn/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "asnn/errors.hpp"

namespace asnn {

std::string format_float(float value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string serialize_network(const Network& net) {
    const ValidationReport report = validate(net);
    if (!report.ok()) throw ValidationError(report.messages());

    auto edges = net.connections;
    std::sort(edges.begin(), edges.end(), [](const Connection& a, const Connection& b) {
        return a.source != b.source ? a.source < b.source : a.target < b.target;
    });

    std::string out = "asnn 1\n";
    out += "inputs";
    for (NodeId id : net.inputs) out += ' ' + std::to_string(id);
    out += "\noutputs";
    for (NodeId id : net.outputs) out += ' ' + std::to_string(id);
    out += '\n';
    for (const auto& e : edges) {
        out += "edge " + std::to_string(e.source) + ' ' + std::to_string(e.target) + ' ' +
               format_float(e.weight) + '\n';
    }
    return out;
}

namespace {

struct Tokens {
    std::vector<std::string_view> parts;
};

Tokens split_ws(std::string_view line) {
    Tokens t;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t begin = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > begin) t.parts.push_back(line.substr(begin, i - begin));
    }
    return t;
}

NodeId parse_id(std::string_view token, int line_no) {
    NodeId value = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw ParseError(line_no, "bad node id '" + std::string(token) + "'");
    return value;
}

float parse_weight(std::string_view token, int line_no) {
    float value = 0.0f;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size())
        throw ParseError(line_no, "bad weight '" + std::string(token) + "'");
    return value;
}

} // namespace

Network parse_network(std::string_view text) {
    std::vector<NodeId> inputs;
    std::vector<NodeId> outputs;
    std::vector<Connection> connections;
    std::unordered_set<std::uint64_t> edge_seen;

    enum class Section { Header, Inputs, Outputs, Edges } expect = Section::Header;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        const auto tokens = split_ws(line);
        if (tokens.parts.empty() || tokens.parts[0].front() == '#') continue;
        const std::string_view keyword = tokens.parts[0];

        switch (expect) {
        case Section::Header: {
            if (keyword != "asnn" || tokens.parts.size() != 2)
                throw ParseError(line_no, "expected header 'asnn 1'");
            if (tokens.parts[1] != "1")
                throw ParseError(line_no,
                                 "unsupported version '" + std::string(tokens.parts[1]) + "'");
            expect = Section::Inputs;
            break;
        }
        case Section::Inputs: {
            if (keyword != "inputs") throw ParseError(line_no, "expected 'inputs' line");
            for (std::size_t i = 1; i < tokens.parts.size(); ++i)
                inputs.push_back(parse_id(tokens.parts[i], line_no));
            expect = Section::Outputs;
            break;
        }
        case Section::Outputs: {
            if (keyword != "outputs") throw ParseError(line_no, "expected 'outputs' line");
            for (std::size_t i = 1; i < tokens.parts.size(); ++i)
                outputs.push_back(parse_id(tokens.parts[i], line_no));
            expect = Section::Edges;
            break;
        }
        case Section::Edges: {
            if (keyword != "edge")
                throw ParseError(line_no, "unknown line '" + std::string(keyword) + "'");
            if (tokens.parts.size() != 4)
                throw ParseError(line_no, "edge needs '<source> <target> <weight>'");
            Connection c;
            c.source = parse_id(tokens.parts[1], line_no);
            c.target = parse_id(tokens.parts[2], line_no);
            c.weight = parse_weight(tokens.parts[3], line_no);
            if (c.source == c.target) throw ParseError(line_no, "self-loop at node " +
                                                                    std::to_string(c.source));
            const std::uint64_t key = (static_cast<std::uint64_t>(c.source) << 32) | c.target;
            if (!edge_seen.insert(key).second)
                throw ParseError(line_no, "duplicate edge " + std::to_string(c.source) + "->" +
                                              std::to_string(c.target));
            connections.push_back(c);
            break;
        }
        }
    }

    if (expect != Section::Edges) throw ParseError(line_no, "truncated file");

    Network net = make_network(std::move(inputs), std::move(outputs), std::move(connections));
    const ValidationReport report = validate(net);
    if (!report.ok()) throw ValidationError(report.messages());
    return net;
}

void write_network(const Network& net, const std::filesystem::path& path) {
    // Serialize (and validate) before touching the filesystem.
    const std::string text = serialize_network(net);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out.flush()) throw IoError("failed writing " + path.string());
}

Network read_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_network(buffer.str());
}

} // namespace asnn
