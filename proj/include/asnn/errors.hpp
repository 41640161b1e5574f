#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace asnn {

struct InputArityMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An output node was never assigned a layer; the network cannot be evaluated.
struct OutputUnreachable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
using UnassignedOutput = OutputUnreachable;

struct LayerOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct BackendUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleSpec : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    ParseError(int line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    int line;
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(std::vector<std::string> violation_list)
        : std::runtime_error(join(violation_list)), violations(std::move(violation_list)) {}
    std::vector<std::string> violations;

private:
    static std::string join(const std::vector<std::string>& parts) {
        std::string out = "invalid network";
        for (const auto& p : parts) {
            out += "\n  ";
            out += p;
        }
        return out;
    }
};

} // namespace asnn
