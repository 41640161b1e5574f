#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "asnn/network.hpp"

namespace asnn {

// Shortest decimal form that parses back to the exact same value.
std::string format_float(float value);
std::string format_double(double value);

// Canonical `asnn 1` text form: header, inputs line, outputs line, then one
// `edge <source> <target> <weight>` line per connection sorted by
// (source, target). Deterministic: equal networks serialize byte-identically.
std::string serialize_network(const Network& net);

// Inverse of serialize_network; accepts `#` comments and blank lines.
// Throws ParseError with a line number on malformed input, ValidationError
// when the parsed network breaks a structural invariant.
Network parse_network(std::string_view text);

// File variants. write_network validates first and refuses to create the
// file for an invalid network.
void write_network(const Network& net, const std::filesystem::path& path);
Network read_network(const std::filesystem::path& path);

} // namespace asnn
