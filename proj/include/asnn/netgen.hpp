#pragma once

#include <cstdint>

#include "asnn/network.hpp"

namespace asnn {

// Parameters for the seeded random network generator. Hidden nodes are
// spread over bands 1..target_depth-2; every non-input node gets one
// mandatory predecessor from the adjacent earlier band, which pins the
// segmentation depth to exactly target_depth.
struct GenSpec {
    std::uint32_t input_count = 1;
    std::uint32_t output_count = 1;
    std::uint32_t hidden_count = 0;
    std::uint64_t connection_count = 0;
    std::uint32_t target_depth = 2;
    float weight_min = -1.0f;
    float weight_max = 1.0f;
    std::uint64_t seed = 0;
};

// Deterministic in `seed`: same spec + seed gives a byte-identical network.
// Throws InfeasibleSpec when the constraints cannot be met.
Network generate(const GenSpec& spec);

// Largest connection count the band arrangement of `spec` can hold.
std::uint64_t max_connections(const GenSpec& spec);

} // namespace asnn
