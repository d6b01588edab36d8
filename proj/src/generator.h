#pragma once

#include <cstdint>
#include <utility>

#include "model.h"

namespace lve {

struct GeneratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Layered Bayesian-network generator. Layer-1 variables get prior
// factors, identical within groups of prior_share_period consecutive
// variables. Each deeper-layer variable gets one CPT over (itself, its
// sampled parents); all CPTs within a layer are identical before noise.
struct GeneratorConfig {
    std::vector<int> layer_sizes;
    int domain_size = 2;
    int parents_per_child = 2;
    int prior_share_period = 25;
    int max_parent_fanout = 2;
    double noise_std = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Deterministic given the seed (mt19937_64 stream; uniform doubles from
// the top 53 bits, Gaussian noise via Box-Muller). Query set = last
// layer.
std::pair<Model, QuerySet> generate_layered_bn(const GeneratorConfig& cfg);

}  // namespace lve
