#include "generator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace lve {

namespace {

double uniform01(std::mt19937_64& rng) {
    // top 53 bits -> [0,1); portable across standard libraries
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& rng) {
    // Box-Muller; consumes exactly two draws
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Uniform point on the probability simplex via exponential spacings.
std::vector<double> simplex_sample(std::mt19937_64& rng, int k) {
    std::vector<double> d(k);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        double u = uniform01(rng);
        while (u <= 0.0) u = uniform01(rng);
        d[i] = -std::log(u);
        total += d[i];
    }
    for (double& v : d) v /= total;
    return d;
}

}  // namespace

void GeneratorConfig::validate() const {
    if (layer_sizes.empty())
        throw GeneratorError("generator: layer_sizes must be nonempty");
    for (int s : layer_sizes)
        if (s <= 0) throw GeneratorError("generator: layer sizes must be positive");
    if (domain_size <= 0)
        throw GeneratorError("generator: domain_size must be positive");
    if (parents_per_child <= 0)
        throw GeneratorError("generator: parents_per_child must be positive");
    if (prior_share_period <= 0)
        throw GeneratorError("generator: prior_share_period must be positive");
    if (max_parent_fanout <= 0)
        throw GeneratorError("generator: max_parent_fanout must be positive");
    if (noise_std < 0.0)
        throw GeneratorError("generator: noise_std must be non-negative");
    for (std::size_t l = 1; l < layer_sizes.size(); ++l) {
        if (parents_per_child > layer_sizes[l - 1])
            throw GeneratorError("generator: parents_per_child exceeds layer " +
                                 std::to_string(l - 1) + " size");
        long slots = static_cast<long>(layer_sizes[l - 1]) * max_parent_fanout;
        long need = static_cast<long>(layer_sizes[l]) * parents_per_child;
        if (need > slots)
            throw GeneratorError("generator: fanout constraint infeasible between layers " +
                                 std::to_string(l - 1) + " and " + std::to_string(l));
    }
}

std::pair<Model, QuerySet> generate_layered_bn(const GeneratorConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);

    const int layers = static_cast<int>(cfg.layer_sizes.size());
    std::vector<int> layer_start(layers);
    int total = 0;
    for (int l = 0; l < layers; ++l) {
        layer_start[l] = total;
        total += cfg.layer_sizes[l];
    }

    Model m;
    m.cardinalities.assign(total, cfg.domain_size);

    // layer-1 priors, one table per group of prior_share_period variables
    std::vector<double> group_table;
    for (int i = 0; i < cfg.layer_sizes[0]; ++i) {
        if (i % cfg.prior_share_period == 0)
            group_table = simplex_sample(rng, cfg.domain_size);
        m.factors.emplace_back(std::vector<VariableId>{layer_start[0] + i},
                               std::vector<int>{cfg.domain_size}, group_table);
    }

    // deeper layers: one shared CPT table per layer, random parents
    for (int l = 1; l < layers; ++l) {
        const int pcount = cfg.parents_per_child;
        std::size_t rows = 1;
        for (int p = 0; p < pcount; ++p) rows *= cfg.domain_size;
        // table over (child, parents...), child slowest; each parent
        // assignment conditions one child distribution
        std::vector<double> table(rows * cfg.domain_size);
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<double> dist = simplex_sample(rng, cfg.domain_size);
            for (int c = 0; c < cfg.domain_size; ++c)
                table[static_cast<std::size_t>(c) * rows + r] = dist[c];
        }

        std::vector<int> use_count(cfg.layer_sizes[l - 1], 0);
        for (int i = 0; i < cfg.layer_sizes[l]; ++i) {
            std::vector<int> candidates;
            for (int p = 0; p < cfg.layer_sizes[l - 1]; ++p)
                if (use_count[p] < cfg.max_parent_fanout) candidates.push_back(p);
            if (static_cast<int>(candidates.size()) < pcount)
                throw GeneratorError("generator: parents exhausted in layer " +
                                     std::to_string(l - 1));
            std::vector<int> picked;
            for (int p = 0; p < pcount; ++p) {
                std::size_t j = static_cast<std::size_t>(
                    rng() % static_cast<std::uint64_t>(candidates.size()));
                picked.push_back(candidates[j]);
                candidates.erase(candidates.begin() + j);
            }
            std::sort(picked.begin(), picked.end());
            std::vector<VariableId> scope{layer_start[l] + i};
            std::vector<int> shape{cfg.domain_size};
            for (int p : picked) {
                ++use_count[p];
                scope.push_back(layer_start[l - 1] + p);
                shape.push_back(cfg.domain_size);
            }
            m.factors.emplace_back(std::move(scope), std::move(shape), table);
        }
    }

    if (cfg.noise_std > 0.0) {
        std::vector<Factor> noisy;
        noisy.reserve(m.factors.size());
        for (const Factor& f : m.factors) {
            std::vector<double> v = f.values();
            for (double& x : v)
                x = std::max(0.0, x + gaussian(rng) * cfg.noise_std);
            noisy.emplace_back(f.scope(), f.shape(), std::move(v));
        }
        m.factors = std::move(noisy);
    }

    QuerySet queries(cfg.layer_sizes[layers - 1]);
    std::iota(queries.begin(), queries.end(), layer_start[layers - 1]);
    m.validate();
    return {std::move(m), std::move(queries)};
}

}  // namespace lve
