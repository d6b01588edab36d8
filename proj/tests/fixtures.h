#pragma once

// Shared test models and graphs.
#include <algorithm>
#include <numeric>
#include <random>

#include "../src/engine.h"
#include "../src/generator.h"

namespace fixtures {

using namespace lve;

// Seven binary variables: s1=0, s2=1, s3=2, t1=3, i1=4, i2=5, i3=6.
// Priors 0.8/0.8/0.6 on the s's, 0.5 on t1; each i_j is the
// deterministic AND of s_j and t1 (value 0 = true).
inline Model running_model() {
    Model m;
    m.cardinalities.assign(7, 2);
    auto prior = [](VariableId v, double p, double q) {
        return Factor({v}, {2}, {p, q});
    };
    // AND table over (i, s, t), last position fastest
    std::vector<double> and_table(8, 0.0);
    for (int i = 0; i < 2; ++i)
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t)
                if ((i == 0) == (s == 0 && t == 0)) and_table[i * 4 + s * 2 + t] = 1.0;
    m.factors.push_back(prior(0, 0.8, 0.2));
    m.factors.push_back(prior(1, 0.8, 0.2));
    m.factors.push_back(prior(2, 0.6, 0.4));
    m.factors.push_back(prior(3, 0.5, 0.5));
    m.factors.emplace_back(std::vector<VariableId>{4, 0, 3}, std::vector<int>{2, 2, 2}, and_table);
    m.factors.emplace_back(std::vector<VariableId>{5, 1, 3}, std::vector<int>{2, 2, 2}, and_table);
    m.factors.emplace_back(std::vector<VariableId>{6, 2, 3}, std::vector<int>{2, 2, 2}, and_table);
    m.validate();
    return m;
}

inline QuerySet running_queries() { return {4, 5, 6}; }
inline std::vector<VariableId> running_order() { return {0, 1, 2, 3}; }

// Hand-encoded 13-vertex elimination graph over the running-example model: the
// per-query schedule where each marginal leaf multiplies only its own
// chain's message with the t1 prior. Vertex ids:
//   0..2 prior roots s1..s3, 3 t1 prior, 4..6 AND roots,
//   7..9 m_s1..m_s3, 10..12 marginal leaves for i1..i3.
struct GraphFixture {
    Model model;
    RvElimGraph graph;
};

inline GraphFixture hand_graph_fixture() {
    GraphFixture fx;
    fx.model = running_model();
    RvElimGraph& g = fx.graph;
    g.cards = fx.model.cardinalities;
    std::vector<int> labels = root_labels(fx.model.factors);
    for (int i = 0; i < 7; ++i) g.add_root(fx.model.factors[i], i, labels[i]);
    for (int j = 0; j < 3; ++j)  // m_sj from (f_sj, f_ij), sum out sj
        g.add_internal({j, 4 + j}, j, ElimOp::Sum);
    for (int j = 0; j < 3; ++j) {  // leaf from (m_sj, f_t1), sum out t1
        int leaf = g.add_internal({7 + j, 3}, 3, ElimOp::Sum);
        g.mark_marginal_leaf(leaf, 4 + j);
    }
    return fx;
}

// Two independent chains with value-swapped pair tables: X=0 -> Y=1
// with table f1, X'=2 -> Y'=3 with f1'; uniform priors on Y and Y'.
// Summing out Y and Y' yields the bitwise-identical message (0.5, 0.5)
// on both chains even though no input factors are shared.
inline Model two_chain_model() {
    Model m;
    m.cardinalities.assign(4, 2);
    m.factors.emplace_back(std::vector<VariableId>{0, 1}, std::vector<int>{2, 2},
                           std::vector<double>{0.8, 0.2, 0.4, 0.6});
    m.factors.emplace_back(std::vector<VariableId>{1}, std::vector<int>{2},
                           std::vector<double>{0.5, 0.5});
    m.factors.emplace_back(std::vector<VariableId>{2, 3}, std::vector<int>{2, 2},
                           std::vector<double>{0.2, 0.8, 0.6, 0.4});
    m.factors.emplace_back(std::vector<VariableId>{3}, std::vector<int>{2},
                           std::vector<double>{0.5, 0.5});
    m.validate();
    return m;
}

// Random small model: every variable mentioned, strictly positive
// tables, joint state space well under 2^16.
inline Model random_model(std::mt19937_64& rng, int max_vars = 6) {
    int n = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_vars - 1));
    Model m;
    for (int v = 0; v < n; ++v)
        m.cardinalities.push_back(2 + static_cast<int>(rng() % 2));
    auto value = [&] { return 0.05 + static_cast<double>(rng() % 1000) / 1000.0; };
    for (int v = 0; v < n; ++v) {
        // a factor anchored at v with up to two extra variables
        std::vector<VariableId> scope{v};
        int extras = static_cast<int>(rng() % 3);
        for (int e = 0; e < extras; ++e) {
            VariableId w = static_cast<VariableId>(rng() % static_cast<std::uint64_t>(n));
            if (std::find(scope.begin(), scope.end(), w) == scope.end())
                scope.push_back(w);
        }
        std::vector<int> shape;
        std::size_t cells = 1;
        for (VariableId w : scope) {
            shape.push_back(m.cardinalities[w]);
            cells *= static_cast<std::size_t>(m.cardinalities[w]);
        }
        std::vector<double> vals(cells);
        for (double& x : vals) x = value();
        m.factors.emplace_back(std::move(scope), std::move(shape), std::move(vals));
    }
    m.validate();
    return m;
}

// Random nonempty query set plus a shuffled order over the rest.
struct RandomCase {
    Model model;
    QuerySet queries;
    std::vector<VariableId> order;
};

inline RandomCase random_case(std::mt19937_64& rng, int max_vars = 6) {
    RandomCase c;
    c.model = random_model(rng, max_vars);
    int n = c.model.num_vars();
    int q = 1 + static_cast<int>(rng() % 2);
    std::vector<VariableId> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    c.queries.assign(all.begin(), all.begin() + std::min(q, n));
    std::sort(c.queries.begin(), c.queries.end());
    c.order.assign(all.begin() + c.queries.size(), all.end());
    std::shuffle(c.order.begin(), c.order.end(), rng);
    return c;
}

// A base component replicated `copies` times over disjoint variables
// with the same tables: exercises root sharing while keeping every
// copy's arithmetic bitwise identical.
inline RandomCase replicated_case(std::mt19937_64& rng, int copies) {
    RandomCase base = random_case(rng, 4);
    RandomCase c;
    int n = base.model.num_vars();
    for (int k = 0; k < copies; ++k) {
        for (int v = 0; v < n; ++v)
            c.model.cardinalities.push_back(base.model.cardinalities[v]);
        for (const Factor& f : base.model.factors) {
            std::vector<VariableId> scope;
            for (VariableId v : f.scope()) scope.push_back(v + k * n);
            c.model.factors.emplace_back(std::move(scope), f.shape(), f.values());
        }
        for (VariableId q : base.queries) c.queries.push_back(q + k * n);
    }
    // interleave the copies' orders position by position so same-role
    // variables are adjacent, preserving cross-copy symmetry
    for (std::size_t i = 0; i < base.order.size(); ++i)
        for (int k = 0; k < copies; ++k)
            c.order.push_back(base.order[i] + k * n);
    std::sort(c.queries.begin(), c.queries.end());
    c.model.validate();
    return c;
}

}  // namespace fixtures
