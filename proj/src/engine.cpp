#include "engine.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace lve {

void EngineParams::validate() const {
    if (path_length < kInfinitePathLength)
        throw EngineError("params: path length must be non-negative or infinite");
    if (epsilon < 0.0) throw EngineError("params: epsilon must be non-negative");
    if (epsilon > 0.0 && !use_bisimulation)
        throw EngineError("params: epsilon > 0 requires bisimulation");
    if (epsilon > 0.0 && path_length != kInfinitePathLength)
        throw EngineError(
            "params: factor binning composes with the exact skeleton only; "
            "epsilon > 0 requires an infinite path length");
    if (use_minibuckets && minibuckets.bound <= 0)
        throw EngineError("params: mini-bucket bound must be positive");
}

CompressedGraph compress(const RvElimGraph& g, const Partition& p) {
    CompressedGraph cg;
    const int nblocks = p.num_blocks();
    cg.nodes.resize(nblocks);
    for (int b = 0; b < nblocks; ++b) {
        int rep = p.representative(b);
        const RvVertex& rv = g.vertices[rep];
        CompressedNode& node = cg.nodes[b];
        node.representative = rep;
        if (rv.is_root) {
            node.is_root = true;
            node.factor_index = rv.factor_index;
            continue;
        }
        node.eliminated = rv.eliminated;
        node.op = rv.op;
        const std::size_t nparents = rv.parents.size();
        for (int v : p.blocks[b])
            if (g.vertices[v].parents.size() != nparents)
                throw EngineError(
                    "compress: block members disagree on parent count");
        // per canonical edge index, gather candidate parent blocks over
        // the members; keep the largest block, ties by smallest id
        node.parent_blocks.assign(nparents, -1);
        for (std::size_t i = 0; i < nparents; ++i) {
            int chosen = -1;
            for (int v : p.blocks[b]) {
                int parent = g.vertices[v].parents[p.parent_order[v][i]];
                int cand = p.block_of[parent];
                if (chosen < 0 ||
                    p.blocks[cand].size() > p.blocks[chosen].size() ||
                    (p.blocks[cand].size() == p.blocks[chosen].size() &&
                     cand < chosen))
                    chosen = cand;
            }
            if (chosen < 0)
                throw EngineError("compress: no candidate parent block");
            // place at the representative's original edge position
            node.parent_blocks[p.parent_order[rep][i]] = chosen;
        }
    }
    cg.order.resize(nblocks);
    std::iota(cg.order.begin(), cg.order.end(), 0);
    std::sort(cg.order.begin(), cg.order.end(), [&](int a, int b) {
        int da = g.depth[cg.nodes[a].representative];
        int db = g.depth[cg.nodes[b].representative];
        return da != db ? da < db : a < b;
    });
    cg.query_order = g.query_order;
    for (const auto& [q, v] : g.marginal_leaf)
        cg.marginal_leaf[q] = p.block_of[v];
    return cg;
}

namespace {

void fill_marginals(InferenceResult& r, const std::vector<Factor>& tables,
                    const std::map<VariableId, int>& leaf_of) {
    for (VariableId q : r.queries) {
        const Factor& leaf = tables[leaf_of.at(q)];
        r.unnormalized.push_back(leaf.values());
        try {
            r.marginals.push_back(normalize(leaf).values());
        } catch (const FactorError& e) {
            throw EngineError(std::string("evaluate: ") + e.what());
        }
    }
    if (!r.queries.empty()) r.z = tables[leaf_of.at(r.queries[0])].total();
}

}  // namespace

InferenceResult evaluate(const RvElimGraph& g, const CompressedGraph& cg,
                         const Model& m) {
    InferenceResult r;
    r.queries = cg.query_order;
    r.stats.vertices = static_cast<int>(g.vertices.size());
    r.stats.blocks = static_cast<int>(cg.nodes.size());

    std::vector<Factor> tables(cg.nodes.size(), Factor::unit());
    for (int b : cg.order) {
        const CompressedNode& node = cg.nodes[b];
        if (node.is_root) {
            tables[b] = m.factors[node.factor_index];
            continue;
        }
        const RvVertex& rep = g.vertices[node.representative];
        try {
            Factor acc = tables[node.parent_blocks[0]].with_scope(
                g.vertices[rep.parents[0]].scope);
            for (std::size_t i = 1; i < node.parent_blocks.size(); ++i) {
                Factor pf = tables[node.parent_blocks[i]].with_scope(
                    g.vertices[rep.parents[i]].scope);
                acc = multiply(acc, pf, &r.stats.ops);
            }
            if (node.eliminated != kNoVariable)
                acc = eliminate(acc, node.eliminated, node.op, &r.stats.ops);
            tables[b] = std::move(acc);
        } catch (const FactorError& e) {
            throw EngineError(std::string("evaluate: corrupted partition: ") +
                              e.what());
        }
        ++r.stats.intermediate_factors;
    }
    fill_marginals(r, tables, cg.marginal_leaf);
    return r;
}

InferenceResult ground_evaluate(const RvElimGraph& g, const Model& m) {
    return evaluate(g, compress(g, identity_partition(g)), m);
}

std::vector<std::vector<double>> brute_force_marginals(const Model& m,
                                                       const QuerySet& queries) {
    std::vector<bool> active = m.active_vars();
    std::vector<VariableId> vars;
    double log_size = 0.0;
    for (VariableId v = 0; v < m.num_vars(); ++v) {
        if (!active[v]) continue;
        vars.push_back(v);
        log_size += std::log2(static_cast<double>(m.cardinalities[v]));
    }
    if (log_size > 24.0)
        throw EngineError("brute force: joint state space 2^" +
                          std::to_string(log_size) + " exceeds 2^24");

    std::vector<std::vector<double>> acc;
    for (VariableId q : queries)
        acc.emplace_back(m.cardinalities[q], 0.0);

    std::vector<int> assign(vars.size(), 0);
    // per-factor index offsets avoid recomputing flat indices from scratch
    while (true) {
        double mass = 1.0;
        for (const Factor& f : m.factors) {
            std::size_t idx = 0;
            for (std::size_t p = 0; p < f.scope().size(); ++p) {
                int local = static_cast<int>(
                    std::lower_bound(vars.begin(), vars.end(), f.scope()[p]) -
                    vars.begin());
                idx = idx * f.shape()[p] + assign[local];
            }
            mass *= f.values()[idx];
        }
        for (std::size_t qi = 0; qi < queries.size(); ++qi) {
            int local = static_cast<int>(
                std::lower_bound(vars.begin(), vars.end(), queries[qi]) -
                vars.begin());
            acc[qi][assign[local]] += mass;
        }
        int pos = static_cast<int>(vars.size()) - 1;
        while (pos >= 0 && ++assign[pos] == m.cardinalities[vars[pos]]) {
            assign[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    for (auto& dist : acc) {
        double total = std::accumulate(dist.begin(), dist.end(), 0.0);
        if (total <= 0.0)
            throw EngineError("brute force: zero total mass for a query");
        for (double& x : dist) x /= total;
    }
    return acc;
}

ErrorReport compare(const InferenceResult& result,
                    const std::vector<std::vector<double>>& reference,
                    const QuerySet& reference_queries) {
    if (result.queries != reference_queries ||
        result.marginals.size() != reference.size())
        throw EngineError("compare: query sets differ");
    ErrorReport rep;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        if (result.marginals[i].size() != reference[i].size())
            throw EngineError("compare: marginal arity differs");
        for (std::size_t j = 0; j < reference[i].size(); ++j) {
            double d = std::abs(result.marginals[i][j] - reference[i][j]);
            rep.max_abs_error = std::max(rep.max_abs_error, d);
            if (d > 1e-8) ++rep.incorrect;
            ++rep.total_entries;
        }
    }
    if (rep.total_entries > 0)
        rep.fraction = static_cast<double>(rep.incorrect) /
                       static_cast<double>(rep.total_entries);
    return rep;
}

InferenceResult run(const Model& m, const QuerySet& queries, const Evidence& e,
                    const EngineParams& params,
                    const std::vector<VariableId>* order_override) {
    params.validate();
    Model reduced = apply_evidence(m, e, queries);
    std::vector<VariableId> order =
        order_override ? *order_override : compute_elim_order(reduced, queries);

    auto t0 = std::chrono::steady_clock::now();
    RvElimGraph g = params.use_minibuckets
                        ? build_minibucket(reduced, order, queries,
                                           params.minibuckets)
                        : build(reduced, order, queries);

    InferenceResult r;
    if (params.use_bisimulation && params.epsilon > 0.0) {
        // factor binning computes every block's table as it partitions;
        // no separate evaluation pass
        FactorBinningResult fb =
            factor_binning_bisimulation(g, reduced, params.epsilon);
        r.queries = g.query_order;
        r.stats.vertices = static_cast<int>(g.vertices.size());
        r.stats.blocks = fb.partition.num_blocks();
        r.stats.ops = fb.ops;
        r.stats.intermediate_factors = fb.factors_materialized;
        std::map<VariableId, int> leaf_of;
        for (const auto& [q, v] : g.marginal_leaf)
            leaf_of[q] = fb.partition.block_of[v];
        fill_marginals(r, fb.block_factor, leaf_of);
    } else {
        Partition p = !params.use_bisimulation ? identity_partition(g)
                      : params.path_length == kInfinitePathLength
                          ? exact_bisimulation(g)
                          : approx_bisimulation(g, params.path_length);
        r = evaluate(g, compress(g, p), reduced);
    }
    auto t1 = std::chrono::steady_clock::now();
    r.stats.wall_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    r.has_z = !params.use_minibuckets && params.epsilon == 0.0 &&
              (!params.use_bisimulation ||
               params.path_length == kInfinitePathLength);
    if (!r.has_z) r.z = 0.0;
    return r;
}

}  // namespace lve
