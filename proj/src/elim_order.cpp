#include "elim_order.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "rvelim_graph.h"

namespace lve {

int InteractionGraph::index_of(VariableId v) const {
    auto it = std::lower_bound(vars.begin(), vars.end(), v);
    if (it == vars.end() || *it != v) return -1;
    return static_cast<int>(it - vars.begin());
}

InteractionGraph interaction_graph(const Model& m, const QuerySet& queries) {
    InteractionGraph g;
    std::vector<bool> active = m.active_vars();
    for (VariableId v = 0; v < m.num_vars(); ++v)
        if (active[v]) g.vars.push_back(v);

    const int n = static_cast<int>(g.vars.size());
    g.adj.resize(n);
    g.is_query.assign(n, false);
    for (VariableId q : queries) {
        int i = g.index_of(q);
        if (i >= 0) g.is_query[i] = true;
    }

    std::vector<int> labels = root_labels(m.factors);
    std::vector<std::vector<std::pair<int, int>>> incident(n);  // (label, pos)
    std::vector<std::set<int>> nbr(n);
    for (std::size_t f = 0; f < m.factors.size(); ++f) {
        const auto& scope = m.factors[f].scope();
        for (std::size_t p = 0; p < scope.size(); ++p) {
            int i = g.index_of(scope[p]);
            incident[i].emplace_back(labels[f], static_cast<int>(p));
            for (std::size_t q = p + 1; q < scope.size(); ++q) {
                int j = g.index_of(scope[q]);
                nbr[i].insert(j);
                nbr[j].insert(i);
            }
        }
    }

    g.color.resize(n);
    for (int i = 0; i < n; ++i) {
        g.adj[i].assign(nbr[i].begin(), nbr[i].end());
        std::sort(incident[i].begin(), incident[i].end());
        std::ostringstream c;
        c << m.cardinalities[g.vars[i]] << (g.is_query[i] ? "|q" : "|e");
        for (auto [l, p] : incident[i]) c << '|' << l << ':' << p;
        g.color[i] = c.str();
    }
    return g;
}

std::vector<int> model_bisimulation(const InteractionGraph& g) {
    const int n = static_cast<int>(g.vars.size());
    std::vector<int> block(n, 0);
    {
        std::map<std::string, int> seen;
        for (int i = 0; i < n; ++i)
            block[i] = seen.try_emplace(g.color[i], static_cast<int>(seen.size()))
                           .first->second;
    }
    while (true) {
        std::map<std::pair<int, std::vector<int>>, int> seen;
        std::vector<int> next(n);
        for (int i = 0; i < n; ++i) {
            std::vector<int> nb;
            nb.reserve(g.adj[i].size());
            for (int j : g.adj[i]) nb.push_back(block[j]);
            std::sort(nb.begin(), nb.end());
            next[i] = seen.try_emplace({block[i], std::move(nb)},
                                       static_cast<int>(seen.size()))
                          .first->second;
        }
        if (next == block) break;
        block = std::move(next);
    }
    return block;
}

std::vector<int> min_size_order(const InteractionGraph& g,
                                const std::vector<int>& block_of) {
    int nblocks = 0;
    for (int b : block_of) nblocks = std::max(nblocks, b + 1);
    std::vector<int> count(nblocks, 0);
    std::vector<bool> query(nblocks, false);
    std::vector<std::set<int>> adj(nblocks);
    // colors start with the cardinality, equal within a block, so the
    // block's log-domain-size can be read off any member
    std::vector<double> member_log_card(nblocks, 0.0);
    for (std::size_t i = 0; i < block_of.size(); ++i) {
        int b = block_of[i];
        ++count[b];
        member_log_card[b] =
            std::log2(std::stod(g.color[i].substr(0, g.color[i].find('|'))));
        if (g.is_query[i]) query[b] = true;
        for (int j : g.adj[i])
            if (block_of[j] != b) adj[b].insert(block_of[j]);
    }

    std::vector<bool> gone(nblocks, false);
    std::vector<int> order;
    while (true) {
        int best = -1;
        double best_cost = 0.0;
        for (int b = 0; b < nblocks; ++b) {
            if (gone[b] || query[b]) continue;
            // state-space size of eliminating one member: its own
            // domain times every neighbor-block member's domain
            double cost = member_log_card[b];
            for (int nb : adj[b])
                if (!gone[nb]) cost += count[nb] * member_log_card[nb];
            if (best < 0 || cost < best_cost) {
                best = b;
                best_cost = cost;
            }
        }
        if (best < 0) break;
        order.push_back(best);
        gone[best] = true;
        std::vector<int> live;
        for (int nb : adj[best])
            if (!gone[nb]) live.push_back(nb);
        for (std::size_t a = 0; a < live.size(); ++a)
            for (std::size_t c = a + 1; c < live.size(); ++c) {
                adj[live[a]].insert(live[c]);
                adj[live[c]].insert(live[a]);
            }
    }
    return order;
}

std::vector<VariableId> expand_order(const InteractionGraph& g,
                                     const std::vector<int>& block_of,
                                     const std::vector<int>& block_order) {
    std::vector<VariableId> out;
    for (int b : block_order)
        for (std::size_t i = 0; i < block_of.size(); ++i)
            if (block_of[i] == b && !g.is_query[i]) out.push_back(g.vars[i]);
    return out;
}

std::vector<VariableId> compute_elim_order(const Model& m, const QuerySet& queries) {
    InteractionGraph g = interaction_graph(m, queries);
    std::vector<int> block_of = model_bisimulation(g);
    std::vector<int> order = min_size_order(g, block_of);
    return expand_order(g, block_of, order);
}

}  // namespace lve
