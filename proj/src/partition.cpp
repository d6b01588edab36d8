#include "partition.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace lve {

namespace {

std::vector<std::vector<int>> vertices_by_depth(const RvElimGraph& g) {
    std::vector<std::vector<int>> by_depth(g.height() + 1);
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        by_depth[g.depth[v]].push_back(static_cast<int>(v));
    return by_depth;
}

// Refinement key: the vertex label plus, optionally, its parents'
// block ids in original multiplication order. Keying on the original
// edge order (rather than any canonical reordering) means two merged
// vertices multiply block-wise equal tables in the same sequence, so
// their values agree bitwise, not just mathematically.
std::string refinement_key(const RvElimGraph& g, int vid,
                           const std::vector<int>& block_of, bool with_parents) {
    const RvVertex& v = g.vertices[vid];
    std::string key = v.label;
    if (with_parents) {
        key += '|';
        for (int p : v.parents) key += std::to_string(block_of[p]) + ',';
    }
    return key;
}

// Depth-0 blocks by root label, ids in first-appearance order.
int assign_root_blocks(const RvElimGraph& g, std::vector<int>& block_of) {
    std::map<int, int> label_block;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        if (!g.vertices[v].is_root) continue;
        auto [it, fresh] = label_block.try_emplace(g.vertices[v].root_label,
                                                   static_cast<int>(label_block.size()));
        block_of[v] = it->second;
        (void)fresh;
    }
    return static_cast<int>(label_block.size());
}

Partition finalize(const RvElimGraph& g, std::vector<int> block_of,
                   std::vector<std::vector<int>> parent_order) {
    int nblocks = 0;
    for (int b : block_of) nblocks = std::max(nblocks, b + 1);
    Partition p;
    p.block_of = std::move(block_of);
    p.blocks.resize(nblocks);
    for (std::size_t v = 0; v < p.block_of.size(); ++v)
        p.blocks[p.block_of[v]].push_back(static_cast<int>(v));
    p.parent_order = std::move(parent_order);
    for (const auto& b : p.blocks)
        if (b.empty()) throw PartitionError("internal error: empty block");
    return p;
}

std::vector<std::vector<int>> identity_perms(const RvElimGraph& g) {
    std::vector<std::vector<int>> perms(g.vertices.size());
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        perms[v].resize(g.vertices[v].parents.size());
        std::iota(perms[v].begin(), perms[v].end(), 0);
    }
    return perms;
}

}  // namespace

void Partition::dump(std::ostream& out) const {
    for (std::size_t v = 0; v < block_of.size(); ++v)
        out << v << ' ' << block_of[v] << '\n';
    out << "# blocks " << blocks.size() << '\n';
    for (std::size_t b = 0; b < blocks.size(); ++b)
        out << "# block " << b << " size " << blocks[b].size() << " rep "
            << blocks[b][0] << '\n';
}

Partition identity_partition(const RvElimGraph& g) {
    std::vector<int> block_of(g.vertices.size());
    std::iota(block_of.begin(), block_of.end(), 0);
    return finalize(g, std::move(block_of), identity_perms(g));
}

Partition exact_bisimulation(const RvElimGraph& g) {
    std::vector<int> block_of(g.vertices.size(), -1);
    std::vector<std::vector<int>> perms = identity_perms(g);
    int next_block = assign_root_blocks(g, block_of);

    auto by_depth = vertices_by_depth(g);
    for (std::size_t d = 1; d < by_depth.size(); ++d) {
        std::map<std::string, int> key_block;
        for (int v : by_depth[d]) {
            std::string key = refinement_key(g, v, block_of, true);
            auto [it, fresh] = key_block.try_emplace(key, next_block);
            if (fresh) ++next_block;
            block_of[v] = it->second;
        }
    }
    return finalize(g, std::move(block_of), std::move(perms));
}

Partition approx_bisimulation(const RvElimGraph& g, int k) {
    if (k < 0) throw PartitionError("path length must be non-negative");
    std::vector<int> block_of(g.vertices.size(), -1);
    int root_blocks = assign_root_blocks(g, block_of);
    auto by_depth = vertices_by_depth(g);
    // initial partition: internal vertices grouped by depth
    for (std::size_t d = 1; d < by_depth.size(); ++d)
        for (int v : by_depth[d]) block_of[v] = root_blocks + static_cast<int>(d) - 1;

    std::vector<std::vector<int>> perms = identity_perms(g);
    std::vector<int> x = block_of;  // frozen within a round
    for (int round = 0; round <= k; ++round) {
        int next_block = root_blocks;
        std::map<std::string, int> key_block;
        std::vector<int> next(block_of);
        for (std::size_t d = 1; d < by_depth.size(); ++d) {
            for (int v : by_depth[d]) {
                // split within the current block only
                std::string key = std::to_string(block_of[v]) + '#' +
                                  refinement_key(g, v, x, round > 0);
                auto [it, fresh] = key_block.try_emplace(key, next_block);
                if (fresh) ++next_block;
                next[v] = it->second;
            }
        }
        bool changed = next != block_of && round > 0;
        bool first = round == 0;
        block_of = std::move(next);
        x = block_of;
        if (!first && !changed) break;  // fixpoint
    }
    return finalize(g, std::move(block_of), std::move(perms));
}

DsResult greedy_dominating_set(int n, const IndexDistance& dist, double eps) {
    std::vector<std::vector<int>> nbr(n);
    for (int i = 0; i < n; ++i) nbr[i].push_back(i);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (dist(i, j) <= eps) {
                nbr[i].push_back(j);
                nbr[j].push_back(i);
            }
        }
    }
    DsResult r;
    r.cover.assign(n, -1);
    std::vector<bool> covered(n, false);
    int remaining = n;
    while (remaining > 0) {
        int best = -1;
        int best_count = -1;
        for (int i = 0; i < n; ++i) {
            int count = 0;
            for (int j : nbr[i])
                if (!covered[j]) ++count;
            if (count > best_count) {
                best = i;
                best_count = count;
            }
        }
        r.representatives.push_back(best);
        r.cover[best] = best;
        for (int j : nbr[best]) {
            if (!covered[j]) {
                covered[j] = true;
                --remaining;
                if (r.cover[j] < 0) r.cover[j] = best;
            }
        }
        if (!covered[best]) {  // picked while already counted covered elsewhere
            covered[best] = true;
            --remaining;
        }
    }
    return r;
}

std::vector<int> brute_force_dominating_set(int n, const IndexDistance& dist,
                                            double eps) {
    if (n > 20)
        throw PartitionError("brute-force dominating set refuses more than 20 items");
    if (n == 0) return {};
    std::vector<std::vector<bool>> close(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        close[i][i] = true;
        for (int j = i + 1; j < n; ++j)
            if (dist(i, j) <= eps) close[i][j] = close[j][i] = true;
    }
    auto valid = [&](const std::vector<int>& d) {
        for (int i = 0; i < n; ++i) {
            bool ok = false;
            for (int r : d)
                if (close[i][r]) { ok = true; break; }
            if (!ok) return false;
        }
        return true;
    };
    // sizes ascending, lexicographic within a size
    for (int size = 1; size <= n; ++size) {
        std::vector<int> pick(size);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            if (valid(pick)) return pick;
            int i = size - 1;
            while (i >= 0 && pick[i] == n - size + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    throw PartitionError("unreachable: full set always dominates");
}

FactorBinningResult factor_binning_bisimulation(const RvElimGraph& g,
                                                const Model& m, double eps,
                                                const FactorDistance& dist) {
    if (eps < 0.0) throw PartitionError("epsilon must be non-negative");
    FactorBinningResult r;
    std::vector<int> block_of(g.vertices.size(), -1);
    std::vector<std::vector<int>> members;   // per block
    std::vector<Factor> block_factor;

    auto merge_depth_blocks = [&](const std::vector<int>& depth_blocks) {
        if (depth_blocks.size() < 2) return;
        int n = static_cast<int>(depth_blocks.size());
        DsResult ds = greedy_dominating_set(
            n,
            [&](int a, int b) {
                return dist(block_factor[depth_blocks[a]], block_factor[depth_blocks[b]]);
            },
            eps);
        for (int i = 0; i < n; ++i) {
            if (ds.cover[i] == i) continue;
            int src = depth_blocks[i];
            int dst = depth_blocks[ds.cover[i]];
            for (int v : members[src]) {
                block_of[v] = dst;
                members[dst].push_back(v);
            }
            members[src].clear();
        }
    };

    // depth 0: blocks by root label, then bin the root tables
    std::vector<int> depth_blocks;
    {
        std::map<int, int> label_block;
        for (std::size_t v = 0; v < g.vertices.size(); ++v) {
            if (!g.vertices[v].is_root) continue;
            auto it = label_block.find(g.vertices[v].root_label);
            if (it == label_block.end()) {
                int b = static_cast<int>(members.size());
                label_block.emplace(g.vertices[v].root_label, b);
                members.push_back({static_cast<int>(v)});
                block_factor.push_back(m.factors[g.vertices[v].factor_index]);
                depth_blocks.push_back(b);
                block_of[v] = b;
            } else {
                block_of[v] = it->second;
                members[it->second].push_back(static_cast<int>(v));
            }
        }
    }
    merge_depth_blocks(depth_blocks);

    std::vector<std::vector<int>> perms = identity_perms(g);
    auto by_depth = vertices_by_depth(g);
    for (std::size_t d = 1; d < by_depth.size(); ++d) {
        std::map<std::string, int> key_block;
        depth_blocks.clear();
        for (int v : by_depth[d]) {
            std::string key = refinement_key(g, v, block_of, true);
            auto it = key_block.find(key);
            if (it == key_block.end()) {
                int b = static_cast<int>(members.size());
                key_block.emplace(key, b);
                members.push_back({v});
                depth_blocks.push_back(b);
                block_of[v] = b;
                // materialize the block's factor from the merged parent
                // block factors, in the representative's build order
                const RvVertex& rep = g.vertices[v];
                Factor acc = block_factor[block_of[rep.parents[0]]].with_scope(
                    g.vertices[rep.parents[0]].scope);
                for (std::size_t p = 1; p < rep.parents.size(); ++p) {
                    Factor pf = block_factor[block_of[rep.parents[p]]].with_scope(
                        g.vertices[rep.parents[p]].scope);
                    acc = multiply(acc, pf, &r.ops);
                }
                if (rep.eliminated != kNoVariable)
                    acc = eliminate(acc, rep.eliminated, rep.op, &r.ops);
                block_factor.push_back(std::move(acc));
                ++r.factors_materialized;
            } else {
                block_of[v] = it->second;
                members[it->second].push_back(v);
            }
        }
        merge_depth_blocks(depth_blocks);
    }

    // compact away emptied blocks, keep creation order
    std::vector<int> remap(members.size(), -1);
    int next = 0;
    for (std::size_t b = 0; b < members.size(); ++b)
        if (!members[b].empty()) remap[b] = next++;
    for (int& b : block_of) b = remap[b];
    r.partition.block_of = block_of;
    r.partition.blocks.resize(next);
    r.block_factor.reserve(next);
    for (std::size_t b = 0; b < members.size(); ++b) {
        if (members[b].empty()) continue;
        std::sort(members[b].begin(), members[b].end());
        r.partition.blocks[remap[b]] = std::move(members[b]);
        r.block_factor.push_back(std::move(block_factor[b]));
    }
    r.partition.parent_order = std::move(perms);
    return r;
}

}  // namespace lve
