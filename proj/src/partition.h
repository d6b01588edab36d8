#pragma once

#include <functional>
#include <iosfwd>

#include "rvelim_graph.h"

namespace lve {

struct PartitionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Assignment of rv-elim vertices to blocks. parent_order holds, per
// internal vertex, the canonical permutation of its parent positions
// (ascending parent block id, ties by original edge index) computed in
// the final refinement round; compression aligns edges through it.
struct Partition {
    std::vector<int> block_of;                 // per vertex
    std::vector<std::vector<int>> blocks;      // ascending vertex ids
    std::vector<std::vector<int>> parent_order;  // per vertex

    int num_blocks() const { return static_cast<int>(blocks.size()); }
    int representative(int block) const { return blocks[block][0]; }

    void dump(std::ostream& out) const;
};

Partition identity_partition(const RvElimGraph& g);

// Algorithm: depth-stratified refinement keyed on the re-ordered
// overlap label plus parent block ids; one pass over depths.
Partition exact_bisimulation(const RvElimGraph& g);

// k-bisimilarity: X holds the previous round's partition, C the
// current one; round 0 keys on labels alone, rounds 1..k add parent
// block ids. Equals exact_bisimulation for k >= graph height.
Partition approx_bisimulation(const RvElimGraph& g, int k);

// Greedy set-cover heuristic for the dominating set induced by
// dist(i,j) <= eps; ln(n)-approximation. cover[i] is i's representative
// (itself for representatives).
struct DsResult {
    std::vector<int> representatives;
    std::vector<int> cover;
};
using IndexDistance = std::function<double(int, int)>;
DsResult greedy_dominating_set(int n, const IndexDistance& dist, double eps);

// Exact minimum dominating set by subset enumeration; test oracle,
// refuses more than 20 items.
std::vector<int> brute_force_dominating_set(int n, const IndexDistance& dist,
                                            double eps);

using FactorDistance = std::function<double(const Factor&, const Factor&)>;

// Exact bisimulation with per-depth factor materialization and
// eps-threshold binning of same-shape block factors; the computed
// tables come out as a byproduct.
struct FactorBinningResult {
    Partition partition;
    std::vector<Factor> block_factor;  // per block
    OpCount ops;
    int factors_materialized = 0;
};
FactorBinningResult factor_binning_bisimulation(
    const RvElimGraph& g, const Model& m, double eps,
    const FactorDistance& dist = rms_distance);

}  // namespace lve
