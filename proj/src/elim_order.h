#pragma once

#include "model.h"

namespace lve {

// Undirected variable-interaction graph over the active variables.
// Colors fold in cardinality, query status, and the sorted multiset of
// (shared-factor-label, scope position) pairs over incident factors, so
// variables playing different roles in a shared table never merge.
struct InteractionGraph {
    std::vector<VariableId> vars;          // active variables, ascending
    std::vector<std::vector<int>> adj;     // local indices, sorted, no dups
    std::vector<std::string> color;        // per local vertex
    std::vector<bool> is_query;            // per local vertex

    int index_of(VariableId v) const;      // -1 if absent
};

InteractionGraph interaction_graph(const Model& m, const QuerySet& queries);

// Coarsest partition with equal colors and block-wise equal neighbor
// multisets; iterated refinement to fixpoint. Returns block id per local
// vertex, ids contiguous from 0 in first-appearance order.
std::vector<int> model_bisimulation(const InteractionGraph& g);

// Min state-space-size heuristic on the compressed block graph: pick
// the eliminable block whose per-member elimination touches the
// smallest state space (own domain times all neighbor-block members'
// domains); connect neighbors; ties by smallest block id.
std::vector<int> min_size_order(const InteractionGraph& g,
                                const std::vector<int>& block_of);

// Block order -> ground variables: members ascending within a block.
std::vector<VariableId> expand_order(const InteractionGraph& g,
                                     const std::vector<int>& block_of,
                                     const std::vector<int>& block_order);

// Full pipeline; excludes query variables.
std::vector<VariableId> compute_elim_order(const Model& m, const QuerySet& queries);

}  // namespace lve
