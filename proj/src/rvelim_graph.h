#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "model.h"

namespace lve {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One vertex of the elimination DAG. Roots stand for input factors;
// internal vertices for elimination operations. Edge index i is parent
// position i+1 (multiplication order). eliminated == kNoVariable marks
// the rare multiply-only combine vertex.
inline constexpr VariableId kNoVariable = -1;

struct RvVertex {
    bool is_root = false;
    int factor_index = -1;       // roots only
    int root_label = -1;         // roots only; equal iff factors shared
    std::vector<int> parents;    // internal only; multiplication order
    VariableId eliminated = kNoVariable;
    ElimOp op = ElimOp::Sum;
    std::vector<VariableId> scope;
    std::string label;           // internal overlap label / root letter
    bool is_marginal_leaf = false;
    VariableId query = kNoVariable;
};

struct RvElimGraph {
    std::vector<int> cards;            // per model variable
    std::vector<RvVertex> vertices;    // topological (creation) order
    std::vector<int> depth;            // 0 for roots, 1+max(parents)
    std::map<VariableId, int> marginal_leaf;  // query -> vertex
    QuerySet query_order;

    int height() const;
    int num_roots() const;

    // Manual construction (used by build and by fixtures/tests).
    int add_root(const Factor& f, int factor_index, int label);
    int add_internal(std::vector<int> parents, VariableId eliminated, ElimOp op);
    void mark_marginal_leaf(int vertex, VariableId query);

    void dump(std::ostream& out) const;
};

// Interns (shape, values) content: equal label ids iff is_shared.
std::vector<int> root_labels(const std::vector<Factor>& factors);

// Overlap label per the local-id recipe, augmented with per-id domain
// cardinalities: "{[1:2],[2:2,1:2,3:2],1}". Ids are assigned by first
// appearance scanning parent scopes in multiplication order.
std::string internal_label(const std::vector<std::vector<VariableId>>& parent_scopes,
                           const std::vector<int>& cards, VariableId eliminated);

// Drops the ":card" suffixes, recovering the plain id form.
std::string strip_cardinalities(const std::string& label);

// One-pass all-marginals variable elimination schedule.
RvElimGraph build(const Model& m, const std::vector<VariableId>& order,
                  const QuerySet& queries);

struct MiniBucketSpec {
    enum class Mode { Args, Merge };
    Mode mode = Mode::Args;
    int bound = 0;  // i (max args per mini-bucket) or m (buckets merged)
};

// Mini-bucket schedule: per variable, canonical scope-subsumption
// partition, packed by argument count or merged m-at-a-time; first
// mini-bucket sums the variable out, the rest take max.
RvElimGraph build_minibucket(const Model& m, const std::vector<VariableId>& order,
                             const QuerySet& queries, const MiniBucketSpec& spec);

// Largest parent-scope union over internal vertices (the state-space
// driver of the schedule).
int max_elimination_arity(const RvElimGraph& g);

}  // namespace lve
