#pragma once

#include "elim_order.h"
#include "partition.h"

namespace lve {

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kInfinitePathLength = -1;

// Unified engine knobs: lifting on/off, bisimulation path length
// (kInfinitePathLength = exact), factor-binning threshold, and the
// mini-bucket schedule.
struct EngineParams {
    bool use_bisimulation = true;
    int path_length = kInfinitePathLength;
    double epsilon = 0.0;
    bool use_minibuckets = false;
    MiniBucketSpec minibuckets;

    void validate() const;
};

struct Stats {
    double wall_ms = 0.0;
    OpCount ops;
    std::uint64_t intermediate_factors = 0;
    int blocks = 0;
    int vertices = 0;
};

// All-marginals answer: normalized distribution plus the raw leaf table
// per query, the partition function when the mode is exact, and the
// work metrics.
struct InferenceResult {
    QuerySet queries;
    std::vector<std::vector<double>> marginals;
    std::vector<std::vector<double>> unnormalized;
    bool has_z = false;
    double z = 0.0;
    Stats stats;
};

// One node per partition block. parent_blocks is in the representative's
// original multiplication order (conflict-resolved under approximate
// partitions), so evaluation repeats the representative's arithmetic.
struct CompressedNode {
    bool is_root = false;
    int representative = -1;
    int factor_index = -1;             // roots only
    std::vector<int> parent_blocks;    // internal only
    VariableId eliminated = kNoVariable;
    ElimOp op = ElimOp::Sum;
};

struct CompressedGraph {
    std::vector<CompressedNode> nodes;  // node id == block id
    std::vector<int> order;             // topological processing order
    std::map<VariableId, int> marginal_leaf;
    QuerySet query_order;
};

// Multi-candidate edges (approximate partitions only) keep the parent
// block with the most members, ties by smallest block id.
CompressedGraph compress(const RvElimGraph& g, const Partition& p);

// Bottom-up evaluation: parent tables re-scoped positionally onto the
// representative's parent scopes, multiplied in edge order, eliminated.
InferenceResult evaluate(const RvElimGraph& g, const CompressedGraph& cg,
                         const Model& m);

// Uncompressed baseline: evaluate under the identity partition.
InferenceResult ground_evaluate(const RvElimGraph& g, const Model& m);

// Exhaustive-enumeration oracle; refuses joint state spaces above 2^24.
std::vector<std::vector<double>> brute_force_marginals(const Model& m,
                                                       const QuerySet& queries);

// Entries of the normalized marginals differing by more than 1e-8.
struct ErrorReport {
    std::uint64_t incorrect = 0;
    std::uint64_t total_entries = 0;
    double fraction = 0.0;
    double max_abs_error = 0.0;
};
ErrorReport compare(const InferenceResult& result,
                    const std::vector<std::vector<double>>& reference,
                    const QuerySet& reference_queries);

// Full pipeline: evidence, ordering, schedule, partition, compressed
// evaluation. order_override bypasses the ordering heuristic.
InferenceResult run(const Model& m, const QuerySet& queries, const Evidence& e,
                    const EngineParams& params,
                    const std::vector<VariableId>* order_override = nullptr);

}  // namespace lve
