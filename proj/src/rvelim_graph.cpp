#include "rvelim_graph.h"

#include <algorithm>
#include <list>
#include <ostream>
#include <set>
#include <sstream>

namespace lve {

namespace {

std::string root_letter(int label) {
    std::string s;
    int n = label;
    do {
        s.insert(s.begin(), static_cast<char>('a' + n % 26));
        n = n / 26 - 1;
    } while (n >= 0);
    return s;
}

std::vector<VariableId> union_scope(const std::vector<RvVertex>& vertices,
                                    const std::vector<int>& parents) {
    std::vector<VariableId> u;
    for (int p : parents)
        for (VariableId v : vertices[p].scope)
            if (std::find(u.begin(), u.end(), v) == u.end()) u.push_back(v);
    return u;
}

}  // namespace

int RvElimGraph::height() const {
    int h = 0;
    for (int d : depth) h = std::max(h, d);
    return h;
}

int RvElimGraph::num_roots() const {
    int n = 0;
    for (const RvVertex& v : vertices)
        if (v.is_root) ++n;
    return n;
}

int RvElimGraph::add_root(const Factor& f, int factor_index, int label) {
    RvVertex v;
    v.is_root = true;
    v.factor_index = factor_index;
    v.root_label = label;
    v.scope = f.scope();
    v.label = root_letter(label);
    vertices.push_back(std::move(v));
    depth.push_back(0);
    return static_cast<int>(vertices.size()) - 1;
}

int RvElimGraph::add_internal(std::vector<int> parents, VariableId eliminated,
                              ElimOp op) {
    if (parents.empty()) throw GraphError("internal vertex needs parents");
    RvVertex v;
    v.is_root = false;
    v.op = op;
    v.eliminated = eliminated;
    int d = 0;
    std::vector<std::vector<VariableId>> scopes;
    for (int p : parents) {
        if (p < 0 || p >= static_cast<int>(vertices.size()))
            throw GraphError("parent vertex out of range");
        d = std::max(d, depth[p] + 1);
        scopes.push_back(vertices[p].scope);
    }
    v.scope = union_scope(vertices, parents);
    if (eliminated != kNoVariable) {
        auto it = std::find(v.scope.begin(), v.scope.end(), eliminated);
        if (it == v.scope.end())
            throw GraphError("eliminated variable absent from all parents");
        v.scope.erase(it);
    }
    v.label = internal_label(scopes, cards, eliminated);
    v.parents = std::move(parents);
    vertices.push_back(std::move(v));
    depth.push_back(d);
    return static_cast<int>(vertices.size()) - 1;
}

void RvElimGraph::mark_marginal_leaf(int vertex, VariableId query) {
    vertices[vertex].is_marginal_leaf = true;
    vertices[vertex].query = query;
    marginal_leaf[query] = vertex;
    query_order.push_back(query);
}

void RvElimGraph::dump(std::ostream& out) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const RvVertex& v = vertices[i];
        out << i << ' ' << depth[i] << ' ' << (v.is_root ? "root" : "internal")
            << ' ' << v.label << ' ';
        if (v.is_root) {
            out << "f" << v.factor_index;
        } else {
            out << '(';
            for (std::size_t p = 0; p < v.parents.size(); ++p)
                out << (p ? "," : "") << v.parents[p];
            out << ")(";
            if (v.eliminated != kNoVariable) out << v.eliminated;
            out << ')';
        }
        if (v.is_marginal_leaf) out << " leaf:" << v.query;
        out << '\n';
    }
}

std::vector<int> root_labels(const std::vector<Factor>& factors) {
    std::vector<int> labels(factors.size(), -1);
    std::vector<int> reps;  // first factor with each label
    for (std::size_t i = 0; i < factors.size(); ++i) {
        for (std::size_t r = 0; r < reps.size(); ++r) {
            if (is_shared(factors[i], factors[reps[r]])) {
                labels[i] = static_cast<int>(r);
                break;
            }
        }
        if (labels[i] < 0) {
            labels[i] = static_cast<int>(reps.size());
            reps.push_back(static_cast<int>(i));
        }
    }
    return labels;
}

std::string internal_label(const std::vector<std::vector<VariableId>>& parent_scopes,
                           const std::vector<int>& cards, VariableId eliminated) {
    if (parent_scopes.empty())
        throw GraphError("internal_label: no parents");
    std::map<VariableId, int> id_of;
    auto local_id = [&](VariableId v) {
        auto it = id_of.find(v);
        if (it != id_of.end()) return it->second;
        int id = static_cast<int>(id_of.size()) + 1;
        id_of[v] = id;
        return id;
    };
    std::ostringstream out;
    out << '{';
    for (const auto& scope : parent_scopes) {
        out << '[';
        for (std::size_t p = 0; p < scope.size(); ++p) {
            if (p) out << ',';
            out << local_id(scope[p]) << ':' << cards[scope[p]];
        }
        out << "],";
    }
    if (eliminated != kNoVariable) {
        auto it = id_of.find(eliminated);
        if (it == id_of.end())
            throw GraphError("internal_label: eliminated variable absent from parents");
        out << it->second;
    } else {
        out.seekp(-1, std::ios_base::end);  // drop trailing comma
    }
    out << '}';
    return out.str();
}

std::string strip_cardinalities(const std::string& label) {
    std::string out;
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (label[i] == ':') {
            while (i + 1 < label.size() && std::isdigit(static_cast<unsigned char>(label[i + 1])))
                ++i;
        } else {
            out.push_back(label[i]);
        }
    }
    return out;
}

namespace {

// Shared scaffolding for build and build_minibucket: roots, a live
// pool, memoized finishing eliminations per query.
class GraphBuilder {
public:
    GraphBuilder(const Model& m, const std::vector<VariableId>& order,
                 const QuerySet& queries)
        : model_(m), order_(order), queries_(queries) {
        g_.cards = m.cardinalities;
        check_order();
        auto labels = root_labels(m.factors);
        for (std::size_t i = 0; i < m.factors.size(); ++i)
            pool_.push_back(g_.add_root(m.factors[i], static_cast<int>(i), labels[i]));
    }

    // All live pool vertices whose scope contains v, in pool order.
    std::vector<int> gather(VariableId v) const {
        std::vector<int> out;
        for (int id : pool_)
            if (g_.vertices[id].scope.end() !=
                std::find(g_.vertices[id].scope.begin(), g_.vertices[id].scope.end(), v))
                out.push_back(id);
        return out;
    }

    int emit(const std::vector<int>& used, std::vector<int> parents,
             VariableId eliminated, ElimOp op) {
        int id = g_.add_internal(std::move(parents), eliminated, op);
        for (int u : used) pool_.remove(u);
        pool_.push_back(id);
        return id;
    }

    // Finishing pass: per-query elimination of the remaining variables
    // in the query's connected component, with vertex reuse across
    // queries. Residual factors outside the component are contracted to
    // scalar masses and multiplied in, so every leaf carries the full
    // joint mass (its total is the partition function in exact modes,
    // and mini-bucket leaves dominate exact ones entrywise).
    void finish() {
        for (VariableId q : queries_) {
            std::vector<int> component = component_of(q);
            if (component.empty())
                throw GraphError("query variable " + std::to_string(q) +
                                 " appears in no factor");
            std::vector<int> local = component;
            std::set<VariableId> vars;
            for (int id : local)
                for (VariableId v : g_.vertices[id].scope)
                    if (v != q) vars.insert(v);
            for (VariableId u : vars) {
                std::vector<int> used;
                for (int id : local)
                    if (std::find(g_.vertices[id].scope.begin(), g_.vertices[id].scope.end(),
                                  u) != g_.vertices[id].scope.end())
                        used.push_back(id);
                int id = memoized_internal(used, u, ElimOp::Sum);
                std::erase_if(local, [&](int x) {
                    return std::find(used.begin(), used.end(), x) != used.end();
                });
                local.push_back(id);
            }
            for (int id : pool_) {
                if (std::find(component.begin(), component.end(), id) !=
                    component.end())
                    continue;
                local.push_back(scalar_mass(id));
            }
            int leaf;
            if (local.size() == 1) {
                leaf = local[0];
            } else {
                // residual tables over exactly the query variable plus
                // scalar masses: multiply-only combine vertex
                leaf = memoized_internal(local, kNoVariable, ElimOp::Sum);
            }
            g_.mark_marginal_leaf(leaf, q);
        }
    }

    RvElimGraph take() { return std::move(g_); }

    RvElimGraph g_;
    const Model& model_;
    const std::vector<VariableId>& order_;
    const QuerySet& queries_;
    std::list<int> pool_;

private:
    void check_order() {
        std::set<VariableId> qset(queries_.begin(), queries_.end());
        for (VariableId v : order_)
            if (qset.count(v))
                throw GraphError("elimination order mentions query variable " +
                                 std::to_string(v));
        std::set<VariableId> eliminable;
        for (const Factor& f : model_.factors)
            for (VariableId v : f.scope())
                if (!qset.count(v)) eliminable.insert(v);
        std::set<VariableId> oset(order_.begin(), order_.end());
        if (oset.size() != order_.size())
            throw GraphError("elimination order contains duplicates");
        if (oset != eliminable)
            throw GraphError("elimination order must cover exactly the eliminable variables");
    }

    // Pool vertices reachable from q through shared variables.
    std::vector<int> component_of(VariableId q) const {
        std::vector<int> live(pool_.begin(), pool_.end());
        std::set<VariableId> vars{q};
        std::set<int> comp;
        bool changed = true;
        while (changed) {
            changed = false;
            for (int id : live) {
                if (comp.count(id)) continue;
                for (VariableId v : g_.vertices[id].scope) {
                    if (vars.count(v)) {
                        comp.insert(id);
                        for (VariableId w : g_.vertices[id].scope) vars.insert(w);
                        changed = true;
                        break;
                    }
                }
            }
        }
        std::vector<int> out;
        for (int id : live)
            if (comp.count(id)) out.push_back(id);
        return out;
    }

    // Sum the factor down to an empty-scope scalar, one memoized
    // elimination per variable in ascending order.
    int scalar_mass(int id) {
        std::vector<VariableId> vars = g_.vertices[id].scope;
        std::sort(vars.begin(), vars.end());
        int cur = id;
        for (VariableId v : vars) cur = memoized_internal({cur}, v, ElimOp::Sum);
        return cur;
    }

    int memoized_internal(const std::vector<int>& parents, VariableId eliminated,
                          ElimOp op) {
        auto key = std::make_pair(parents, eliminated);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        int id = g_.add_internal(parents, eliminated, op);
        memo_[key] = id;
        return id;
    }

    std::map<std::pair<std::vector<int>, VariableId>, int> memo_;
};

}  // namespace

RvElimGraph build(const Model& m, const std::vector<VariableId>& order,
                  const QuerySet& queries) {
    GraphBuilder b(m, order, queries);
    for (VariableId v : order) {
        std::vector<int> used = b.gather(v);
        if (used.empty())
            throw GraphError("no live factor contains variable " + std::to_string(v));
        b.emit(used, used, v, ElimOp::Sum);
    }
    b.finish();
    return b.take();
}

RvElimGraph build_minibucket(const Model& m, const std::vector<VariableId>& order,
                             const QuerySet& queries, const MiniBucketSpec& spec) {
    if (spec.mode == MiniBucketSpec::Mode::Args) {
        int max_arity = 0;
        for (const Factor& f : m.factors) max_arity = std::max(max_arity, f.arity());
        if (spec.bound < max_arity)
            throw GraphError("mini-bucket argument bound " + std::to_string(spec.bound) +
                             " is below the largest factor arity " +
                             std::to_string(max_arity));
    } else if (spec.bound < 1) {
        throw GraphError("mini-bucket merge count must be positive");
    }

    GraphBuilder b(m, order, queries);
    for (VariableId v : order) {
        std::vector<int> live = b.gather(v);
        if (live.empty())
            throw GraphError("no live factor contains variable " + std::to_string(v));

        // canonical partition: descending arity, join the first bucket
        // whose leader's scope contains the vertex's scope
        std::vector<int> by_arity = live;
        std::stable_sort(by_arity.begin(), by_arity.end(), [&](int a, int c) {
            return b.g_.vertices[a].scope.size() > b.g_.vertices[c].scope.size();
        });
        std::vector<std::vector<int>> buckets;  // members; [0] is the leader
        for (int id : by_arity) {
            const auto& scope = b.g_.vertices[id].scope;
            bool placed = false;
            for (auto& bucket : buckets) {
                const auto& leader = b.g_.vertices[bucket[0]].scope;
                bool subsumed = std::all_of(scope.begin(), scope.end(), [&](VariableId x) {
                    return std::find(leader.begin(), leader.end(), x) != leader.end();
                });
                if (subsumed) {
                    bucket.push_back(id);
                    placed = true;
                    break;
                }
            }
            if (!placed) buckets.push_back({id});
        }

        // pack canonical buckets into mini-buckets
        std::vector<std::vector<int>> minibuckets;
        if (spec.mode == MiniBucketSpec::Mode::Args) {
            std::set<VariableId> cur_union;
            for (const auto& bucket : buckets) {
                std::set<VariableId> merged = cur_union;
                for (VariableId x : b.g_.vertices[bucket[0]].scope) merged.insert(x);
                if (!minibuckets.empty() &&
                    static_cast<int>(merged.size()) <= spec.bound) {
                    minibuckets.back().insert(minibuckets.back().end(), bucket.begin(),
                                              bucket.end());
                    cur_union = std::move(merged);
                } else {
                    minibuckets.push_back(bucket);
                    cur_union.clear();
                    for (VariableId x : b.g_.vertices[bucket[0]].scope)
                        cur_union.insert(x);
                }
            }
        } else {
            for (std::size_t i = 0; i < buckets.size(); i += spec.bound) {
                std::vector<int> mb;
                for (std::size_t j = i;
                     j < buckets.size() && j < i + static_cast<std::size_t>(spec.bound); ++j)
                    mb.insert(mb.end(), buckets[j].begin(), buckets[j].end());
                minibuckets.push_back(std::move(mb));
            }
        }

        // first mini-bucket sums v out, the rest take max; parents in
        // pool order so the single-bucket case matches build exactly
        std::map<int, std::size_t> pool_pos;
        for (std::size_t i = 0; i < live.size(); ++i) pool_pos[live[i]] = i;
        for (std::size_t mb = 0; mb < minibuckets.size(); ++mb) {
            std::vector<int> parents = minibuckets[mb];
            std::sort(parents.begin(), parents.end(),
                      [&](int a, int c) { return pool_pos[a] < pool_pos[c]; });
            b.emit(parents, parents, v, mb == 0 ? ElimOp::Sum : ElimOp::Max);
        }
    }
    b.finish();
    return b.take();
}

int max_elimination_arity(const RvElimGraph& g) {
    int m = 0;
    for (const RvVertex& v : g.vertices) {
        if (v.is_root) continue;
        std::set<VariableId> u;
        for (int p : v.parents)
            for (VariableId x : g.vertices[p].scope) u.insert(x);
        m = std::max(m, static_cast<int>(u.size()));
    }
    return m;
}

}  // namespace lve
