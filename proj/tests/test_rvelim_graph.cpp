
#include <doctest.h>

#include <sstream>

#include "fixtures.h"

using namespace lve;

TEST_CASE("root_labels interns tables by sharedness") {
    Model m = fixtures::running_model();
    CHECK(root_labels(m.factors) == std::vector<int>{0, 0, 1, 2, 3, 3, 3});
}

TEST_CASE("internal_label reproduces the overlap recipe") {
    std::vector<int> cards(7, 2);
    // (f_s1, f_i1), eliminating s1: scopes ([s1], [i1, s1, t1])
    std::string label = internal_label({{0}, {4, 0, 3}}, cards, 0);
    CHECK(strip_cardinalities(label) == "{[1],[2,1,3],1}");
    CHECK(label == "{[1:2],[2:2,1:2,3:2],1}");
}

TEST_CASE("internal_label depends on multiplication order") {
    std::vector<int> cards(7, 2);
    std::string swapped = internal_label({{4, 0, 3}, {0}}, cards, 0);
    CHECK(strip_cardinalities(swapped) == "{[1,2,3],[2],2}");
    CHECK(swapped != internal_label({{0}, {4, 0, 3}}, cards, 0));
}

TEST_CASE("internal_label embeds cardinalities so shapes are in the key") {
    std::vector<int> cards{2, 3};
    std::string a = internal_label({{0}, {0, 1}}, cards, 1);
    std::vector<int> cards2{2, 4};
    std::string b = internal_label({{0}, {0, 1}}, cards2, 1);
    CHECK(a != b);
    CHECK(strip_cardinalities(a) == strip_cardinalities(b));
}

TEST_CASE("internal_label errors") {
    std::vector<int> cards(3, 2);
    CHECK_THROWS_AS(internal_label({}, cards, 0), GraphError);
    CHECK_THROWS_AS(internal_label({{0}, {1}}, cards, 2), GraphError);
    // multiply-only label has no trailing eliminated id
    CHECK(internal_label({{0}, {1}}, cards, kNoVariable) == "{[1:2],[2:2]}");
}

TEST_CASE("build on the running example: message vertices and labels") {
    Model m = fixtures::running_model();
    RvElimGraph g = build(m, fixtures::running_order(), fixtures::running_queries());
    CHECK(g.num_roots() == 7);
    // vertex 7 eliminates s1 from (f_s1, f_i1)
    const RvVertex& ms1 = g.vertices[7];
    CHECK_FALSE(ms1.is_root);
    CHECK(ms1.parents == std::vector<int>{0, 4});
    CHECK(ms1.eliminated == 0);
    CHECK(strip_cardinalities(ms1.label) == "{[1],[2,1,3],1}");
    CHECK(ms1.scope == std::vector<VariableId>{4, 3});
    // one marginal leaf per query
    for (VariableId q : fixtures::running_queries()) {
        int leaf = g.marginal_leaf.at(q);
        CHECK(g.vertices[leaf].is_marginal_leaf);
        CHECK(g.vertices[leaf].scope == std::vector<VariableId>{q});
    }
    CHECK(g.query_order == fixtures::running_queries());
}

TEST_CASE("build: depths are parent-monotone and roots come first") {
    Model m = fixtures::running_model();
    RvElimGraph g = build(m, fixtures::running_order(), fixtures::running_queries());
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        if (g.vertices[v].is_root) {
            CHECK(g.depth[v] == 0);
            continue;
        }
        int want = 0;
        for (int p : g.vertices[v].parents) {
            CHECK(p < static_cast<int>(v));  // topological
            want = std::max(want, g.depth[p] + 1);
        }
        CHECK(g.depth[v] == want);
    }
    CHECK(g.height() >= 2);
}

TEST_CASE("build: single factor, empty order, one query") {
    Model m;
    m.cardinalities = {2};
    m.factors.emplace_back(std::vector<VariableId>{0}, std::vector<int>{2},
                           std::vector<double>{0.3, 0.7});
    RvElimGraph g = build(m, {}, {0});
    CHECK(g.vertices.size() == 1);
    CHECK(g.vertices[0].is_root);
    CHECK(g.vertices[0].is_marginal_leaf);
    CHECK(g.marginal_leaf.at(0) == 0);
}

TEST_CASE("build rejects bad orders") {
    Model m = fixtures::running_model();
    CHECK_THROWS_AS(build(m, {0, 1, 2, 3, 4}, {4, 5, 6}), GraphError);   // query in order
    CHECK_THROWS_AS(build(m, {0, 1, 2}, {4, 5, 6}), GraphError);        // t1 missing
    CHECK_THROWS_AS(build(m, {0, 1, 2, 3, 3}, {4, 5, 6}), GraphError);  // duplicate
}

TEST_CASE("finishing reuses shared eliminations across queries") {
    Model m = fixtures::running_model();
    RvElimGraph g = build(m, fixtures::running_order(), fixtures::running_queries());
    // after the main pass one table over (i1,i2,i3) remains; queries i2
    // and i3 both start by summing out i1 and must share that vertex
    std::map<std::string, int> seen;
    for (const RvVertex& v : g.vertices) {
        if (v.is_root) continue;
        std::ostringstream key;
        for (int p : v.parents) key << p << ',';
        key << '|' << v.eliminated;
        CHECK(++seen[key.str()] == 1);  // no duplicate (parents, elim) vertex
    }
}

TEST_CASE("two chains: independent messages, cross-component mass folded in") {
    Model m = fixtures::two_chain_model();
    RvElimGraph g = build(m, {1, 3}, {0, 2});
    // 4 roots, 2 messages, 2 scalar masses, 2 combine leaves
    CHECK(g.vertices.size() == 10);
    CHECK(g.vertices[4].parents == std::vector<int>{0, 1});
    CHECK(g.vertices[5].parents == std::vector<int>{2, 3});
    CHECK(g.vertices[4].label == g.vertices[5].label);
    // each leaf multiplies its own message with the other chain's mass
    int leaf0 = g.marginal_leaf.at(0);
    int leaf2 = g.marginal_leaf.at(2);
    CHECK(g.vertices[leaf0].parents.front() == 4);
    CHECK(g.vertices[leaf2].parents.front() == 5);
    CHECK(g.vertices[leaf0].eliminated == kNoVariable);
    CHECK(g.vertices[leaf0].scope == std::vector<VariableId>{0});
}

TEST_CASE("mini-bucket: single-bucket case equals the plain schedule") {
    Model m = fixtures::running_model();
    RvElimGraph plain = build(m, fixtures::running_order(), fixtures::running_queries());
    MiniBucketSpec spec;
    spec.mode = MiniBucketSpec::Mode::Args;
    spec.bound = 16;  // generous: every bucket fits
    RvElimGraph mb = build_minibucket(m, fixtures::running_order(),
                                      fixtures::running_queries(), spec);
    std::ostringstream a, b;
    plain.dump(a);
    mb.dump(b);
    CHECK(a.str() == b.str());

    spec.mode = MiniBucketSpec::Mode::Merge;
    spec.bound = 100;
    RvElimGraph merged = build_minibucket(m, fixtures::running_order(),
                                          fixtures::running_queries(), spec);
    std::ostringstream c;
    merged.dump(c);
    CHECK(a.str() == c.str());
}

TEST_CASE("mini-bucket: tight bound splits buckets, first sums, rest max") {
    Model m = fixtures::running_model();
    MiniBucketSpec spec;
    spec.mode = MiniBucketSpec::Mode::Args;
    spec.bound = 3;
    RvElimGraph g = build_minibucket(m, fixtures::running_order(),
                                     fixtures::running_queries(), spec);
    // eliminating t1 must split: the exact bucket unites four tables
    // over (t1, i1, i2, i3)
    bool saw_max = false;
    std::map<VariableId, int> sums;
    for (const RvVertex& v : g.vertices) {
        if (v.is_root) continue;
        if (v.op == ElimOp::Max) {
            saw_max = true;
            CHECK(sums.count(v.eliminated));  // a Sum bucket came first
        } else if (v.eliminated != kNoVariable) {
            if (!sums.count(v.eliminated)) sums[v.eliminated] = 1;
        }
    }
    CHECK(saw_max);
}

TEST_CASE("mini-bucket argument bound below factor arity is rejected") {
    Model m = fixtures::running_model();
    MiniBucketSpec spec;
    spec.mode = MiniBucketSpec::Mode::Args;
    spec.bound = 2;  // AND factors have arity 3
    CHECK_THROWS_AS(build_minibucket(m, fixtures::running_order(),
                                     fixtures::running_queries(), spec),
                    GraphError);
}

TEST_CASE("max_elimination_arity reports the schedule's widest union") {
    Model m = fixtures::running_model();
    RvElimGraph g = build(m, fixtures::running_order(), fixtures::running_queries());
    // eliminating t1 multiplies tables covering (t1, i1, i2, i3)
    CHECK(max_elimination_arity(g) == 4);
}

TEST_CASE("graph dump lists every vertex with depth and structure") {
    fixtures::GraphFixture fx = fixtures::hand_graph_fixture();
    std::ostringstream out;
    fx.graph.dump(out);
    std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 13);
    CHECK(text.find("leaf:4") != std::string::npos);
}
