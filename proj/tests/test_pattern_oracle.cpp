#include <doctest.h>

#include <algorithm>
#include <set>

#include "igpm/oracle.hpp"
#include "igpm/pattern.hpp"
#include "igpm/rng.hpp"

using namespace igpm;

namespace {

TemporalGraph triangle_graph() {
    TemporalGraph g;
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    return g;
}

TemporalGraph k_n(std::size_t n) {
    TemporalGraph g;
    for (VertexId a = 0; a < n; ++a)
        for (VertexId b = a + 1; b < n; ++b) g.add_edge(a, b);
    return g;
}

// O(n^q) enumeration over all injective qid->vertex tuples; second oracle for
// the backtracking one.
std::set<std::vector<VertexId>> enumerate_all(const TemporalGraph& g, const QueryPattern& q) {
    
    auto ids = g.vertex_ids();
    std::set<std::vector<VertexId>> out;
    std::vector<VertexId> mapping(q.size());
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == q.size()) {
            for (auto [a, b] : q.edges)
                if (!g.has_edge(mapping[a], mapping[b]) && !g.has_edge(mapping[b], mapping[a]))
                    return;
            out.insert(canonical_mapping(mapping, q));
            return;
        }
        for (VertexId v : ids) {
            if (g.label(v) != q.vertex_labels[depth]) continue;
            bool used = false;
            for (std::size_t i = 0; i < depth; ++i)
                if (mapping[i] == v) used = true;
            if (used) continue;
            mapping[depth] = v;
            self(self, depth + 1);
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace

TEST_CASE("builtin patterns have the advertised shapes") {
    LabelTable labels;
    auto tri = make_pattern(BuiltinPattern::Triangle, labels);
    CHECK(tri.size() == 3);
    CHECK(tri.edges.size() == 3);

    auto sq = make_pattern(BuiltinPattern::Square, labels);
    CHECK(sq.size() == 4);
    CHECK(sq.edges.size() == 4);

    auto star = make_pattern(BuiltinPattern::Star5, labels);
    CHECK(star.size() == 5);
    CHECK(star.edges.size() == 4);
    CHECK(star.adj[0].size() == 4);  // one degree-4 hub
    for (std::uint32_t leaf = 1; leaf < 5; ++leaf) CHECK(star.adj[leaf].size() == 1);

    auto k4 = make_pattern(BuiltinPattern::K4, labels);
    CHECK(k4.size() == 4);
    CHECK(k4.edges.size() == 6);
}

TEST_CASE("pattern validation rejects malformed inputs") {
    LabelTable labels;
    LabelId v = labels.intern("V");

    QueryPattern disconnected;
    disconnected.vertex_labels = {v, v, v, v};
    disconnected.edges = {{0, 1}, {2, 3}};
    CHECK_THROWS(disconnected.finalize());

    QueryPattern edgeless;
    edgeless.vertex_labels = {v, v};
    CHECK_THROWS(edgeless.finalize());

    QueryPattern self_loop;
    self_loop.vertex_labels = {v, v};
    self_loop.edges = {{0, 0}, {0, 1}};
    CHECK_THROWS(self_loop.finalize());
}

TEST_CASE("pattern file round-trip") {
    LabelTable labels;
    auto star = make_pattern(BuiltinPattern::Star5, labels);
    save_pattern(star, labels, "pattern_tmp.json");
    LabelTable labels2;
    auto loaded = load_pattern("pattern_tmp.json", labels2);
    CHECK(loaded.size() == star.size());
    CHECK(loaded.edges == star.edges);
    std::remove("pattern_tmp.json");
}

TEST_CASE("triangle embeddings in small graphs") {
    LabelTable labels;
    auto tri = make_pattern(BuiltinPattern::Triangle, labels);

    auto g = triangle_graph();
    auto res = brute_force_embeddings(g, tri);
    CHECK(res.count() == 1);  // modulo automorphism

    auto k4 = k_n(4);
    CHECK(brute_force_embeddings(k4, tri).count() == 4);  // C(4,3)

    auto sq = make_pattern(BuiltinPattern::Square, labels);
    CHECK(brute_force_embeddings(g, sq).count() == 0);
}

TEST_CASE("oracle contains() recognizes any automorphic image") {
    LabelTable labels;
    auto tri = make_pattern(BuiltinPattern::Triangle, labels);
    auto g = triangle_graph();
    auto res = brute_force_embeddings(g, tri);
    CHECK(res.contains({0, 1, 2}, tri));
    CHECK(res.contains({2, 0, 1}, tri));
    CHECK(res.contains({1, 0, 2}, tri));
    CHECK_FALSE(res.contains({0, 1, 1}, tri));
}

TEST_CASE("labels restrict embeddings") {
    LabelTable labels;
    LabelId v = labels.intern("V");
    LabelId x = labels.intern("X");

    QueryPattern p;
    p.vertex_labels = {v, x};
    p.edges = {{0, 1}};
    p.finalize();

    TemporalGraph g;
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    // interning into the graph's table keeps label ids aligned
    REQUIRE(g.labels().intern("V") == v);
    REQUIRE(g.labels().intern("X") == x);
    g.set_label(1, x);

    auto res = brute_force_embeddings(g, p);
    // (0,1) and (2,1) are the only label-consistent embeddings
    CHECK(res.count() == 2);
}

TEST_CASE("backtracking oracle agrees with full enumeration on random graphs") {
    LabelTable labels;
    auto tri = make_pattern(BuiltinPattern::Triangle, labels);
    auto sq = make_pattern(BuiltinPattern::Square, labels);
    auto k4 = make_pattern(BuiltinPattern::K4, labels);

    Rng rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        TemporalGraph g;
        std::size_t n = 6 + rng.below(7);  // up to 12 vertices
        for (VertexId v = 0; v < n; ++v) g.add_vertex(v, g.default_label());
        std::size_t edges = n + rng.below(2 * n);
        for (std::size_t e = 0; e < edges; ++e) {
            VertexId a = static_cast<VertexId>(rng.below(n));
            VertexId b = static_cast<VertexId>(rng.below(n));
            if (a != b && !g.has_edge(a, b)) g.add_edge(a, b);
        }
        for (const auto* pat : {&tri, &sq, &k4}) {
            auto fast = brute_force_embeddings(g, *pat);
            auto slow = enumerate_all(g, *pat);
            CHECK(std::set<std::vector<VertexId>>(fast.embeddings.begin(), fast.embeddings.end()) ==
                  slow);
        }
    }
}

TEST_CASE("oracle refuses oversized inputs") {
    LabelTable labels;
    auto tri = make_pattern(BuiltinPattern::Triangle, labels);
    TemporalGraph g;
    for (VertexId v = 0; v + 1 < 30; ++v) g.add_edge(v, v + 1);
    CHECK_THROWS(brute_force_embeddings(g, tri, /*vertex_cap=*/10));
}
