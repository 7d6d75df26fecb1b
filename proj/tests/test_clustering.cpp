#include <doctest.h>

#include <algorithm>
#include <set>

#include "igpm/clustering.hpp"
#include "igpm/rng.hpp"

using namespace igpm;

namespace {

// Zachary karate club, 34 vertices / 78 edges.
constexpr std::pair<int, int> kKarate[] = {
    {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},   {0, 10},
    {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},  {1, 2},   {1, 3},
    {1, 7},   {1, 13},  {1, 17},  {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},
    {2, 9},   {2, 13},  {2, 27},  {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},  {4, 6},
    {4, 10},  {5, 6},   {5, 10},  {5, 16},  {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},
    {13, 33}, {14, 32}, {14, 33}, {15, 32}, {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32},
    {20, 33}, {22, 32}, {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25},
    {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31}, {28, 33}, {29, 32},
    {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33}};

// networkx louvain_communities reference on the unweighted graph
// (weight=None): best over 20 seeds, Q = 0.419790
constexpr double kKarateReferenceModularity = 0.41979;

TemporalGraph karate() {
    TemporalGraph g;
    for (auto [a, b] : kKarate) g.add_edge(static_cast<VertexId>(a), static_cast<VertexId>(b));
    return g;
}

TemporalGraph two_triangles(bool bridged) {
    TemporalGraph g;
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    g.add_edge(3, 4);
    g.add_edge(4, 5);
    g.add_edge(5, 3);
    if (bridged) g.add_edge(2, 3);
    return g;
}

TemporalGraph random_graph(std::size_t n, std::size_t edges, std::uint64_t seed) {
    TemporalGraph g;
    Rng rng(seed);
    for (VertexId v = 0; v < n; ++v) g.add_vertex(v, g.default_label());
    for (std::size_t e = 0; e < edges; ++e) {
        VertexId a = static_cast<VertexId>(rng.below(n));
        VertexId b = static_cast<VertexId>(rng.below(n));
        if (a != b && !g.has_edge(a, b)) g.add_edge(a, b);
    }
    return g;
}

std::set<std::set<VertexId>> community_sets(const CommunityAssignment& a) {
    std::set<std::set<VertexId>> out;
    std::vector<std::set<VertexId>> per(a.num_communities());
    for (VertexId v = 0; v < a.assignment.size(); ++v)
        if (a.assignment[v] >= 0) per[a.assignment[v]].insert(v);
    for (auto& s : per)
        if (!s.empty()) out.insert(s);
    return out;
}

}  // namespace

TEST_CASE("two disjoint triangles form two communities") {
    auto g = two_triangles(false);
    auto a = louvain(g);
    CHECK(a.num_communities() == 2);
    CHECK(a.sizes == std::vector<std::size_t>{3, 3});
    auto sets = community_sets(a);
    CHECK(sets.count({0, 1, 2}) == 1);
    CHECK(sets.count({3, 4, 5}) == 1);
}

TEST_CASE("a single clique stays one community") {
    TemporalGraph g;
    for (VertexId a = 0; a < 5; ++a)
        for (VertexId b = a + 1; b < 5; ++b) g.add_edge(a, b);
    auto a = louvain(g);
    CHECK(a.num_communities() == 1);
    CHECK(a.sizes[0] == 5);
}

TEST_CASE("edgeless graph yields singletons with zero modularity") {
    TemporalGraph g;
    for (VertexId v = 0; v < 4; ++v) g.add_vertex(v, g.default_label());
    auto a = louvain(g);
    CHECK(a.num_communities() == 4);
    CHECK(a.modularity == 0.0);
}

TEST_CASE("karate modularity is near the reference implementation") {
    auto g = karate();
    auto a = louvain(g);
    CHECK(a.modularity == doctest::Approx(kKarateReferenceModularity).epsilon(0.05));
    CHECK(std::abs(a.modularity - kKarateReferenceModularity) <= 0.02);
    // the reported value must be recomputable from the assignment
    CHECK(a.modularity == doctest::Approx(modularity_of(g, a.assignment)).epsilon(1e-12));
}

TEST_CASE("modularity is non-decreasing across sweeps") {
    auto g = karate();
    auto a = louvain(g);
    REQUIRE(a.sweep_modularity.size() >= 2);
    for (std::size_t i = 1; i < a.sweep_modularity.size(); ++i)
        CHECK(a.sweep_modularity[i] >= a.sweep_modularity[i - 1] - 1e-9);
}

TEST_CASE("recursive louvain with a loose bound matches plain louvain") {
    auto g = karate();
    auto plain = louvain(g);
    auto rec = recursive_louvain(g, g.num_vertices());
    CHECK(community_sets(plain) == community_sets(rec));
}

TEST_CASE("recursive louvain with max_size 1 fully shatters or flags") {
    auto g = two_triangles(true);
    auto a = recursive_louvain(g, 1);
    for (std::size_t c = 0; c < a.num_communities(); ++c)
        CHECK((a.sizes[c] <= 1 || a.indivisible[c]));
}

TEST_CASE("bridged triangles split at max_size 3") {
    auto g = two_triangles(true);
    auto a = recursive_louvain(g, 3);
    CHECK(a.num_communities() == 2);
    auto sets = community_sets(a);
    CHECK(sets.count({0, 1, 2}) == 1);
    CHECK(sets.count({3, 4, 5}) == 1);

    // exhaustive oracle: the triangle/triangle split is the best bipartition
    // by modularity
    double best = -1;
    std::vector<std::int32_t> best_part;
    for (int mask = 1; mask < 32; ++mask) {  // vertex 0 fixed in part 0
        std::vector<std::int32_t> part(6, 0);
        for (int v = 1; v < 6; ++v) part[v] = (mask >> (v - 1)) & 1;
        double q = modularity_of(g, part);
        if (q > best) {
            best = q;
            best_part = part;
        }
    }
    CHECK(best_part == std::vector<std::int32_t>{0, 0, 0, 1, 1, 1});
    CHECK(a.modularity == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("recursive louvain respects the size bound on random graphs") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto g = random_graph(60, 140, seed);
        auto a = recursive_louvain(g, 8);
        for (std::size_t c = 0; c < a.num_communities(); ++c)
            CHECK((a.sizes[c] <= 8 || a.indivisible[c]));
        // every vertex assigned exactly once
        std::size_t assigned = 0;
        for (VertexId v = 0; v < a.assignment.size(); ++v)
            if (a.assignment[v] >= 0) ++assigned;
        CHECK(assigned == g.num_vertices());
    }
}

TEST_CASE("clustering is deterministic") {
    auto g = random_graph(50, 120, 42);
    auto a1 = recursive_louvain(g, 6);
    auto a2 = recursive_louvain(g, 6);
    CHECK(a1.assignment == a2.assignment);
    CHECK(a1.modularity == a2.modularity);
}

TEST_CASE("isolated vertices become singleton communities") {
    TemporalGraph g;
    g.add_edge(0, 1);
    g.add_vertex(7, g.default_label());
    auto a = louvain(g);
    CHECK(a.num_communities() == 2);
    CHECK(a.sizes[a.assignment[7]] == 1);
}

TEST_CASE("recompute set is the union of touched communities") {
    auto g = two_triangles(false);
    g.add_edge(6, 7);  // third small community
    auto a = louvain(g);
    REQUIRE(a.num_communities() == 3);

    SUBCASE("empty touched set") {
        CHECK(recompute_set_from_communities(a, {}).empty());
    }
    SUBCASE("one touched vertex pulls its whole community") {
        auto set = recompute_set_from_communities(a, {4});
        CHECK(set == std::vector<VertexId>{3, 4, 5});
    }
    SUBCASE("touched spanning two of three communities") {
        // direct set computation oracle
        std::set<VertexId> expected;
        for (VertexId v : {0u, 1u, 2u, 3u, 4u, 5u}) expected.insert(v);
        auto set = recompute_set_from_communities(a, {1, 5});
        CHECK(std::set<VertexId>(set.begin(), set.end()) == expected);
    }
    SUBCASE("unassigned touched vertices pass through") {
        auto set = recompute_set_from_communities(a, {99});
        CHECK(set == std::vector<VertexId>{99});
    }
    SUBCASE("output covers touched and is a union of whole communities") {
        auto set = recompute_set_from_communities(a, {0, 6});
        std::set<VertexId> got(set.begin(), set.end());
        for (VertexId t : {0u, 6u}) CHECK(got.count(t));
        for (VertexId v : set) {
            std::int32_t c = a.community_of(v);
            for (VertexId u = 0; u < a.assignment.size(); ++u)
                if (a.community_of(u) == c) CHECK(got.count(u));
        }
    }
}
