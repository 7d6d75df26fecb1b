#include <doctest.h>

#include <cmath>

#include "igpm/proximity.hpp"
#include "igpm/rng.hpp"

using namespace igpm;

namespace {

// closed-form 2x2 solve for the path graph a-b:
//   r_a = c + (1-c) r_b,  r_b = (1-c) r_a  =>  r_a = c / (1 - (1-c)^2)
constexpr double kC = 0.15;
constexpr double kPathA = kC / (1.0 - (1.0 - kC) * (1.0 - kC));      // 0.5405405405405406
constexpr double kPathB = (1.0 - kC) * kPathA;                       // 0.4594594594594595

TemporalGraph random_graph(std::size_t n, std::size_t extra_edges, std::uint64_t seed) {
    TemporalGraph g;
    Rng rng(seed);
    for (VertexId v = 1; v < n; ++v) g.add_edge(v, static_cast<VertexId>(rng.below(v)));  // spanning tree
    for (std::size_t e = 0; e < extra_edges; ++e) {
        VertexId a = static_cast<VertexId>(rng.below(n));
        VertexId b = static_cast<VertexId>(rng.below(n));
        if (a != b) g.add_edge(a, b);
    }
    return g;
}

}  // namespace

TEST_CASE("isolated source gets all the mass") {
    TemporalGraph g;
    g.add_vertex(5, g.default_label());
    auto vec = rwr_batch(g, 5, {});
    CHECK(vec.scores.size() == 1);
    CHECK(vec.score_of(5) == doctest::Approx(1.0));
}

TEST_CASE("path graph matches the closed-form linear system") {
    TemporalGraph g;
    g.add_edge(0, 1);
    RwrParams p;
    auto vec = rwr_batch(g, 0, p);
    CHECK(vec.score_of(0) == doctest::Approx(kPathA).epsilon(1e-5));
    CHECK(vec.score_of(1) == doctest::Approx(kPathB).epsilon(1e-5));
    CHECK(vec.score_of(0) == doctest::Approx(0.5405405405405406).epsilon(1e-5));
    CHECK(vec.score_of(1) == doctest::Approx(0.4594594594594595).epsilon(1e-5));
}

TEST_CASE("C4 symmetry: vertices equidistant from the source score equally") {
    TemporalGraph g;
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(3, 0);
    auto vec = rwr_batch(g, 0, {});
    CHECK(vec.score_of(1) == doctest::Approx(vec.score_of(3)).epsilon(1e-9));
    CHECK(vec.score_of(2) < vec.score_of(1));
}

TEST_CASE("mass conservation on connected components") {
    auto g = random_graph(60, 40, 7);
    RwrParams p;
    for (VertexId src : {0u, 17u, 42u}) {
        auto vec = rwr_batch(g, src, p);
        CHECK(vec.mass() == doctest::Approx(1.0).epsilon(p.tol * 10));
    }
}

TEST_CASE("store computes lazily and repairs after updates") {
    auto g = random_graph(50, 30, 3);
    RwrParams params;
    ProximityStore store(g, params);
    CHECK(store.size() == 0);
    store.get(4);
    store.get(31);
    CHECK(store.size() == 2);

    SUBCASE("empty touched set leaves the store untouched") {
        auto before4 = store.get(4);
        store.repair({});
        CHECK(store.get(4).l1_distance(before4) == 0.0);
    }

    SUBCASE("one added edge, repaired vector agrees with a fresh batch run") {
        UpdateBatch b{1, {UpdateEvent::edge_add(11, 38)}};
        auto applied = g.apply_batch(b);
        store.repair(applied.touched);
        for (VertexId src : {4u, 31u}) {
            auto fresh = rwr_batch(g, src, params);
            CHECK(store.get(src).l1_distance(fresh) <= 1e-4);
        }
    }

    SUBCASE("removal repair also converges to the batch answer") {
        // remove an edge that exists in the generated graph
        VertexId u = 4;
        VertexId v = g.neighbors(4).front();
        UpdateBatch b{1, {UpdateEvent::edge_remove(u, v)}};
        auto applied = g.apply_batch(b);
        store.repair(applied.touched);
        for (VertexId src : {4u, 31u}) {
            auto fresh = rwr_batch(g, src, params);
            CHECK(store.get(src).l1_distance(fresh) <= 1e-4);
        }
    }
}

TEST_CASE("update in a disconnected component leaves cached vectors alone") {
    TemporalGraph g;
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(10, 11);  // far component
    ProximityStore store(g, {});
    auto before = store.get(0);

    UpdateBatch b{1, {UpdateEvent::edge_add(11, 12)}};
    auto applied = g.apply_batch(b);
    store.repair(applied.touched);
    CHECK(store.get(0).l1_distance(before) <= store.params().push_tol);
}

TEST_CASE("edges far outside the source's reach leave the vector unchanged") {
    // long path: 0-1-2-...-199; source at 0, edits around 150+ carry
    // (1-c)^150 of mass, far below push_tol
    TemporalGraph g;
    for (VertexId v = 0; v + 1 < 200; ++v) g.add_edge(v, v + 1);
    ProximityStore store(g, {});
    auto before = store.get(0);

    UpdateBatch b{1, {UpdateEvent::edge_add(150, 170), UpdateEvent::edge_add(180, 195)}};
    auto applied = g.apply_batch(b);
    store.repair(applied.touched);
    auto after = store.get(0);
    for (const auto& [v, s] : after.scores)
        CHECK(std::abs(s - before.score_of(v)) <= store.params().push_tol);
}

TEST_CASE("repeated incremental repairs stay within agreement tolerance") {
    auto g = random_graph(50, 25, 99);
    RwrParams params;
    ProximityStore store(g, params);
    for (VertexId src = 0; src < 10; ++src) store.get(src);

    Rng rng(1234);
    std::uint32_t step = 0;
    for (int round = 0; round < 20; ++round) {
        UpdateBatch b{++step, {}};
        VertexId a = static_cast<VertexId>(rng.below(50));
        VertexId c = static_cast<VertexId>(rng.below(50));
        if (a == c) c = (c + 1) % 50;
        if (!g.has_edge(a, c))
            b.events.push_back(UpdateEvent::edge_add(a, c));
        else
            b.events.push_back(UpdateEvent::edge_remove(a, c));
        auto applied = g.apply_batch(b);
        store.repair(applied.touched);
    }
    for (VertexId src = 0; src < 10; ++src) {
        auto fresh = rwr_batch(g, src, params);
        CHECK(store.get(src).l1_distance(fresh) <= 1e-4);
    }
}

TEST_CASE("rwr rejects bad arguments") {
    TemporalGraph g;
    g.add_edge(0, 1);
    RwrParams p;
    p.restart_prob = 1.5;
    CHECK_THROWS(rwr_batch(g, 0, p));
    CHECK_THROWS(rwr_batch(g, 99, {}));
}
