#include "doctest.h"

#include <random>

#include "blockadelab/symmetry.hpp"

using namespace blockadelab;

namespace {

BlockadeGraph make_graph(int n, std::vector<std::pair<int, int>> edges, std::vector<int> weights) {
    BlockadeGraph g;
    g.n = n;
    g.edges = std::move(edges);
    g.weights = std::move(weights);
    g.normalize();
    return g;
}

BlockadeGraph random_graph(std::mt19937& rng, int n, double p, int wmax) {
    BlockadeGraph g;
    g.n = n;
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (u(rng) < p) g.edges.emplace_back(i, j);
    for (int i = 0; i < n; ++i) g.weights.push_back(1 + static_cast<int>(rng() % wmax));
    g.normalize();
    return g;
}

}  // namespace

TEST_CASE("permutation action on configurations") {
    Permutation id = Permutation::identity(3);
    auto c = Configuration::from_string("011");
    CHECK(act(id, c) == c);

    Permutation swap01{{1, 0}};
    CHECK(act(swap01, Configuration::from_string("01")).str() == "10");

    // action preserves Hamming weight and pairwise distance
    std::mt19937 rng(3);
    for (int t = 0; t < 50; ++t) {
        int n = 3 + static_cast<int>(rng() % 10);
        Permutation p = Permutation::identity(n);
        std::shuffle(p.image.begin(), p.image.end(), rng);
        auto a = Configuration::from_mask(rng() & ((1u << n) - 1), n);
        auto b = Configuration::from_mask(rng() & ((1u << n) - 1), n);
        CHECK(act(p, a).count() == a.count());
        CHECK(act(p, a).hamming_distance(act(p, b)) == a.hamming_distance(b));
        // composition: acting with p then with q equals acting with q.then(p)
        Permutation q = Permutation::identity(n);
        std::shuffle(q.image.begin(), q.image.end(), rng);
        CHECK(act(q, act(p, a)) == act(q.then(p), a));
    }
}

TEST_CASE("automorphism group of small graphs") {
    // single weighted edge: the swap
    auto nt = make_graph(2, {{0, 1}}, {1, 1});
    auto a = automorphism_group(nt);
    CHECK(a.order == 2);

    // weights break the symmetry
    auto asym = make_graph(2, {{0, 1}}, {1, 2});
    CHECK(automorphism_group(asym).order == 1);

    // K4 has the full symmetric group
    auto k4 = make_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {1, 1, 1, 1});
    CHECK(automorphism_group(k4).order == 24);

    // C5: dihedral of order 10
    auto c5 = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}, {1, 1, 1, 1, 1});
    CHECK(automorphism_group(c5).order == 10);

    // C6: order 12; also a good Schreier-Sims cross-check
    auto c6 = make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}, {1, 1, 1, 1, 1, 1});
    auto a6 = automorphism_group(c6);
    CHECK(a6.order == 12);
    CHECK(schreier_sims_order(6, a6.generators) == 12);

    // empty graph on one vertex
    auto one = make_graph(1, {}, {1});
    CHECK(automorphism_group(one).order == 1);
}

TEST_CASE("generators always pass the definition check") {
    std::mt19937 rng(77);
    for (int t = 0; t < 60; ++t) {
        int n = 2 + static_cast<int>(rng() % 9);
        auto g = random_graph(rng, n, 0.3, 3);
        auto a = automorphism_group(g);
        for (const auto& p : a.generators) CHECK(is_automorphism(g, p));
        CHECK(schreier_sims_order(n, a.generators) == a.order);
    }
}

TEST_CASE("group order matches factorial brute force on random graphs") {
    std::mt19937 rng(2024);
    int checked = 0;
    while (checked < 60) {
        int n = 2 + static_cast<int>(rng() % 7);  // up to 8 vertices
        auto g = random_graph(rng, n, 0.15 + 0.1 * (checked % 7), 2);
        CHECK(automorphism_group(g).order == brute_force_automorphism_count(g));
        ++checked;
    }
    // a few 9- and 10-vertex samples
    for (int t = 0; t < 6; ++t) {
        auto g = random_graph(rng, 9 + (t % 2), 0.25, 2);
        CHECK(automorphism_group(g).order == brute_force_automorphism_count(g));
    }
}

TEST_CASE("orbit decomposition") {
    // NOR-style language under the mirror symmetry (A B)(a0 a1)
    Language l = Language::from_unsorted({
        Configuration::from_string("00100"),
        Configuration::from_string("01001"),
        Configuration::from_string("10010"),
        Configuration::from_string("11000"),
    });
    AutGroup a;
    a.n = 5;
    a.generators = {Permutation{{1, 0, 2, 4, 3}}};
    a.order = 2;
    auto dec = orbit_decomposition(a, l);
    REQUIRE(dec.orbits.size() == 3);
    // orbits ordered by smallest member
    CHECK(dec.orbits[0][0].str() == "00100");
    CHECK(dec.orbits[1].size() == 2);
    CHECK(dec.orbits[2][0].str() == "11000");

    // a generator that leaves the language is an invariance violation
    AutGroup bad;
    bad.n = 5;
    bad.generators = {Permutation{{2, 1, 0, 3, 4}}};
    bad.order = 2;
    CHECK_THROWS_AS(orbit_decomposition(bad, l), StructuralError);

    // empty language: zero orbits
    CHECK(orbit_decomposition(a, Language{}).orbits.empty());
}

TEST_CASE("burnside bound report") {
    AutGroup trivial;
    trivial.n = 3;
    trivial.order = 1;
    Language single = Language::from_unsorted({Configuration::from_string("010")});
    auto rep = burnside_check(trivial, single);
    CHECK(rep.bound_satisfied);
    CHECK(rep.single_orbit);
}

TEST_CASE("pointwise stabilizer") {
    // dihedral group of C4: stabilizer of vertex 0 is the reflection {identity, (1 3)}
    auto c4 = make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {1, 1, 1, 1});
    auto a = automorphism_group(c4);
    CHECK(a.order == 8);
    auto stab = pointwise_stabilizer(4, a.generators, {0});
    CHECK(schreier_sims_order(4, stab) == 2);
    auto stab2 = pointwise_stabilizer(4, a.generators, {0, 1});
    CHECK(schreier_sims_order(4, stab2) == 1);
}

TEST_CASE("isometry realizability") {
    // K4 as a flat unit-disk embedding: some automorphism is not an isometry
    BlockadeStructure flat;
    flat.dimension = 2;
    flat.blockade_radius = 1.0;
    flat.atoms = {{0, {0.0, 0.0}, 1}, {1, {0.5, 0.0}, 1}, {2, {0.0, 0.5}, 1}, {3, {0.5, 0.5}, 1}};
    auto g = blockade_graph_from_structure(flat);
    REQUIRE(g.edges.size() == 6);  // K4
    Permutation id = Permutation::identity(4);
    CHECK(isometry_realizable(flat, id));
    int failures = 0;
    Permutation p = Permutation::identity(4);
    do {
        if (is_automorphism(g, p) && !isometry_realizable(flat, p)) ++failures;
    } while (std::next_permutation(p.image.begin(), p.image.end()));
    CHECK(failures > 0);

    // the regular tetrahedron realizes all 24 automorphisms as isometries
    BlockadeStructure tet;
    tet.dimension = 3;
    tet.blockade_radius = 1.0;
    tet.atoms = {{0, {0.25, 0.25, 0.25}, 1},
                 {1, {0.25, -0.25, -0.25}, 1},
                 {2, {-0.25, 0.25, -0.25}, 1},
                 {3, {-0.25, -0.25, 0.25}, 1}};
    auto gt = blockade_graph_from_structure(tet);
    REQUIRE(gt.edges.size() == 6);
    Permutation q = Permutation::identity(4);
    int good = 0;
    do {
        if (isometry_realizable(tet, q)) ++good;
    } while (std::next_permutation(q.image.begin(), q.image.end()));
    CHECK(good == 24);
}
