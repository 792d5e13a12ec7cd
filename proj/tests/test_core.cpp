#include "doctest.h"

#include <cmath>
#include <random>

#include "blockadelab/core.hpp"

using namespace blockadelab;

namespace {

BlockadeStructure two_atoms(double distance) {
    BlockadeStructure s;
    s.dimension = 2;
    s.blockade_radius = 1.0;
    s.atoms = {{0, {0.0, 0.0}, 1}, {1, {distance, 0.0}, 1}};
    return s;
}

}  // namespace

TEST_CASE("blockade graph from structure: closed ball") {
    auto g_in = blockade_graph_from_structure(two_atoms(0.9));
    CHECK(g_in.edges.size() == 1);
    CHECK(g_in.weights == std::vector<int>{1, 1});

    auto g_out = blockade_graph_from_structure(two_atoms(1.1));
    CHECK(g_out.edges.empty());

    // equality case: r = r_B triggers the edge
    auto g_eq = blockade_graph_from_structure(two_atoms(1.0));
    CHECK(g_eq.edges.size() == 1);
}

TEST_CASE("structure validation") {
    BlockadeStructure s = two_atoms(0.5);
    s.atoms[1].pos = s.atoms[0].pos;
    CHECK_THROWS_AS(s.validate(), StructuralError);

    s = two_atoms(0.5);
    s.atoms[0].detuning = -1;
    CHECK_THROWS_AS(s.validate(), StructuralError);

    s = two_atoms(0.5);
    s.atoms[1].id = 5;
    CHECK_THROWS_AS(blockade_graph_from_structure(s), StructuralError);
}

TEST_CASE("configuration ordering is string-lexicographic") {
    auto a = Configuration::from_string("0100");
    auto b = Configuration::from_string("1000");
    auto c = Configuration::from_string("0011");
    CHECK(c < a);
    CHECK(a < b);
    CHECK(a.str() == "0100");
    CHECK(a.count() == 1);
    CHECK(a.hamming_distance(b) == 2);
}

TEST_CASE("restrict language to ports") {
    Language l = Language::from_unsorted({
        Configuration::from_string("00100"),
        Configuration::from_string("01001"),
        Configuration::from_string("10010"),
        Configuration::from_string("11000"),
    });
    PortMap pm{{0, 1, 2}};
    auto r = restrict_language_to_ports(l, pm);
    Language want = Language::from_unsorted({
        Configuration::from_string("001"),
        Configuration::from_string("010"),
        Configuration::from_string("100"),
        Configuration::from_string("110"),
    });
    CHECK(r == want);

    // ports = all atoms is the identity
    PortMap all{{0, 1, 2, 3, 4}};
    CHECK(restrict_language_to_ports(l, all) == l);

    // empty language stays empty
    CHECK(restrict_language_to_ports(Language{}, pm).size() == 0);
}

TEST_CASE("serialization round-trips") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        BlockadeStructure s;
        s.dimension = (trial % 2) ? 3 : 2;
        s.blockade_radius = 0.5 + 0.1 * (trial % 7);
        int n = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            std::vector<double> pos;
            for (int k = 0; k < s.dimension; ++k) pos.push_back(coord(rng));
            s.atoms.push_back({i, pos, static_cast<int>(rng() % 5)});
        }
        s.validate();
        auto back = structure_from_json(to_json(s));
        CHECK(back.dimension == s.dimension);
        CHECK(back.blockade_radius == s.blockade_radius);
        REQUIRE(back.atoms.size() == s.atoms.size());
        for (int i = 0; i < n; ++i) {
            CHECK(back.atoms[i].pos == s.atoms[i].pos);  // bit-exact round-trip
            CHECK(back.atoms[i].detuning == s.atoms[i].detuning);
        }

        auto g = blockade_graph_from_structure(s);
        auto g2 = graph_from_json(to_json(g));
        CHECK(g2 == g);
    }
}

TEST_CASE("graph construction is invariant under rigid motions") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> coord(-2.0, 2.0), angle(0.0, 6.28);
    for (int trial = 0; trial < 30; ++trial) {
        BlockadeStructure s;
        s.dimension = 2;
        s.blockade_radius = 1.0;
        int n = 2 + static_cast<int>(rng() % 7);
        for (int i = 0; i < n; ++i)
            s.atoms.push_back({i, {coord(rng), coord(rng)}, 1});
        // avoid pairs sitting numerically on the blockade shell
        if (blockade_margin(s) < 1e-6) continue;
        auto g = blockade_graph_from_structure(s);

        double th = angle(rng), tx = coord(rng), ty = coord(rng);
        BlockadeStructure moved = s;
        for (auto& a : moved.atoms) {
            double x = a.pos[0], y = a.pos[1];
            a.pos[0] = std::cos(th) * x - std::sin(th) * y + tx;
            a.pos[1] = std::sin(th) * x + std::cos(th) * y + ty;
        }
        CHECK(blockade_graph_from_structure(moved).edges == g.edges);
    }
}

TEST_CASE("language text format") {
    Language l = Language::from_unsorted({
        Configuration::from_string("10"),
        Configuration::from_string("01"),
    });
    CHECK(language_to_text(l) == "01\n10\n");
    CHECK(language_from_text("10\n01\n") == l);
}
