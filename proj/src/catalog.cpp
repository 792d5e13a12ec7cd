#include "blockadelab/catalog.hpp"

#include <algorithm>
#include <map>

#include "blockadelab/combinatorics.hpp"

namespace blockadelab {

namespace {

Language lang(std::initializer_list<const char*> rows) {
    std::vector<Configuration> v;
    for (const char* r : rows) v.push_back(Configuration::from_string(r));
    return Language::from_unsorted(std::move(v));
}

BlockadeStructure make_structure(int dimension, const std::vector<std::vector<double>>& pos,
                                 const std::vector<int>& detunings) {
    BlockadeStructure s;
    s.dimension = dimension;
    s.blockade_radius = 1.0;
    for (std::size_t i = 0; i < pos.size(); ++i)
        s.atoms.push_back({static_cast<int>(i), pos[i], detunings[i]});
    return s;
}

// Unit-ball coordinates of the FSU structure (blockade radii units). Order:
// tetrahedron 1..4, then wings A, B, C (the star at tetrahedron vertex 4,
// carrying the even-parity triple) and Abar, Bbar, Cbar (the triangle wings).
const std::vector<std::vector<double>> kFsuPositions = {
    {-0.45455, -0.26243, 0.0},       // tetra 0
    {0.45455, -0.26243, 0.0},        // tetra 1
    {0.0, 0.52486, 0.0},             // tetra 2
    {0.0, 0.0, -0.74227},            // tetra 3
    {0.0, 0.7873, -0.74227},         // A    ~ {2,3}
    {-0.68182, -0.39365, -0.74227},  // B    ~ {0,3}
    {0.68182, -0.39365, -0.74227},   // C    ~ {1,3}
    {0.0, -0.7873, 0.37113},         // Abar ~ {0,1}
    {0.68182, 0.39365, 0.37113},     // Bbar ~ {1,2}
    {-0.68182, 0.39365, 0.37113},    // Cbar ~ {0,2}
};

// Bridge and outer-port coordinates of the link-extended FSU. Each wing X
// continues through bridge X to an outer port; the chain has two blockade
// steps, so the outer atom copies the wing it hangs off and the two outer
// atoms of an antipodal pair are logically inverted.
const std::vector<std::vector<double>> kFsuExtension = {
    {0.72727, 1.1547, -1.00206},    // bridge at A
    {-1.36364, 0.05249, -1.00206},  // bridge at B
    {0.63636, -1.20719, -1.00206},  // bridge at C
    {0.72727, -1.1547, 0.63093},    // bridge at Abar
    {0.63636, 1.20719, 0.63093},    // bridge at Bbar
    {-1.36364, -0.05249, 0.63093},  // bridge at Cbar
    {1.45455, 1.1547, -1.00206},    // outer port off wing A
    {-1.72727, 0.68232, -1.00206},  // outer port off wing B
    {0.27273, -1.83702, -1.00206},  // outer port off wing C
    {1.45455, -1.1547, 0.63093},    // outer port off wing Abar
    {0.27273, 1.83702, 0.63093},    // outer port off wing Bbar
    {-1.72727, -0.68232, 0.63093},  // outer port off wing Cbar
};

}  // namespace

void GateSpec::self_validate() const {
    auto res = mwis(graph);
    if (!(res.language == expected_full_language))
        throw StructuralError("gate '" + name + "' failed self-check: MWIS language mismatch");
    if (!(restrict_language_to_ports(res.language, ports) == expected_port_language))
        throw StructuralError("gate '" + name + "' failed self-check: port language mismatch");
}

GateSpec build_not() {
    GateSpec g;
    g.name = "not";
    g.graph.n = 2;
    g.graph.edges = {{0, 1}};
    g.graph.weights = {1, 1};
    g.ports.ports = {0, 1};
    g.expected_port_language = lang({"01", "10"});
    g.expected_full_language = g.expected_port_language;
    g.self_validate();
    return g;
}

GateSpec build_nor() {
    GateSpec g;
    g.name = "nor";
    g.graph.n = 5;
    // atoms: A=0, B=1, Q=2, ancillas 3 (pairs with A) and 4 (pairs with B)
    g.graph.edges = {{0, 2}, {1, 2}, {2, 3}, {2, 4}, {0, 4}, {1, 3}, {3, 4}};
    g.graph.weights = {1, 1, 2, 1, 1};
    g.graph.normalize();
    g.ports.ports = {0, 1, 2};
    g.expected_full_language = lang({"00100", "01001", "10010", "11000"});
    g.expected_port_language = lang({"001", "010", "100", "110"});
    g.self_validate();
    return g;
}

GateSpec build_icrs() {
    GateSpec g;
    g.name = "icrs";
    g.graph.n = 8;
    // ports A=0, B=1, Q=2, R=3 (1Δ); tetrahedron ancillas 4..7 (3Δ).
    // Wing edges form the 4-cycle {4,5},{5,6},{6,7},{7,4}: A/Q and B/R sit on
    // opposite tetrahedron edges, which realizes the inverted crossing.
    g.graph.edges = {{4, 5}, {4, 6}, {4, 7}, {5, 6}, {5, 7}, {6, 7},
                     {0, 4}, {0, 5}, {1, 5}, {1, 6}, {2, 6}, {2, 7}, {3, 7}, {3, 4}};
    g.graph.weights = {1, 1, 1, 1, 3, 3, 3, 3};
    g.graph.normalize();
    g.ports.ports = {0, 1, 2, 3};
    g.expected_port_language = lang({"0011", "0110", "1001", "1100"});
    g.expected_full_language = lang({
        "00110100",  // Q,R + ancilla 5
        "01101000",  // B,Q + ancilla 4
        "10010010",  // A,R + ancilla 6
        "11000001",  // A,B + ancilla 7
    });
    g.self_validate();
    return g;
}

GateSpec build_fsu(bool mirror) {
    auto pos = kFsuPositions;
    if (mirror)
        for (auto& p : pos) p[0] = -p[0];
    std::vector<int> det = {4, 4, 4, 4, 1, 1, 1, 1, 1, 1};
    GateSpec g;
    g.name = mirror ? "fsu-mirror" : "fsu";
    g.structure = make_structure(3, pos, det);
    g.graph = blockade_graph_from_structure(*g.structure);
    g.ports.ports = {4, 5, 6, 7, 8, 9};
    // one excited tetrahedron vertex + the three wings not blockaded by it
    g.expected_full_language = lang({
        "0001000111",  // tetra 3: Abar, Bbar, Cbar   -> ports 000111
        "1000101010",  // tetra 0: A, C, Bbar         -> ports 101010
        "0100110001",  // tetra 1: A, B, Cbar         -> ports 110001
        "0010011100",  // tetra 2: B, C, Abar         -> ports 011100
    });
    g.expected_port_language = lang({"000111", "101010", "110001", "011100"});
    g.self_validate();
    return g;
}

GateSpec build_fsu_extended() {
    auto pos = kFsuPositions;
    pos.insert(pos.end(), kFsuExtension.begin(), kFsuExtension.end());
    std::vector<int> det(22, 0);
    for (int i = 0; i < 4; ++i) det[i] = 4;   // tetrahedron
    for (int i = 4; i < 10; ++i) det[i] = 2;  // wings absorb one link endpoint
    for (int i = 10; i < 16; ++i) det[i] = 2; // bridges (two amalgamated NOT ports)
    for (int i = 16; i < 22; ++i) det[i] = 1; // outer ports
    GateSpec g;
    g.name = "fsu-extended";
    g.structure = make_structure(3, pos, det);
    g.graph = blockade_graph_from_structure(*g.structure);
    g.ports.ports = {16, 17, 18, 19, 20, 21};
    auto res = mwis(g.graph);
    g.expected_full_language = res.language;
    g.expected_port_language = restrict_language_to_ports(res.language, g.ports);
    if (g.expected_full_language.size() != 4)
        throw StructuralError("fsu-extended build error: language size " +
                              std::to_string(g.expected_full_language.size()));
    g.self_validate();
    return g;
}

GateSpec amalgamate(const GateSpec& a, const GateSpec& b,
                    const std::vector<std::pair<int, int>>& identify, const std::string& name) {
    const int na = a.graph.n, nb = b.graph.n;
    std::map<int, int> b_to_a;  // identified atom of b -> atom of a
    {
        std::vector<bool> seen_a(na, false), seen_b(nb, false);
        for (auto [pa, pb] : identify) {
            if (pa < 0 || pa >= na || pb < 0 || pb >= nb)
                throw StructuralError("amalgamation: identified atom out of range");
            if (seen_a[pa] || seen_b[pb])
                throw StructuralError("amalgamation: identification collides two atoms of the same parent");
            seen_a[pa] = seen_b[pb] = true;
            b_to_a[pb] = pa;
        }
    }
    GateSpec out;
    out.name = name;
    out.graph.n = na + nb - static_cast<int>(identify.size());
    out.graph.weights = a.graph.weights;
    out.graph.weights.resize(out.graph.n, 0);
    // map b's atoms to merged ids
    std::vector<int> bmap(nb, -1);
    int next = na;
    for (int v = 0; v < nb; ++v) {
        auto it = b_to_a.find(v);
        bmap[v] = (it != b_to_a.end()) ? it->second : next++;
    }
    for (int v = 0; v < nb; ++v) {
        if (b_to_a.count(v))
            out.graph.weights[bmap[v]] += b.graph.weights[v];
        else
            out.graph.weights[bmap[v]] = b.graph.weights[v];
    }
    out.graph.edges = a.graph.edges;
    for (auto [i, j] : b.graph.edges) out.graph.edges.emplace_back(bmap[i], bmap[j]);
    out.graph.normalize();
    out.graph.validate();
    // ports: a's ports, then b's ports that were not identified away
    out.ports.ports = a.ports.ports;
    for (int p : b.ports.ports)
        if (!b_to_a.count(p)) out.ports.ports.push_back(bmap[p]);
    auto res = mwis(out.graph);
    out.expected_full_language = res.language;
    out.expected_port_language = restrict_language_to_ports(res.language, out.ports);
    return out;
}

GateSpec build_or() {
    GateSpec nor = build_nor();
    GateSpec nt = build_not();
    // glue the NOT input onto the NOR output port Q (detunings add to 3Δ)
    GateSpec g = amalgamate(nor, nt, {{2, 0}}, "or");
    // logical ports: A, B and the NOT's free atom as the OR output
    g.ports.ports = {0, 1, 5};
    g.expected_full_language = mwis(g.graph).language;
    g.expected_port_language = restrict_language_to_ports(g.expected_full_language, g.ports);
    Language want = lang({"000", "011", "101", "111"});
    if (!(g.expected_port_language == want))
        throw StructuralError("or build error: port language mismatch");
    g.self_validate();
    return g;
}

GateSpec build_gate(const std::string& name) {
    if (name == "not") return build_not();
    if (name == "nor") return build_nor();
    if (name == "or") return build_or();
    if (name == "icrs") return build_icrs();
    if (name == "fsu") return build_fsu(false);
    if (name == "fsu-mirror") return build_fsu(true);
    if (name == "fsu-extended") return build_fsu_extended();
    throw StructuralError("unknown catalog name '" + name +
                          "' (expected not|nor|or|icrs|fsu|fsu-mirror|fsu-extended)");
}

}  // namespace blockadelab
