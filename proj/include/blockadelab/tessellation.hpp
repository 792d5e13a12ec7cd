#pragma once

// The fully-symmetric Z2-loop tessellation on the honeycomb lattice: lattice
// index maps, the blockade graph (FSU copies amalgamated on edge port pairs),
// the loop-configuration language, plaquette/loop automorphisms, and the
// frustration-free decomposition of the classical Hamiltonian. Also the
// single-port XOR tessellation (negative control) and the literature models
// used for the quotient/automorphism cross-checks.
//
// Honeycomb conventions (cell (i,j), two sublattice vertices per cell):
//   vertex (i,j,0) has slot edges [e0(i,j), e1(i,j), e2(i,j)]
//   vertex (i,j,1) has slot edges [e0(i,j), e1(i+1,j), e2(i,j+1)]
// With open (rough) boundaries the missing endpoints leave dangling edges;
// every vertex is always trivalent. Each edge carries a light ("string") and
// a dark atom; a vertex carries a 4-atom tetrahedron. The light atom of the
// slot-k edge is blockaded with tetra pair sigma_k = {{2,3},{0,3},{1,3}}[k],
// the dark atom with tau_k = {{0,1},{1,2},{0,2}}[k].

#include <array>
#include <cstdint>
#include <string>

#include "blockadelab/core.hpp"
#include "blockadelab/symmetry.hpp"

namespace blockadelab {

enum class Boundary { periodic, open_rough };

struct LoopLattice {
    int nx = 0, ny = 0;
    Boundary boundary = Boundary::periodic;

    struct Vertex {
        int cell_i = 0, cell_j = 0, sub = 0;
        std::array<int, 3> edges{-1, -1, -1};  // edge id per slot
        std::array<int, 4> tetra{-1, -1, -1, -1};  // atom ids
    };
    struct Edge {
        std::array<int, 2> vertex{-1, -1};  // -1 when dangling (rough boundary)
        std::array<int, 2> slot{-1, -1};
        int light_atom = -1, dark_atom = -1;
    };
    struct Plaquette {
        std::array<int, 6> vertices{};
        std::array<int, 6> edges{};
    };

    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<Plaquette> plaquettes;
    int num_atoms = 0;

    int vertex_id(int i, int j, int sub) const { return 2 * (j * nx + i) + sub; }
};

struct LoopStructure {
    BlockadeGraph graph;
    LoopLattice lattice;
};

// Tetrahedron atoms carry 4Δ, interior edge atoms 2Δ (two amalgamated 1Δ
// wings), dangling edge atoms 1Δ. Periodic lattices need nx, ny >= 2.
LoopStructure build_loop_structure(int nx, int ny, Boundary boundary);

// All ground-state configurations: every edge in exactly one of the two
// states, XOR constraint at each vertex, tetrahedron ancilla forced by the
// local string pattern. Computed as the GF(2) kernel of the vertex-edge
// incidence map; refuses above max_dim free bits.
Language loop_language(const LoopStructure& ls, int max_dim = 20);

// Basis of valid loop supports (edge-id subsets): fundamental cycles plus, on
// rough patches, boundary-ending strings; on tori it spans homology as well.
std::vector<std::vector<int>> loop_support_basis(const LoopLattice& l);

struct PlaquettePermutation {
    int plaquette = -1;  // -1 for general loop automorphisms
    Permutation permutation;
    std::vector<int> edge_swaps;                      // edge ids with swapped pairs
    std::vector<std::pair<int, int>> vertex_factors;  // (vertex id, alpha slot)
};

// Automorphism attached to an arbitrary even-internal-degree edge subset
// (closed loops; on rough patches also strings ending on dangling edges).
// The result is verified against the blockade graph; a verification failure
// is a construction bug and throws.
PlaquettePermutation loop_automorphism(const LoopStructure& ls, const std::vector<int>& edge_subset);

// The hexagon-local special case: six edge swaps + six vertex factors.
PlaquettePermutation plaquette_automorphism(const LoopStructure& ls, int plaquette);

PlaquettePermutation loop_automorphism_from_plaquettes(const LoopStructure& ls,
                                                       const std::vector<int>& plaquettes);

// Non-contractible cycle around direction 0 (x) or 1 (y); periodic only.
PlaquettePermutation homology_cycle_automorphism(const LoopStructure& ls, int direction);

// GF(2) helpers over edge subsets.
int gf2_rank(const std::vector<std::vector<int>>& subsets, int num_edges);
bool in_gf2_span(const std::vector<std::vector<int>>& subsets, const std::vector<int>& target,
                 int num_edges);

struct LocalTerm {
    int cell_i = 0, cell_j = 0;
    std::vector<int> atoms;
    std::vector<double> detuning_coeff;  // units of Δ; halved on shared edge atoms
    std::vector<std::pair<int, int>> blockade_pairs;

    // -sum coeff*n_i over excited atoms; +infinity-free: blockade violations
    // are reported separately by the caller via the pairs.
    double classical_energy(const Configuration& c) const;
};

// Per-cell local terms H_{0,I}; they sum to the global classical Hamiltonian
// and every loop configuration minimizes each term.
std::vector<LocalTerm> frustration_free_decomposition(const LoopStructure& ls);

// Honeycomb tessellation with a single port atom per edge and a K3 gadget per
// vertex (the port on edge e is blockaded with the gadget atoms of its
// endpoints that do not point along e). Ports carry 1Δ, gadget atoms 2Δ.
BlockadeGraph build_singleport_xor_tessellation(int nx, int ny, Boundary boundary,
                                                std::vector<int>* ports_out = nullptr);

// Periodic blockade graphs of the published tessellations:
//   verresen: line graph of the kagome lattice (uniform weights)
//   zeng:     square-lattice dimer gadget (K4 per vertex, port per link)
//   stastny:  the single-port XOR honeycomb tessellation above
BlockadeGraph build_literature_model(const std::string& name, int nx, int ny,
                                     std::vector<int>* ports_out = nullptr);

}  // namespace blockadelab
