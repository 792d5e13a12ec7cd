#pragma once

// Automorphism groups of vertex-weighted graphs, group actions on
// configurations and languages, orbit decomposition, the Burnside bound, and
// the fully-symmetric test.
//
// The engine is a partition-refinement backtracker: vertices are colored by
// (weight, degree), colors are refined by neighbor-color multisets, and a
// stabilizer chain is built by individualizing one vertex per level. The
// group order is the product of the orbit sizes along the chain; an
// independent Schreier-Sims pass over the returned generators is available as
// a cross-check.

#include <cstdint>
#include <optional>

#include "blockadelab/combinatorics.hpp"
#include "blockadelab/core.hpp"

namespace blockadelab {

struct Permutation {
    std::vector<int> image;  // vertex i -> image[i]

    static Permutation identity(int n);
    int size() const { return static_cast<int>(image.size()); }
    bool is_identity() const;
    bool is_valid() const;  // bijective on 0..n-1
    Permutation inverse() const;
    // "this then other": result(i) = other(this(i)).
    Permutation then(const Permutation& other) const;
    bool operator==(const Permutation&) const = default;
};

// Component i of the result is component p(i) of c.
Configuration act(const Permutation& p, const Configuration& c);
Language act(const Permutation& p, const Language& l);

// Weight- and adjacency-preservation check (both directions).
bool is_automorphism(const BlockadeGraph& g, const Permutation& p);

struct AutGroup {
    int n = 0;
    std::vector<Permutation> generators;
    std::uint64_t order = 1;
};

struct AutOptions {
    int vertex_limit = 512;
};

AutGroup automorphism_group(const BlockadeGraph& g, const AutOptions& opts = {});

// Order of <generators> via a deterministic Schreier-Sims stabilizer chain;
// independent of the backtracking search. base_prefix, when given, forces the
// chain to stabilize those points first (used for pointwise stabilizers).
std::uint64_t schreier_sims_order(int n, const std::vector<Permutation>& generators,
                                  const std::vector<int>& base_prefix = {});

// Generators of the pointwise stabilizer of `points` inside <generators>.
std::vector<Permutation> pointwise_stabilizer(int n, const std::vector<Permutation>& generators,
                                              const std::vector<int>& points);

// All n! candidates checked directly; only sensible for small n.
std::uint64_t brute_force_automorphism_count(const BlockadeGraph& g);

struct OrbitDecomposition {
    std::vector<std::vector<Configuration>> orbits;  // each sorted; ordered by smallest member
};

// BFS of l under the generators. Throws StructuralError if a generator maps a
// member outside l (the group is then not a symmetry of this language).
OrbitDecomposition orbit_decomposition(const AutGroup& a, const Language& l);

struct FullSymmetryReport {
    bool fully_symmetric = false;
    AutGroup group;
    MwisResult mwis;
    OrbitDecomposition orbits;
};

// true iff the MWIS language of g forms a single orbit under Aut(g).
FullSymmetryReport is_fully_symmetric(const BlockadeGraph& g, const std::optional<PortMap>& ports = {});

struct BurnsideReport {
    bool bound_satisfied = false;  // |A| >= |L|
    bool single_orbit = false;
    std::uint64_t aut_order = 0;
    std::uint64_t language_size = 0;
    std::size_t orbit_count = 0;
};

BurnsideReport burnside_check(const AutGroup& a, const Language& l);

// true iff p induces an isometry of the embedded structure
// (|r_i - r_j| = |r_p(i) - r_p(j)| for all pairs, tolerance 1e-9).
bool isometry_realizable(const BlockadeStructure& s, const Permutation& p);

}  // namespace blockadelab
