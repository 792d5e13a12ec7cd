#pragma once

// Blockade Hamiltonians at desk scale: H = sum_{i<j} U n_i n_j
// + sum_i (Ω σ_i^x − Δ_i n_i), with U either infinite (constrained basis of
// independent sets) or finite. Optional plaquette term (ω/2) Σ_p (1 − U_p)
// with U_p given as atom permutations. Dense symmetric diagonalization up to
// dim 4096, Lanczos with full reorthogonalization above. Exact integer
// bookkeeping for diagonal entries (units of Δ and U).

#include <cstdint>
#include <map>
#include <optional>

#include "blockadelab/core.hpp"
#include "blockadelab/symmetry.hpp"

namespace blockadelab {

struct HamiltonianSpec {
    BlockadeGraph graph;
    double omega = 0.0;
    double delta_unit = 1.0;
    std::optional<double> u0;  // nullopt = infinite blockade (constrained basis)
    double plaquette_omega = 0.0;
    std::vector<Permutation> plaquette_perms;
    std::uint64_t max_basis = std::uint64_t{1} << 24;
    int threads = 0;  // 0 = hardware concurrency
};

struct DenseMatrix {
    int n = 0;
    std::vector<double> a;  // row-major
    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

class SparseHamiltonian {
  public:
    int n_atoms = 0;
    double omega = 0.0, delta_unit = 1.0, plaq_omega = 0.0;
    std::optional<double> u0;
    std::vector<std::uint64_t> basis;       // sorted ascending (numeric)
    std::vector<long long> diag_det_units;  // -sum of detunings of excited atoms
    std::vector<long long> diag_violations; // violated blockade pairs (finite U only)
    std::vector<std::vector<int>> perm_maps;  // per plaquette op: basis index map

    std::size_t dim() const { return basis.size(); }
    long long basis_index(std::uint64_t mask) const;  // -1 when absent
    double diag(std::size_t i) const;
    void apply(const double* x, double* y) const;  // y = H x
    DenseMatrix dense(int threads = 0) const;
};

SparseHamiltonian build_hamiltonian(const HamiltonianSpec& spec);

// Applies the atom permutation to a packed configuration mask.
std::uint64_t permute_mask(const Permutation& p, std::uint64_t mask, int n_atoms);

// Exact check that the permutation-induced unitary commutes with the base
// Hamiltonian: basis closure plus equality of exact diagonal bookkeeping.
bool symmetry_check(const SparseHamiltonian& h, const Permutation& p);
bool symmetry_check(const HamiltonianSpec& spec, const Permutation& p);

struct EigenSolveOptions {
    int dense_threshold = 4096;
    double residual_tol = 1e-12;
    double degeneracy_tol_units = 1e-9;  // in units of delta_unit
    int threads = 0;
};

struct SpectrumReport {
    std::vector<double> eigenvalues;  // ascending, k lowest
    double gap = 0.0;                 // E1 - E0
    bool unique_ground = false;
    std::vector<std::pair<Configuration, double>> logical_amplitudes;
    double logical_weight = 0.0;  // Λ²
    double max_relative_spread = 0.0;
    bool equal_weight = false;        // spread < 1e-10
    bool sign_pattern_ok = false;     // (-1)^{#excited} c_n > 0 for Ω>0; c_n > 0 for Ω<0
    double min_abs_amplitude = 0.0;   // over the whole basis
};

SpectrumReport ground_state_analysis(const HamiltonianSpec& spec, const Language& logical,
                                     int k_levels = 0, const EigenSolveOptions& opts = {});

// k lowest eigenpairs; vectors returned column-wise (dim x k, row-major in
// DenseMatrix). Uses the dense path or Lanczos depending on dim.
void lowest_eigenpairs(const SparseHamiltonian& h, int k, std::vector<double>& values,
                       DenseMatrix& vectors, const EigenSolveOptions& opts = {});

struct FluxReport {
    std::vector<double> energies;          // eigenvalues of the base H, ascending
    std::vector<std::vector<int>> flux;    // per eigenstate, per plaquette op (ξ_p ∈ {0,1})
    std::vector<double> shifted_energies;  // E + plaquette_omega * |ξ|
    DenseMatrix vectors;                   // joint eigenbasis, column per state
};

// Simultaneous diagonalization of H with the supplied commuting plaquette
// operators; every eigenstate is labeled by the U_p signs (−1)^{ξ_p}.
// Dense-only (dim <= dense_threshold). Throws if an operator fails to commute.
FluxReport flux_sector_labels(const HamiltonianSpec& spec, const EigenSolveOptions& opts = {});

struct EffectiveHamiltonian {
    Language logical;  // row/column order of the matrix
    int order = 0;
    DenseMatrix matrix;        // energy units, mean diagonal removed
    double removed_shift = 0;  // the constant that was subtracted
};

// Order-by-order unitary block diagonalization of H0 + ΩV onto the span of
// `logical` (which must be the exact degenerate ground manifold of H0;
// vanishing denominators are reported as accidental resonances).
EffectiveHamiltonian effective_hamiltonian(const HamiltonianSpec& spec, const Language& logical,
                                           int order, int max_order = 6);

}  // namespace blockadelab
