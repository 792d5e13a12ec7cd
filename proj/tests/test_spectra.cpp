#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>

#include "blockadelab/catalog.hpp"
#include "blockadelab/combinatorics.hpp"
#include "blockadelab/spectra.hpp"
#include "blockadelab/tessellation.hpp"

using namespace blockadelab;

namespace {

HamiltonianSpec spec_for(const BlockadeGraph& g, double omega, double delta = 1.0) {
    HamiltonianSpec s;
    s.graph = g;
    s.omega = omega;
    s.delta_unit = delta;
    return s;
}

std::vector<double> all_eigenvalues(const HamiltonianSpec& spec) {
    auto h = build_hamiltonian(spec);
    std::vector<double> vals;
    DenseMatrix vecs;
    EigenSolveOptions opts;
    lowest_eigenpairs(h, static_cast<int>(h.dim()), vals, vecs, opts);
    return vals;
}

}  // namespace

TEST_CASE("classical spectra of the small gates") {
    // NOT gate at Ω = 0: two degenerate single-excitation states and the vacuum
    auto nt = build_not();
    auto vals = all_eigenvalues(spec_for(nt.graph, 0.0));
    REQUIRE(vals.size() == 3);
    CHECK(vals[0] == doctest::Approx(-1.0));
    CHECK(vals[1] == doctest::Approx(-1.0));
    CHECK(vals[2] == doctest::Approx(0.0));

    // NOR at Ω = 0: four-fold degenerate ground manifold at the oracle-derived
    // energy -2Δ, gapped by exactly 1Δ
    auto nor = build_nor();
    auto nvals = all_eigenvalues(spec_for(nor.graph, 0.0));
    for (int i = 0; i < 4; ++i) CHECK(nvals[i] == doctest::Approx(-2.0));
    CHECK(nvals[4] == doctest::Approx(-1.0));
    CHECK(mwis(nor.graph).max_weight == 2);
}

TEST_CASE("finite blockade strength reproduces the constrained spectra") {
    // the physical finite-U shift is of order Ω²/u0, so the 1e-8 agreement is
    // checked at small Ω with u0 = 1000 ΣΔ (any u0 >= 100 ΣΔ is admissible)
    for (const char* name : {"not", "nor", "or", "icrs", "fsu"}) {
        auto gate = build_gate(name);
        auto constrained = spec_for(gate.graph, 0.005);
        HamiltonianSpec finite = constrained;
        finite.u0 = 10000.0 * static_cast<double>(gate.graph.total_weight());
        auto vc = all_eigenvalues(constrained);
        auto vf = all_eigenvalues(finite);
        int k = std::min<std::size_t>(vc.size(), gate.expected_full_language.size() + 2);
        for (int i = 0; i < k; ++i)
            CHECK(vf[i] == doctest::Approx(vc[i]).epsilon(1e-8));
        // the NOT ground manifold is bitwise unchanged at moderate finite u0
        if (std::string(name) == "not") {
            HamiltonianSpec u100 = spec_for(gate.graph, 0.0);
            u100.u0 = 100.0;
            auto v100 = all_eigenvalues(u100);
            CHECK(v100[0] == doctest::Approx(-1.0));
            CHECK(v100[1] == doctest::Approx(-1.0));
            CHECK(v100[2] == doctest::Approx(0.0));
            CHECK(v100[3] == doctest::Approx(100.0 - 2.0));
        }
    }
    // u0 below the total detuning is rejected
    auto fsu = build_fsu(false);
    HamiltonianSpec bad = spec_for(fsu.graph, 0.1);
    bad.u0 = 1.0;
    CHECK_THROWS_AS(build_hamiltonian(bad), StructuralError);
    // basis cap refusal names the size
    HamiltonianSpec capped = spec_for(fsu.graph, 0.1);
    capped.max_basis = 10;
    CHECK_THROWS_AS(build_hamiltonian(capped), ResourceLimitError);
}

TEST_CASE("ground state analysis: equal weight iff fully symmetric") {
    // NOR: three distinct amplitude magnitudes matching the three orbits
    auto nor = build_nor();
    auto rep = ground_state_analysis(spec_for(nor.graph, 0.1), nor.expected_full_language);
    REQUIRE(rep.logical_amplitudes.size() == 4);
    double a001 = 0, a010 = 0, a100 = 0, a110 = 0;
    for (const auto& [c, amp] : rep.logical_amplitudes) {
        if (c.str() == "00100") a001 = std::abs(amp);
        if (c.str() == "01001") a010 = std::abs(amp);
        if (c.str() == "10010") a100 = std::abs(amp);
        if (c.str() == "11000") a110 = std::abs(amp);
    }
    CHECK(std::abs(a100 - a010) <= 1e-10 * a100);
    CHECK(std::abs(a100 - a001) > 1e-6 * a100);
    CHECK(std::abs(a100 - a110) > 1e-6 * a100);
    CHECK(std::abs(a001 - a110) > 1e-6 * a001);
    CHECK_FALSE(rep.equal_weight);
    CHECK(rep.unique_ground);
    CHECK(rep.logical_weight < 1.0);
    CHECK(rep.logical_weight > 0.9);

    // ICRS and FSU: equal weight to 1e-10 relative
    for (const char* name : {"icrs", "fsu"}) {
        auto gate = build_gate(name);
        auto r = ground_state_analysis(spec_for(gate.graph, 0.1), gate.expected_full_language);
        CHECK(r.unique_ground);
        CHECK(r.max_relative_spread < 1e-10);
        CHECK(r.equal_weight);
    }
}

TEST_CASE("Perron-Frobenius structure for both signs of the fluctuation") {
    for (const char* name : {"not", "nor", "or", "icrs", "fsu", "fsu-mirror"}) {
        auto gate = build_gate(name);
        for (double omega : {0.05, -0.05, 0.2, -0.2}) {
            auto rep = ground_state_analysis(spec_for(gate.graph, omega),
                                             gate.expected_full_language);
            CHECK(rep.unique_ground);
            CHECK(rep.min_abs_amplitude > 1e-12);
            CHECK(rep.sign_pattern_ok);  // (-1)^{#excited} for Ω>0, uniform sign for Ω<0
        }
    }
}

TEST_CASE("logical weight approaches one as the fluctuation vanishes") {
    auto fsu = build_fsu(false);
    double prev = 0.0;
    for (double omega : {0.3, 0.25, 0.2, 0.15, 0.1, 0.05, 0.01}) {
        auto rep = ground_state_analysis(spec_for(fsu.graph, omega), fsu.expected_full_language);
        CHECK(rep.logical_weight > prev);
        prev = rep.logical_weight;
    }
    CHECK(prev > 0.999);
}

TEST_CASE("symmetry check against the sparse matrix") {
    auto nt = build_not();
    Permutation swap01{{1, 0}};
    for (double omega : {0.0, 0.1, -0.3})
        CHECK(symmetry_check(spec_for(nt.graph, omega), swap01));

    // FSU Klein generators are symmetries
    auto fsu = build_fsu(false);
    Permutation c2a{{1, 0, 3, 2, 4, 8, 9, 7, 5, 6}};
    Permutation c2b{{3, 2, 1, 0, 7, 5, 9, 4, 8, 6}};
    CHECK(symmetry_check(spec_for(fsu.graph, 0.1), c2a));
    CHECK(symmetry_check(spec_for(fsu.graph, 0.1), c2b));

    // a non-automorphism on NOR fails
    auto nor = build_nor();
    Permutation not_auto{{2, 1, 0, 3, 4}};
    CHECK_FALSE(symmetry_check(spec_for(nor.graph, 0.1), not_auto));
}

TEST_CASE("flux sector labels and the omega-shift law on the two-FSU gadget") {
    auto ls = build_loop_structure(1, 1, Boundary::open_rough);
    REQUIRE(ls.graph.n == 18);
    // the three independent string involutions of the rough patch
    std::vector<Permutation> involutions;
    for (const auto& subset : loop_support_basis(ls.lattice))
        involutions.push_back(loop_automorphism(ls, subset).permutation);
    REQUIRE(involutions.size() == 3);
    for (const auto& u : involutions) CHECK(u.then(u).is_identity());
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a + 1; b < 3; ++b)
            CHECK(involutions[a].then(involutions[b]) == involutions[b].then(involutions[a]));

    HamiltonianSpec spec = spec_for(ls.graph, 0.15);
    spec.plaquette_perms = involutions;
    spec.plaquette_omega = 0.37;
    for (const auto& u : involutions) CHECK(symmetry_check(spec, u));

    auto flux = flux_sector_labels(spec);
    const std::size_t d = flux.energies.size();
    CHECK(d == 2432);  // joint basis of two constrained FSU copies

    // ground state is flux-free
    for (int f : flux.flux.front()) CHECK(f == 0);

    // every reported eigenvector is a ±1 eigenvector of every involution
    auto hb = build_hamiltonian(spec_for(ls.graph, 0.15));
    for (int p = 0; p < 3; ++p) {
        std::vector<int> map(d);
        for (std::size_t a = 0; a < d; ++a)
            map[a] = static_cast<int>(
                hb.basis_index(permute_mask(involutions[p], hb.basis[a], hb.n_atoms)));
        for (std::size_t k = 0; k < d; k += 97) {  // sampled columns
            double sign = flux.flux[k][p] ? -1.0 : 1.0;
            double worst = 0;
            for (std::size_t a = 0; a < d; ++a) {
                double uv = flux.vectors.at(static_cast<int>(map[a]), static_cast<int>(k));
                double sv = sign * flux.vectors.at(static_cast<int>(a), static_cast<int>(k));
                worst = std::max(worst, std::abs(uv - sv));
            }
            CHECK(worst < 1e-12);
        }
    }

    // independent route: assemble the shifted Hamiltonian densely and compare
    // against the projector reconstruction sum_k (E_k + w |xi_k|) v_k v_k^T
    auto h_shifted = build_hamiltonian(spec);
    auto dense = h_shifted.dense();
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> D(
        dense.a.data(), dense.n, dense.n);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> V(
        flux.vectors.a.data(), flux.vectors.n, flux.vectors.n);
    Eigen::VectorXd shifted(d);
    for (std::size_t i = 0; i < d; ++i) shifted[i] = flux.shifted_energies[i];
    Eigen::MatrixXd recon = V * shifted.asDiagonal() * V.transpose();
    double max_abs_diff = (recon - D).cwiseAbs().maxCoeff();
    CHECK(max_abs_diff < 1e-9);

    // non-commuting operator: rejected
    HamiltonianSpec bad = spec_for(ls.graph, 0.15);
    Permutation lone_swap = Permutation::identity(ls.graph.n);
    std::swap(lone_swap.image[ls.lattice.edges[0].light_atom],
              lone_swap.image[ls.lattice.edges[0].dark_atom]);
    bad.plaquette_perms = {lone_swap};
    CHECK_THROWS_AS(flux_sector_labels(bad), StructuralError);
}

TEST_CASE("effective hamiltonian: order-2 closed form and symmetry structure") {
    auto nor = build_nor();
    HamiltonianSpec spec = spec_for(nor.graph, 0.03);
    auto logical = nor.expected_full_language;
    auto eff = effective_hamiltonian(spec, logical, 2);
    REQUIRE(eff.matrix.n == 4);

    // closed form: (H_eff)_mn = Ω² Σ_k V_mk V_kn / (E0 - E_k) for m != n
    auto h = build_hamiltonian(spec);
    const std::size_t d = h.dim();
    std::vector<double> e0(d);
    for (std::size_t i = 0; i < d; ++i) e0[i] = h.diag(i);
    auto idx_of = [&](const Configuration& c) { return h.basis_index(c.low_mask()); };
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            long long ia = idx_of(eff.logical.configs[a]), ib = idx_of(eff.logical.configs[b]);
            double expect = 0;
            for (std::size_t k = 0; k < d; ++k) {
                if (logical.contains(Configuration::from_mask(h.basis[k], h.n_atoms))) continue;
                int da = Configuration::from_mask(h.basis[ia] ^ h.basis[k], h.n_atoms).count();
                int db = Configuration::from_mask(h.basis[ib] ^ h.basis[k], h.n_atoms).count();
                if (da == 1 && db == 1)
                    expect += spec.omega * spec.omega / (e0[ia] - e0[k]);
            }
            CHECK(eff.matrix.at(a, b) == doctest::Approx(expect).epsilon(1e-10));
        }

    // fully-symmetric gadget: all diagonal elements equal (zero after the
    // shift removal), and the leading off-diagonal entries are all equal
    auto icrs = build_icrs();
    auto eff4 = effective_hamiltonian(spec_for(icrs.graph, 0.04), icrs.expected_full_language, 4);
    for (int a = 0; a < eff4.matrix.n; ++a)
        CHECK(std::abs(eff4.matrix.at(a, a)) < 1e-12);
    // ICRS ground states sit on a distance-4 ring: those pairs share one value
    double ring = 0;
    int ring_count = 0, zero_count = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            int dist = eff4.logical.configs[a].hamming_distance(eff4.logical.configs[b]);
            if (dist == 4) {
                if (ring == 0) ring = eff4.matrix.at(a, b);
                CHECK(eff4.matrix.at(a, b) == doctest::Approx(ring).epsilon(1e-9));
                ++ring_count;
            } else {
                CHECK(std::abs(eff4.matrix.at(a, b)) < 1e-14);
                ++zero_count;
            }
        }
    CHECK(ring_count == 4);
    CHECK(zero_count == 2);
    CHECK(std::abs(ring) > 0);

    // NOR diagonals are *not* all equal (three orbits)
    double d0 = eff.matrix.at(0, 0), d3 = eff.matrix.at(3, 3);
    CHECK(std::abs(d0 - d3) > 1e-8);

    // accidental resonance: a logical set missing a degenerate member
    Language partial;
    partial.configs = {logical.configs[0], logical.configs[1]};
    CHECK_THROWS_AS(effective_hamiltonian(spec, partial, 2), StructuralError);
    CHECK_THROWS_AS(effective_hamiltonian(spec, logical, 9), StructuralError);
}

TEST_CASE("NOR splitting scales as omega squared; order-2 matches ED to fourth order") {
    auto nor = build_nor();
    auto logical = nor.expected_full_language;

    auto ed_width = [&](double omega) {
        auto vals = all_eigenvalues(spec_for(nor.graph, omega));
        return vals[3] - vals[0];
    };
    auto eff_width = [&](double omega) {
        auto eff = effective_hamiltonian(spec_for(nor.graph, omega), logical, 2);
        // eigenvalue spread of the symmetric 4x4 via cyclic Jacobi sweeps
        std::vector<double> flat = eff.matrix.a;
        int n = 4;
        auto at = [&](int i, int j) -> double& { return flat[i * n + j]; };
        for (int sweep = 0; sweep < 60; ++sweep)
            for (int p = 0; p < n; ++p)
                for (int q = p + 1; q < n; ++q) {
                    double apq = at(p, q);
                    if (std::abs(apq) < 1e-18) continue;
                    double theta = 0.5 * std::atan2(2 * apq, at(q, q) - at(p, p));
                    double c = std::cos(theta), s = std::sin(theta);
                    for (int k = 0; k < n; ++k) {
                        double akp = at(k, p), akq = at(k, q);
                        at(k, p) = c * akp - s * akq;
                        at(k, q) = s * akp + c * akq;
                    }
                    for (int k = 0; k < n; ++k) {
                        double apk = at(p, k), aqk = at(q, k);
                        at(p, k) = c * apk - s * aqk;
                        at(q, k) = s * apk + c * aqk;
                    }
                }
        double lo = flat[0], hi = flat[0];
        for (int i = 0; i < n; ++i) {
            lo = std::min(lo, at(i, i));
            hi = std::max(hi, at(i, i));
        }
        return hi - lo;
    };

    // exponent fit over the grid: log-log least squares
    std::vector<double> omegas = {0.01, 0.02, 0.03, 0.04, 0.05};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double w : omegas) {
        double x = std::log(w), y = std::log(ed_width(w));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double n_pts = static_cast<double>(omegas.size());
    double slope = (n_pts * sxy - sx * sy) / (n_pts * sxx - sx * sx);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.025));

    // Richardson: the defect against the order-2 effective model shrinks ~ Ω^4
    double d1 = std::abs(ed_width(0.02) - eff_width(0.02));
    double d2 = std::abs(ed_width(0.04) - eff_width(0.04));
    double ratio = d2 / d1;
    CHECK(ratio > 10.0);
    CHECK(ratio < 24.0);
}

TEST_CASE("lanczos path agrees with the analytic and dense spectra") {
    // 13 uncoupled atoms: basis 2^13 forces the Lanczos path; the spectrum is
    // a sum of independent two-level systems
    BlockadeGraph g;
    g.n = 13;
    g.weights.assign(13, 1);
    double omega = 0.2, delta = 1.0;
    auto spec = spec_for(g, omega, delta);
    auto h = build_hamiltonian(spec);
    REQUIRE(h.dim() == 8192);
    std::vector<double> vals;
    DenseMatrix vecs;
    EigenSolveOptions opts;  // dense_threshold 4096 < 8192
    lowest_eigenpairs(h, 2, vals, vecs, opts);
    double eminus = 0.5 * (-delta - std::sqrt(delta * delta + 4 * omega * omega));
    double gap = std::sqrt(delta * delta + 4 * omega * omega);
    CHECK(vals[0] == doctest::Approx(13 * eminus).epsilon(1e-10));
    CHECK(vals[1] == doctest::Approx(13 * eminus + gap).epsilon(1e-8));

    // Lanczos vs dense on the same medium instance (force the Lanczos path by
    // dropping the dense threshold)
    auto nor_like = build_gate("fsu");
    auto mspec = spec_for(nor_like.graph, 0.17);
    auto mh = build_hamiltonian(mspec);
    std::vector<double> dvals, lvals;
    DenseMatrix dvecs, lvecs;
    lowest_eigenpairs(mh, 3, dvals, dvecs, EigenSolveOptions{});
    EigenSolveOptions lanczos_opts;
    lanczos_opts.dense_threshold = 10;
    lowest_eigenpairs(mh, 3, lvals, lvecs, lanczos_opts);
    for (int i = 0; i < 3; ++i) CHECK(lvals[i] == doctest::Approx(dvals[i]).epsilon(1e-9));
}
