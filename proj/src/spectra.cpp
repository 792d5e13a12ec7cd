#include "blockadelab/spectra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <thread>

#include <Eigen/Dense>

#include "blockadelab/combinatorics.hpp"

namespace blockadelab {

namespace {

std::vector<std::uint64_t> constrained_basis(const BlockadeGraph& g, std::uint64_t cap) {
    std::uint64_t count = count_independent_sets(g);
    if (count > cap)
        throw ResourceLimitError("constrained basis would have " + std::to_string(count) +
                                 " states, above the cap of " + std::to_string(cap));
    auto configs = enumerate_independent_sets(g);
    std::vector<std::uint64_t> basis;
    basis.reserve(configs.size());
    for (const auto& c : configs) basis.push_back(c.low_mask());
    std::sort(basis.begin(), basis.end());
    return basis;
}

int run_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

long long SparseHamiltonian::basis_index(std::uint64_t mask) const {
    auto it = std::lower_bound(basis.begin(), basis.end(), mask);
    if (it == basis.end() || *it != mask) return -1;
    return it - basis.begin();
}

double SparseHamiltonian::diag(std::size_t i) const {
    double d = delta_unit * static_cast<double>(diag_det_units[i]);
    if (u0) d += *u0 * static_cast<double>(diag_violations[i]);
    // identity part of (ω/2) Σ_p (1 - U_p); the -U_p part is off-diagonal
    // except on fixed points, handled in apply()/dense()
    d += 0.5 * plaq_omega * static_cast<double>(perm_maps.size());
    return d;
}

void SparseHamiltonian::apply(const double* x, double* y) const {
    const std::size_t d = dim();
    for (std::size_t a = 0; a < d; ++a) y[a] = diag(a) * x[a];
    for (std::size_t a = 0; a < d; ++a) {
        std::uint64_t m = basis[a];
        for (int i = 0; i < n_atoms; ++i) {
            long long b = basis_index(m ^ (std::uint64_t{1} << i));
            if (b >= 0) y[a] += omega * x[b];
        }
    }
    for (const auto& pm : perm_maps)
        for (std::size_t a = 0; a < d; ++a) y[pm[a]] -= 0.5 * plaq_omega * x[a];
}

DenseMatrix SparseHamiltonian::dense(int threads) const {
    const std::size_t d = dim();
    DenseMatrix mat;
    mat.n = static_cast<int>(d);
    mat.a.assign(d * d, 0.0);
    auto fill_rows = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t a = lo; a < hi; ++a) {
            mat.at(a, a) += diag(a);
            std::uint64_t m = basis[a];
            for (int i = 0; i < n_atoms; ++i) {
                long long b = basis_index(m ^ (std::uint64_t{1} << i));
                if (b >= 0) mat.at(a, b) += omega;
            }
        }
    };
    int nt = run_threads(threads);
    if (nt <= 1 || d < 256) {
        fill_rows(0, d);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (d + nt - 1) / nt;
        for (int t = 0; t < nt; ++t) {
            std::size_t lo = t * chunk, hi = std::min(d, lo + chunk);
            if (lo < hi) pool.emplace_back(fill_rows, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    for (const auto& pm : perm_maps)
        for (std::size_t a = 0; a < d; ++a) mat.at(pm[a], a) -= 0.5 * plaq_omega;
    return mat;
}

SparseHamiltonian build_hamiltonian(const HamiltonianSpec& spec) {
    spec.graph.validate();
    if (spec.graph.n > 64) throw ResourceLimitError("spectra are limited to 64 atoms");
    if (!(spec.delta_unit > 0)) throw StructuralError("delta_unit must be positive");
    SparseHamiltonian h;
    h.n_atoms = spec.graph.n;
    h.omega = spec.omega;
    h.delta_unit = spec.delta_unit;
    h.u0 = spec.u0;
    h.plaq_omega = spec.plaquette_omega;
    if (spec.u0) {
        if (*spec.u0 <= spec.delta_unit * static_cast<double>(spec.graph.total_weight()))
            throw StructuralError("finite blockade strength must exceed the total detuning");
        if (spec.graph.n > 30 ||
            (std::uint64_t{1} << spec.graph.n) > spec.max_basis)
            throw ResourceLimitError("full basis of 2^" + std::to_string(spec.graph.n) +
                                     " states is above the cap");
        h.basis.resize(std::size_t{1} << spec.graph.n);
        for (std::size_t m = 0; m < h.basis.size(); ++m) h.basis[m] = m;
    } else {
        h.basis = constrained_basis(spec.graph, spec.max_basis);
    }
    const std::size_t d = h.basis.size();
    h.diag_det_units.resize(d);
    h.diag_violations.assign(d, 0);
    auto adj = spec.graph.adjacency_masks();
    for (std::size_t a = 0; a < d; ++a) {
        std::uint64_t m = h.basis[a];
        long long det = 0;
        std::uint64_t mm = m;
        while (mm) {
            int i = std::countr_zero(mm);
            mm &= mm - 1;
            det += spec.graph.weights[i];
            h.diag_violations[a] += std::popcount(m & adj[i] & (~std::uint64_t{0} << i));
        }
        h.diag_det_units[a] = -det;
    }
    for (const auto& p : spec.plaquette_perms) {
        if (p.size() != spec.graph.n) throw StructuralError("plaquette permutation size mismatch");
        std::vector<int> map(d);
        for (std::size_t a = 0; a < d; ++a) {
            long long b = h.basis_index(permute_mask(p, h.basis[a], h.n_atoms));
            if (b < 0)
                throw StructuralError("plaquette permutation leaves the basis (not a symmetry)");
            map[a] = static_cast<int>(b);
        }
        h.perm_maps.push_back(std::move(map));
    }
    return h;
}

std::uint64_t permute_mask(const Permutation& p, std::uint64_t mask, int n_atoms) {
    std::uint64_t out = 0;
    for (int i = 0; i < n_atoms; ++i)
        if ((mask >> p.image[i]) & 1u) out |= std::uint64_t{1} << i;
    return out;
}

bool symmetry_check(const SparseHamiltonian& h, const Permutation& p) {
    if (p.size() != h.n_atoms || !p.is_valid()) return false;
    for (std::size_t a = 0; a < h.dim(); ++a) {
        long long b = h.basis_index(permute_mask(p, h.basis[a], h.n_atoms));
        if (b < 0) return false;
        if (h.diag_det_units[a] != h.diag_det_units[b]) return false;
        if (h.diag_violations[a] != h.diag_violations[b]) return false;
        // Ω off-diagonal entries map onto each other under any bit permutation,
        // so diagonal equality plus basis closure decides the check exactly.
    }
    return true;
}

bool symmetry_check(const HamiltonianSpec& spec, const Permutation& p) {
    return symmetry_check(build_hamiltonian(spec), p);
}

namespace {

void dense_eigensolve(const DenseMatrix& m, std::vector<double>& values, DenseMatrix& vectors) {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
        m.a.data(), m.n, m.n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense eigensolver failed to converge");
    values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m.n);
    vectors.n = m.n;
    vectors.a.resize(static_cast<std::size_t>(m.n) * m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) vectors.at(i, j) = solver.eigenvectors()(i, j);
}

// Lanczos with full reorthogonalization; deterministic seeded start vector.
void lanczos_lowest(const SparseHamiltonian& h, int k, std::vector<double>& values,
                    DenseMatrix& vectors, const EigenSolveOptions& opts) {
    const std::size_t d = h.dim();
    const int max_iter = static_cast<int>(std::min<std::size_t>(d, 4 * k + 120));
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> gauss;
    std::vector<Eigen::VectorXd> V;
    Eigen::VectorXd v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = gauss(rng);
    v.normalize();
    std::vector<double> alpha, beta;
    Eigen::VectorXd w(d);
    double scale = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        V.push_back(v);
        h.apply(v.data(), w.data());
        double a = v.dot(w);
        alpha.push_back(a);
        w -= a * v;
        if (!beta.empty()) w -= beta.back() * V[V.size() - 2];
        for (int pass = 0; pass < 2; ++pass)  // full reorthogonalization
            for (const auto& q : V) w -= q.dot(w) * q;
        double b = w.norm();
        scale = std::max(scale, std::abs(a) + b);
        // solve the tridiagonal problem and test Ritz residuals
        int m = static_cast<int>(alpha.size());
        bool exact = b < 1e-14 * scale || m == static_cast<int>(d);
        bool last = m == max_iter;
        if (exact || last || (m >= 2 * k + 10 && m % 10 == 0)) {
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                T(i, i) = alpha[i];
                if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ts(T);
            double worst_residual = 0.0;
            for (int i = 0; i < std::min(k, m); ++i)
                worst_residual = std::max(worst_residual, b * std::abs(ts.eigenvectors()(m - 1, i)));
            bool converged = exact || worst_residual <= opts.residual_tol * scale;
            if (converged) {
                int kk = std::min(k, m);
                values.assign(ts.eigenvalues().data(), ts.eigenvalues().data() + kk);
                vectors.n = static_cast<int>(kk);
                vectors.a.assign(d * kk, 0.0);
                for (int col = 0; col < kk; ++col) {
                    Eigen::VectorXd ritz = Eigen::VectorXd::Zero(d);
                    for (int i = 0; i < m; ++i) ritz += ts.eigenvectors()(i, col) * V[i];
                    ritz.normalize();
                    for (std::size_t i = 0; i < d; ++i) vectors.a[i * kk + col] = ritz[i];
                }
                return;
            }
            if (last)
                throw std::runtime_error("lanczos did not converge: residual " +
                                         std::to_string(worst_residual) + " after " +
                                         std::to_string(m) + " iterations");
        }
        beta.push_back(b);
        v = w / b;
    }
    throw std::runtime_error("lanczos failed to converge within the iteration budget");
}

}  // namespace

void lowest_eigenpairs(const SparseHamiltonian& h, int k, std::vector<double>& values,
                       DenseMatrix& vectors, const EigenSolveOptions& opts) {
    k = std::min<int>(k, static_cast<int>(h.dim()));
    if (k <= 0) throw StructuralError("need at least one eigenpair");
    if (static_cast<int>(h.dim()) <= opts.dense_threshold) {
        std::vector<double> all_vals;
        DenseMatrix all_vecs;
        dense_eigensolve(h.dense(opts.threads), all_vals, all_vecs);
        values.assign(all_vals.begin(), all_vals.begin() + k);
        vectors.n = k;
        vectors.a.resize(h.dim() * k);
        for (std::size_t i = 0; i < h.dim(); ++i)
            for (int j = 0; j < k; ++j) vectors.a[i * k + j] = all_vecs.at(static_cast<int>(i), j);
    } else {
        lanczos_lowest(h, k, values, vectors, opts);
    }
}

SpectrumReport ground_state_analysis(const HamiltonianSpec& spec, const Language& logical,
                                     int k_levels, const EigenSolveOptions& opts) {
    SparseHamiltonian h = build_hamiltonian(spec);
    const std::size_t d = h.dim();
    int k = k_levels > 0 ? k_levels : std::max<int>(6, static_cast<int>(logical.size()) + 2);
    k = std::min<int>(k, static_cast<int>(d));
    std::vector<double> values;
    DenseMatrix vecs;
    lowest_eigenpairs(h, k, values, vecs, opts);

    SpectrumReport rep;
    rep.eigenvalues = values;
    rep.gap = (values.size() > 1) ? values[1] - values[0] : 0.0;
    rep.unique_ground = rep.gap > opts.degeneracy_tol_units * spec.delta_unit;

    std::vector<double> ground(d);
    for (std::size_t i = 0; i < d; ++i) ground[i] = vecs.a[i * vecs.n + 0];
    // fix the global phase: (-1)^{#excited} * amplitude of the smallest logical
    // configuration positive for Ω > 0, plain positive otherwise
    double ref = 0.0;
    if (!logical.configs.empty()) {
        const Configuration& n0 = logical.configs.front();
        long long idx = h.basis_index(n0.low_mask());
        if (idx < 0) throw StructuralError("logical configuration missing from the basis");
        ref = ground[idx];
        if (spec.omega > 0 && (n0.count() % 2)) ref = -ref;
    } else {
        ref = ground[0];
    }
    if (ref < 0)
        for (auto& x : ground) x = -x;

    double lw = 0.0, lmin = 0.0, lmax = 0.0;
    bool first = true;
    for (const auto& c : logical.configs) {
        long long idx = h.basis_index(c.low_mask());
        if (idx < 0) throw StructuralError("logical configuration missing from the basis");
        double amp = ground[idx];
        rep.logical_amplitudes.emplace_back(c, amp);
        lw += amp * amp;
        double mag = std::abs(amp);
        if (first) {
            lmin = lmax = mag;
            first = false;
        } else {
            lmin = std::min(lmin, mag);
            lmax = std::max(lmax, mag);
        }
    }
    rep.logical_weight = lw;
    rep.max_relative_spread = (lmax > 0) ? (lmax - lmin) / lmax : 0.0;
    rep.equal_weight = rep.max_relative_spread < 1e-10;

    bool sign_ok = true;
    double min_abs = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d; ++i) {
        double c = ground[i];
        min_abs = std::min(min_abs, std::abs(c));
        if (spec.omega > 0 && (std::popcount(h.basis[i]) % 2)) c = -c;
        if (spec.omega != 0 && c <= 0) sign_ok = false;
    }
    rep.sign_pattern_ok = sign_ok;
    rep.min_abs_amplitude = min_abs;
    return rep;
}

FluxReport flux_sector_labels(const HamiltonianSpec& spec, const EigenSolveOptions& opts) {
    SparseHamiltonian probe = build_hamiltonian(spec);
    const std::size_t d = probe.dim();
    if (static_cast<int>(d) > opts.dense_threshold)
        throw ResourceLimitError("flux labeling requires the dense path (dim <= " +
                                 std::to_string(opts.dense_threshold) + ")");
    for (const auto& p : spec.plaquette_perms)
        if (!symmetry_check(probe, p))
            throw StructuralError("plaquette operator does not commute with the Hamiltonian");
    const int m = static_cast<int>(spec.plaquette_perms.size());
    if (m > 16) throw ResourceLimitError("too many plaquette operators for sector labeling");

    // base Hamiltonian without the plaquette term: the U_p label the
    // eigenbasis of H itself; the plaquette term only shifts flux sectors
    HamiltonianSpec base = spec;
    base.plaquette_omega = 0.0;
    base.plaquette_perms.clear();
    SparseHamiltonian hb = build_hamiltonian(base);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
    {
        DenseMatrix hd = hb.dense(opts.threads);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                H(i, j) = hd.at(static_cast<int>(i), static_cast<int>(j));
    }

    // all elements of the abelian group generated by the involutions, as
    // basis-index maps, together with their generator-subset sign vectors
    std::vector<std::vector<int>> gen_maps;
    for (const auto& p : spec.plaquette_perms) {
        std::vector<int> map(d);
        for (std::size_t a = 0; a < d; ++a)
            map[a] = static_cast<int>(hb.basis_index(permute_mask(p, hb.basis[a], hb.n_atoms)));
        gen_maps.push_back(std::move(map));
    }
    const std::size_t nsub = std::size_t{1} << m;
    std::vector<std::vector<int>> subset_maps(nsub);
    subset_maps[0].resize(d);
    for (std::size_t a = 0; a < d; ++a) subset_maps[0][a] = static_cast<int>(a);
    for (std::size_t s = 1; s < nsub; ++s) {
        int lowbit = std::countr_zero(s);
        const auto& prev = subset_maps[s ^ (std::size_t{1} << lowbit)];
        subset_maps[s].resize(d);
        for (std::size_t a = 0; a < d; ++a) subset_maps[s][a] = gen_maps[lowbit][prev[a]];
    }

    // orbits of basis indices under the group
    std::vector<int> orbit_of(d, -1);
    std::vector<std::size_t> reps;
    for (std::size_t a = 0; a < d; ++a) {
        if (orbit_of[a] >= 0) continue;
        int id = static_cast<int>(reps.size());
        reps.push_back(a);
        for (const auto& map : subset_maps) orbit_of[map[a]] = id;
    }

    // character projections P_xi e_rep: exact joint eigenvectors of every U_p
    FluxReport rep;
    rep.vectors.n = static_cast<int>(d);
    rep.vectors.a.assign(d * d, 0.0);
    std::vector<std::vector<int>> flux_cols;
    std::vector<Eigen::VectorXd> cols;
    for (std::size_t r : reps) {
        for (std::uint32_t xi = 0; xi < nsub; ++xi) {
            Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
            for (std::size_t s = 0; s < nsub; ++s) {
                int sign = (std::popcount(static_cast<std::uint32_t>(s) & xi) % 2) ? -1 : 1;
                w[subset_maps[s][r]] += sign;
            }
            double norm = w.norm();
            if (norm < 0.5) continue;  // sector empty on this orbit
            cols.push_back(w / norm);
            std::vector<int> f(m);
            for (int p = 0; p < m; ++p) f[p] = (xi >> p) & 1;
            flux_cols.push_back(std::move(f));
        }
    }
    if (cols.size() != d) throw std::runtime_error("sector decomposition lost dimensions");

    // group the columns by flux pattern and diagonalize H inside each sector
    std::vector<std::size_t> order(cols.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return flux_cols[x] < flux_cols[y]; });
    std::vector<double> energies;
    std::vector<std::vector<int>> flux;
    std::vector<Eigen::VectorXd> eigvecs;
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t stop = start;
        while (stop < order.size() && flux_cols[order[stop]] == flux_cols[order[start]]) ++stop;
        const int k = static_cast<int>(stop - start);
        Eigen::MatrixXd B(d, k);
        for (int c = 0; c < k; ++c) B.col(c) = cols[order[start + c]];
        Eigen::MatrixXd Hs = B.transpose() * H * B;
        Hs = 0.5 * (Hs + Hs.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(Hs);
        if (solver.info() != Eigen::Success)
            throw std::runtime_error("sector eigensolver failed to converge");
        Eigen::MatrixXd rotated = B * solver.eigenvectors();
        for (int c = 0; c < k; ++c) {
            energies.push_back(solver.eigenvalues()[c]);
            flux.push_back(flux_cols[order[start]]);
            eigvecs.push_back(rotated.col(c));
        }
        start = stop;
    }

    // present states sorted by the base energy
    std::vector<std::size_t> by_energy(energies.size());
    for (std::size_t i = 0; i < by_energy.size(); ++i) by_energy[i] = i;
    std::stable_sort(by_energy.begin(), by_energy.end(),
                     [&](std::size_t x, std::size_t y) { return energies[x] < energies[y]; });
    rep.energies.resize(d);
    rep.flux.resize(d);
    rep.shifted_energies.resize(d);
    for (std::size_t out = 0; out < d; ++out) {
        std::size_t i = by_energy[out];
        rep.energies[out] = energies[i];
        rep.flux[out] = flux[i];
        int nflux = 0;
        for (int f : rep.flux[out]) nflux += f;
        rep.shifted_energies[out] = energies[i] + spec.plaquette_omega * nflux;
        for (std::size_t row = 0; row < d; ++row)
            rep.vectors.at(static_cast<int>(row), static_cast<int>(out)) = eigvecs[i][row];
    }
    return rep;
}

EffectiveHamiltonian effective_hamiltonian(const HamiltonianSpec& spec, const Language& logical,
                                           int order, int max_order) {
    if (order < 1 || order > max_order)
        throw StructuralError("perturbation order must be in 1.." + std::to_string(max_order));
    HamiltonianSpec base = spec;
    base.plaquette_omega = 0.0;
    base.plaquette_perms.clear();
    SparseHamiltonian h = build_hamiltonian(base);
    const std::size_t d = h.dim();
    if (d > 2048)
        throw ResourceLimitError("effective Hamiltonian needs exact projector arithmetic (dim <= 2048)");

    // classical energies and the P/Q split
    std::vector<double> e0(d);
    for (std::size_t i = 0; i < d; ++i) {
        e0[i] = spec.delta_unit * static_cast<double>(h.diag_det_units[i]);
        if (h.u0) e0[i] += *h.u0 * static_cast<double>(h.diag_violations[i]);
    }
    std::vector<bool> in_p(d, false);
    std::vector<long long> p_index;
    for (const auto& c : logical.configs) {
        long long idx = h.basis_index(c.low_mask());
        if (idx < 0) throw StructuralError("logical configuration missing from the basis");
        in_p[idx] = true;
        p_index.push_back(idx);
    }
    if (p_index.empty()) throw StructuralError("empty logical manifold");
    double ep = e0[p_index.front()];
    for (long long i : p_index)
        if (std::abs(e0[i] - ep) > 1e-12 * std::abs(ep) + 1e-12)
            throw StructuralError("logical states are not degenerate under H0");

    using Mat = Eigen::MatrixXd;
    Mat V0 = Mat::Zero(d, d);  // dimensionless flip matrix (coefficient of Ω)
    for (std::size_t a = 0; a < d; ++a) {
        std::uint64_t m = h.basis[a];
        for (int i = 0; i < h.n_atoms; ++i) {
            long long b = h.basis_index(m ^ (std::uint64_t{1} << i));
            if (b >= 0) V0(a, b) += 1.0;
        }
    }

    auto offdiag_block = [&](const Mat& m) {
        Mat out = Mat::Zero(d, d);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                if (in_p[a] != in_p[b]) out(a, b) = m(a, b);
        return out;
    };
    auto solve_generator = [&](const Mat& w) {
        Mat s = Mat::Zero(d, d);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) {
                if (in_p[a] == in_p[b] || w(a, b) == 0.0) continue;
                double den = e0[a] - e0[b];
                if (std::abs(den) < 1e-9 * spec.delta_unit)
                    throw StructuralError(
                        "accidental resonance: colliding energies " + std::to_string(e0[a]) +
                        " and " + std::to_string(e0[b]) + " block the perturbative recursion");
                s(a, b) = w(a, b) / den;
            }
        return s;
    };

    // S_1..S_order chosen so that all off-diagonal blocks vanish order by order
    std::vector<Mat> S;       // S[j-1] = S_j
    std::vector<Mat> Hj(order + 1, Mat::Zero(d, d));  // block-diagonal coefficients
    Hj[0] = Mat::Zero(d, d);
    for (std::size_t i = 0; i < d; ++i) Hj[0](i, i) = e0[i];

    auto ad_chain = [&](const std::vector<int>& tuple, const Mat& x) {
        Mat out = x;
        for (auto it = tuple.rbegin(); it != tuple.rend(); ++it) {
            const Mat& s = S[*it - 1];
            out = s * out - out * s;
        }
        return out;
    };

    // ordered compositions of `total` into parts 1..limit
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    auto gen_comps = [&](auto&& self, int total) -> void {
        if (total == 0) {
            comps.push_back(cur);
            return;
        }
        for (int part = 1; part <= total; ++part) {
            cur.push_back(part);
            self(self, total - part);
            cur.pop_back();
        }
    };

    double factorial[16];
    factorial[0] = 1;
    for (int i = 1; i < 16; ++i) factorial[i] = factorial[i - 1] * i;

    for (int j = 1; j <= order; ++j) {
        Mat W = Mat::Zero(d, d);
        // contributions from H0 through chains S_{j1}..S_{jk}, excluding the
        // single chain (j) whose generator is still unknown
        comps.clear();
        gen_comps(gen_comps, j);
        for (const auto& t : comps) {
            if (t.size() == 1) continue;  // the [S_j, H0] term, fixed below
            bool known = true;
            for (int part : t)
                if (part >= j) known = false;
            if (!known) continue;
            W += ad_chain(t, Hj[0]) / factorial[t.size()];
        }
        // contributions from V through chains summing to j-1
        comps.clear();
        gen_comps(gen_comps, j - 1);
        for (const auto& t : comps) {
            bool known = true;
            for (int part : t)
                if (part > j - 1) known = false;
            if (!known || t.size() >= 15) continue;
            W += ad_chain(t, V0) / factorial[t.size()];
        }
        Mat Sj = solve_generator(offdiag_block(W));
        S.push_back(Sj);
        // with [S_j, H0] added, the off-diagonal block cancels exactly
        Hj[j] = W + (Sj * Hj[0] - Hj[0] * Sj);
    }

    // assemble P (H0 + Σ Ω^j H'_j) P over the logical order
    std::sort(p_index.begin(), p_index.end(), [&](long long a, long long b) {
        return Configuration::from_mask(h.basis[a], h.n_atoms) <
               Configuration::from_mask(h.basis[b], h.n_atoms);
    });
    const int np = static_cast<int>(p_index.size());
    EffectiveHamiltonian out;
    out.order = order;
    out.matrix.n = np;
    out.matrix.a.assign(static_cast<std::size_t>(np) * np, 0.0);
    std::vector<Configuration> sorted_logical;
    for (long long i : p_index)
        sorted_logical.push_back(Configuration::from_mask(h.basis[i], h.n_atoms));
    out.logical = Language::from_unsorted(std::move(sorted_logical));
    double om = 1.0;
    for (int j = 0; j <= order; ++j) {
        for (int a = 0; a < np; ++a)
            for (int b = 0; b < np; ++b) out.matrix.at(a, b) += om * Hj[j](p_index[a], p_index[b]);
        om *= spec.omega;
    }
    double trace = 0.0;
    for (int a = 0; a < np; ++a) trace += out.matrix.at(a, a);
    out.removed_shift = trace / np;
    for (int a = 0; a < np; ++a) out.matrix.at(a, a) -= out.removed_shift;
    return out;
}

}  // namespace blockadelab
