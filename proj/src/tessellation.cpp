#include "blockadelab/tessellation.hpp"

#include <algorithm>
#include <numeric>

namespace blockadelab {

namespace {

constexpr int kSigma[3][2] = {{2, 3}, {0, 3}, {1, 3}};
constexpr int kTau[3][2] = {{0, 1}, {1, 2}, {0, 2}};
// Tetrahedron transposition for the vertex factor with untraversed slot alpha:
// maps sigma_beta <-> tau_beta for beta != alpha and fixes pair alpha setwise.
constexpr int kTetraPerm[3][4] = {{1, 0, 3, 2}, {3, 2, 1, 0}, {2, 3, 0, 1}};

int mod(int a, int m) { return ((a % m) + m) % m; }

// dense GF(2) rows packed in 64-bit words
struct BitMatrix {
    int cols = 0;
    std::vector<std::vector<std::uint64_t>> rows;

    explicit BitMatrix(int c) : cols(c) {}
    static std::vector<std::uint64_t> from_subset(const std::vector<int>& subset, int cols) {
        std::vector<std::uint64_t> r((cols + 63) / 64, 0);
        for (int e : subset) r[e >> 6] ^= std::uint64_t{1} << (e & 63);
        return r;
    }
    void add_row(const std::vector<int>& subset) { rows.push_back(from_subset(subset, cols)); }

    // Gaussian elimination; returns rank. If reduce_target is nonnull it is
    // eliminated against the pivots as well.
    int eliminate(std::vector<std::uint64_t>* reduce_target = nullptr) {
        int rank = 0;
        for (int c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
            int pivot = -1;
            for (int r = rank; r < static_cast<int>(rows.size()); ++r)
                if ((rows[r][c >> 6] >> (c & 63)) & 1u) {
                    pivot = r;
                    break;
                }
            if (pivot < 0) continue;
            std::swap(rows[rank], rows[pivot]);
            for (int r = 0; r < static_cast<int>(rows.size()); ++r)
                if (r != rank && ((rows[r][c >> 6] >> (c & 63)) & 1u))
                    for (std::size_t w = 0; w < rows[r].size(); ++w) rows[r][w] ^= rows[rank][w];
            if (reduce_target && (((*reduce_target)[c >> 6] >> (c & 63)) & 1u))
                for (std::size_t w = 0; w < reduce_target->size(); ++w)
                    (*reduce_target)[w] ^= rows[rank][w];
            ++rank;
        }
        return rank;
    }
};

}  // namespace

int gf2_rank(const std::vector<std::vector<int>>& subsets, int num_edges) {
    BitMatrix m(num_edges);
    for (const auto& s : subsets) m.add_row(s);
    return m.eliminate();
}

bool in_gf2_span(const std::vector<std::vector<int>>& subsets, const std::vector<int>& target,
                 int num_edges) {
    BitMatrix m(num_edges);
    for (const auto& s : subsets) m.add_row(s);
    auto t = BitMatrix::from_subset(target, num_edges);
    m.eliminate(&t);
    for (auto w : t)
        if (w) return false;
    return true;
}

LoopStructure build_loop_structure(int nx, int ny, Boundary boundary) {
    if (boundary == Boundary::periodic && (nx < 2 || ny < 2))
        throw StructuralError("periodic loop tessellation needs nx, ny >= 2");
    if (nx < 1 || ny < 1) throw StructuralError("loop tessellation needs nx, ny >= 1");
    const bool per = boundary == Boundary::periodic;
    const int ncells = nx * ny;

    LoopStructure ls;
    LoopLattice& l = ls.lattice;
    l.nx = nx;
    l.ny = ny;
    l.boundary = boundary;
    l.vertices.resize(2 * ncells);
    l.edges.resize(3 * ncells + (per ? 0 : nx + ny));

    auto cell = [&](int i, int j) { return j * nx + i; };
    // regular edges: e0,e1,e2 of cell (i,j) are 3*cell + k
    auto edge_id = [&](int i, int j, int k) { return 3 * cell(i, j) + k; };
    // rough-boundary extras: e1(nx,j) then e2(i,ny)
    auto extra_e1 = [&](int j) { return 3 * ncells + j; };
    auto extra_e2 = [&](int i) { return 3 * ncells + ny + i; };

    // side 0 is filled first; dangling edges keep side 1 at -1
    auto attach = [&](int e, int v, int slot) {
        auto& ed = l.edges[e];
        int side = (ed.vertex[0] < 0) ? 0 : 1;
        ed.vertex[side] = v;
        ed.slot[side] = slot;
        l.vertices[v].edges[slot] = e;
    };

    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            int v0 = l.vertex_id(i, j, 0), v1 = l.vertex_id(i, j, 1);
            l.vertices[v0] = {i, j, 0, {-1, -1, -1}, {-1, -1, -1, -1}};
            l.vertices[v1] = {i, j, 1, {-1, -1, -1}, {-1, -1, -1, -1}};
        }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            attach(edge_id(i, j, 0), l.vertex_id(i, j, 0), 0);
            attach(edge_id(i, j, 0), l.vertex_id(i, j, 1), 0);
            attach(edge_id(i, j, 1), l.vertex_id(i, j, 0), 1);
            attach(edge_id(i, j, 2), l.vertex_id(i, j, 0), 2);
            // slot-1/slot-2 partners live in the neighboring cells
            if (per || i + 1 < nx)
                attach(edge_id(per ? mod(i + 1, nx) : i + 1, j, 1), l.vertex_id(i, j, 1), 1);
            else
                attach(extra_e1(j), l.vertex_id(i, j, 1), 1);
            if (per || j + 1 < ny)
                attach(edge_id(i, per ? mod(j + 1, ny) : j + 1, 2), l.vertex_id(i, j, 1), 2);
            else
                attach(extra_e2(i), l.vertex_id(i, j, 1), 2);
        }

    // atoms: cell-major blocks of 14, extras appended
    int next_atom = 0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            for (int sub = 0; sub < 2; ++sub) {
                auto& v = l.vertices[l.vertex_id(i, j, sub)];
                for (int t = 0; t < 4; ++t) v.tetra[t] = next_atom++;
            }
            for (int k = 0; k < 3; ++k) {
                auto& e = l.edges[edge_id(i, j, k)];
                e.light_atom = next_atom++;
                e.dark_atom = next_atom++;
            }
        }
    for (std::size_t e = 3 * static_cast<std::size_t>(ncells); e < l.edges.size(); ++e) {
        l.edges[e].light_atom = next_atom++;
        l.edges[e].dark_atom = next_atom++;
    }
    l.num_atoms = next_atom;

    // plaquettes: hexagon p(i,j) exists iff cells (i-1,j), (i-1,j+1), (i,j+1) exist
    auto add_plaquette = [&](int i, int j) {
        int im = per ? mod(i - 1, nx) : i - 1;
        int jp = per ? mod(j + 1, ny) : j + 1;
        LoopLattice::Plaquette p;
        p.vertices = {l.vertex_id(i, j, 0),  l.vertex_id(im, j, 1),  l.vertex_id(im, jp, 0),
                      l.vertex_id(im, jp, 1), l.vertex_id(i, jp, 0), l.vertex_id(i, j, 1)};
        p.edges = {edge_id(i, j, 1),  edge_id(im, jp, 2), edge_id(im, jp, 0),
                   edge_id(i, jp, 1), edge_id(i, jp, 2),  edge_id(i, j, 0)};
        l.plaquettes.push_back(p);
    };
    if (per) {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) add_plaquette(i, j);
    } else {
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 1; i < nx; ++i) add_plaquette(i, j);
    }

    // blockade graph
    BlockadeGraph& g = ls.graph;
    g.n = l.num_atoms;
    g.weights.assign(l.num_atoms, 0);
    for (const auto& v : l.vertices) {
        for (int t = 0; t < 4; ++t) {
            g.weights[v.tetra[t]] = 4;
            for (int u = t + 1; u < 4; ++u) g.edges.emplace_back(v.tetra[t], v.tetra[u]);
        }
    }
    for (const auto& e : l.edges) {
        int endpoints = (e.vertex[0] >= 0) + (e.vertex[1] >= 0);
        g.weights[e.light_atom] = endpoints;
        g.weights[e.dark_atom] = endpoints;
        for (int side = 0; side < 2; ++side) {
            if (e.vertex[side] < 0) continue;
            const auto& v = l.vertices[e.vertex[side]];
            int k = e.slot[side];
            for (int t : kSigma[k]) g.edges.emplace_back(e.light_atom, v.tetra[t]);
            for (int t : kTau[k]) g.edges.emplace_back(e.dark_atom, v.tetra[t]);
        }
    }
    g.normalize();
    g.validate();
    return ls;
}

std::vector<std::vector<int>> loop_support_basis(const LoopLattice& l) {
    const int E = static_cast<int>(l.edges.size());
    const int V = static_cast<int>(l.vertices.size());
    // incidence rows (one parity constraint per vertex), kernel over columns
    std::vector<std::vector<std::uint64_t>> rows(
        V, std::vector<std::uint64_t>((E + 63) / 64, 0));
    for (int v = 0; v < V; ++v)
        for (int e : l.vertices[v].edges) rows[v][e >> 6] ^= std::uint64_t{1} << (e & 63);
    // column-pivot elimination, tracking pivot column per row
    std::vector<int> pivot_col;
    int rank = 0;
    for (int c = 0; c < E && rank < V; ++c) {
        int pr = -1;
        for (int r = rank; r < V; ++r)
            if ((rows[r][c >> 6] >> (c & 63)) & 1u) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(rows[rank], rows[pr]);
        for (int r = 0; r < V; ++r)
            if (r != rank && ((rows[r][c >> 6] >> (c & 63)) & 1u))
                for (std::size_t w = 0; w < rows[r].size(); ++w) rows[r][w] ^= rows[rank][w];
        pivot_col.push_back(c);
        ++rank;
    }
    std::vector<bool> is_pivot(E, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<int>> basis;
    for (int f = 0; f < E; ++f) {
        if (is_pivot[f]) continue;
        std::vector<int> subset{f};
        for (int r = 0; r < rank; ++r)
            if ((rows[r][f >> 6] >> (f & 63)) & 1u) subset.push_back(pivot_col[r]);
        std::sort(subset.begin(), subset.end());
        basis.push_back(std::move(subset));
    }
    return basis;
}

namespace {

// light-atom pattern per edge -> forced tetrahedron atom index at a vertex
int forced_tetra(const std::array<bool, 3>& x) {
    int parity = (x[0] ? 1 : 0) ^ (x[1] ? 1 : 0) ^ (x[2] ? 1 : 0);
    if (parity) throw StructuralError("odd string parity at a vertex");
    if (!x[0] && !x[1] && !x[2]) return 3;
    if (x[0] && x[1]) return 1;
    if (x[0] && x[2]) return 0;
    return 2;  // x[1] && x[2]
}

Configuration configuration_of_subset(const LoopStructure& ls, const std::vector<bool>& in_subset) {
    const auto& l = ls.lattice;
    Configuration c(l.num_atoms);
    for (std::size_t e = 0; e < l.edges.size(); ++e) {
        if (in_subset[e])
            c.set(l.edges[e].light_atom, true);
        else
            c.set(l.edges[e].dark_atom, true);
    }
    for (const auto& v : l.vertices) {
        std::array<bool, 3> x{};
        for (int k = 0; k < 3; ++k) x[k] = in_subset[v.edges[k]];
        c.set(v.tetra[forced_tetra(x)], true);
    }
    return c;
}

}  // namespace

Language loop_language(const LoopStructure& ls, int max_dim) {
    const auto& l = ls.lattice;
    auto basis = loop_support_basis(l);
    if (static_cast<int>(basis.size()) > max_dim)
        throw ResourceLimitError("loop language has 2^" + std::to_string(basis.size()) +
                                 " members, above the 2^" + std::to_string(max_dim) + " cap");
    const std::size_t E = l.edges.size();
    std::vector<Configuration> configs;
    configs.reserve(std::size_t{1} << basis.size());
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << basis.size()); ++m) {
        std::vector<bool> subset(E, false);
        for (std::size_t b = 0; b < basis.size(); ++b)
            if ((m >> b) & 1u)
                for (int e : basis[b]) subset[e] = !subset[e];
        configs.push_back(configuration_of_subset(ls, subset));
    }
    return Language::from_unsorted(std::move(configs));
}

PlaquettePermutation loop_automorphism(const LoopStructure& ls, const std::vector<int>& edge_subset) {
    const auto& l = ls.lattice;
    std::vector<bool> in_subset(l.edges.size(), false);
    for (int e : edge_subset) {
        if (e < 0 || e >= static_cast<int>(l.edges.size()))
            throw StructuralError("edge id out of range");
        in_subset[e] = true;
    }
    PlaquettePermutation out;
    out.permutation = Permutation::identity(l.num_atoms);
    for (std::size_t v = 0; v < l.vertices.size(); ++v) {
        const auto& vx = l.vertices[v];
        std::vector<int> touched;
        for (int k = 0; k < 3; ++k)
            if (in_subset[vx.edges[k]]) touched.push_back(k);
        if (touched.empty()) continue;
        if (touched.size() != 2)
            throw StructuralError("edge subset is not a valid loop: vertex " + std::to_string(v) +
                                  " has " + std::to_string(touched.size()) +
                                  " traversed edges (the path of edges must close)");
        int alpha = 3 - touched[0] - touched[1];
        out.vertex_factors.emplace_back(static_cast<int>(v), alpha);
        for (int t = 0; t < 4; ++t)
            out.permutation.image[vx.tetra[t]] = vx.tetra[kTetraPerm[alpha][t]];
    }
    for (std::size_t e = 0; e < l.edges.size(); ++e) {
        if (!in_subset[e]) continue;
        out.edge_swaps.push_back(static_cast<int>(e));
        out.permutation.image[l.edges[e].light_atom] = l.edges[e].dark_atom;
        out.permutation.image[l.edges[e].dark_atom] = l.edges[e].light_atom;
    }
    if (!is_automorphism(ls.graph, out.permutation))
        throw StructuralError("internal error: constructed loop permutation is not an automorphism");
    return out;
}

PlaquettePermutation plaquette_automorphism(const LoopStructure& ls, int plaquette) {
    const auto& l = ls.lattice;
    if (plaquette < 0 || plaquette >= static_cast<int>(l.plaquettes.size()))
        throw StructuralError("plaquette id out of range");
    std::vector<int> edges(l.plaquettes[plaquette].edges.begin(),
                           l.plaquettes[plaquette].edges.end());
    auto out = loop_automorphism(ls, edges);
    out.plaquette = plaquette;
    return out;
}

PlaquettePermutation loop_automorphism_from_plaquettes(const LoopStructure& ls,
                                                       const std::vector<int>& plaquettes) {
    const auto& l = ls.lattice;
    std::vector<bool> in_subset(l.edges.size(), false);
    for (int p : plaquettes) {
        if (p < 0 || p >= static_cast<int>(l.plaquettes.size()))
            throw StructuralError("plaquette id out of range");
        for (int e : l.plaquettes[p].edges) in_subset[e] = !in_subset[e];
    }
    std::vector<int> edges;
    for (std::size_t e = 0; e < in_subset.size(); ++e)
        if (in_subset[e]) edges.push_back(static_cast<int>(e));
    return loop_automorphism(ls, edges);
}

PlaquettePermutation homology_cycle_automorphism(const LoopStructure& ls, int direction) {
    const auto& l = ls.lattice;
    if (l.boundary != Boundary::periodic)
        throw StructuralError("homologically nontrivial loops need periodic boundaries");
    std::vector<int> edges;
    if (direction == 0) {
        for (int i = 0; i < l.nx; ++i) {
            edges.push_back(3 * i + 0);  // e0(i,0)
            edges.push_back(3 * i + 1);  // e1(i,0)
        }
    } else if (direction == 1) {
        for (int j = 0; j < l.ny; ++j) {
            edges.push_back(3 * (j * l.nx) + 0);  // e0(0,j)
            edges.push_back(3 * (j * l.nx) + 2);  // e2(0,j)
        }
    } else {
        throw StructuralError("direction must be 0 (x) or 1 (y)");
    }
    return loop_automorphism(ls, edges);
}

double LocalTerm::classical_energy(const Configuration& c) const {
    double e = 0;
    for (std::size_t k = 0; k < atoms.size(); ++k)
        if (c.get(atoms[k])) e -= detuning_coeff[k];
    return e;
}

std::vector<LocalTerm> frustration_free_decomposition(const LoopStructure& ls) {
    const auto& l = ls.lattice;
    std::vector<LocalTerm> terms;
    for (int j = 0; j < l.ny; ++j)
        for (int i = 0; i < l.nx; ++i) {
            LocalTerm t;
            t.cell_i = i;
            t.cell_j = j;
            for (int sub = 0; sub < 2; ++sub) {
                const auto& v = l.vertices[l.vertex_id(i, j, sub)];
                for (int a = 0; a < 4; ++a) {
                    t.atoms.push_back(v.tetra[a]);
                    t.detuning_coeff.push_back(4.0);
                    for (int b = a + 1; b < 4; ++b)
                        t.blockade_pairs.emplace_back(v.tetra[a], v.tetra[b]);
                }
                for (int k = 0; k < 3; ++k) {
                    const auto& e = l.edges[v.edges[k]];
                    // each FSU contributes half of an interior edge atom's 2Δ,
                    // i.e. 1Δ per attached vertex; a dangling atom's full 1Δ
                    for (int atom : {e.light_atom, e.dark_atom}) {
                        auto it = std::find(t.atoms.begin(), t.atoms.end(), atom);
                        if (it == t.atoms.end()) {
                            t.atoms.push_back(atom);
                            t.detuning_coeff.push_back(1.0);
                        } else {
                            t.detuning_coeff[it - t.atoms.begin()] += 1.0;
                        }
                    }
                    for (int ti : kSigma[k]) t.blockade_pairs.emplace_back(e.light_atom, v.tetra[ti]);
                    for (int ti : kTau[k]) t.blockade_pairs.emplace_back(e.dark_atom, v.tetra[ti]);
                }
            }
            terms.push_back(std::move(t));
        }
    return terms;
}

BlockadeGraph build_singleport_xor_tessellation(int nx, int ny, Boundary boundary,
                                                std::vector<int>* ports_out) {
    // reuse the honeycomb index maps; only the atom content differs
    LoopLattice l = build_loop_structure(nx, ny, boundary).lattice;
    const int V = static_cast<int>(l.vertices.size());
    const int E = static_cast<int>(l.edges.size());
    BlockadeGraph g;
    g.n = 3 * V + E;
    g.weights.assign(g.n, 0);
    auto gadget_atom = [&](int v, int slot) { return 3 * v + slot; };
    auto port_atom = [&](int e) { return 3 * V + e; };
    for (int v = 0; v < V; ++v) {
        for (int a = 0; a < 3; ++a) {
            g.weights[gadget_atom(v, a)] = 2;
            for (int b = a + 1; b < 3; ++b) g.edges.emplace_back(gadget_atom(v, a), gadget_atom(v, b));
        }
    }
    for (int e = 0; e < E; ++e) {
        g.weights[port_atom(e)] = 1;
        for (int side = 0; side < 2; ++side) {
            int v = l.edges[e].vertex[side];
            if (v < 0) continue;
            int k = l.edges[e].slot[side];
            for (int a = 0; a < 3; ++a)
                if (a != k) g.edges.emplace_back(port_atom(e), gadget_atom(v, a));
        }
    }
    g.normalize();
    g.validate();
    if (ports_out) {
        ports_out->clear();
        for (int e = 0; e < E; ++e) ports_out->push_back(port_atom(e));
    }
    return g;
}

namespace {

BlockadeGraph build_verresen(int nx, int ny) {
    if (nx < 2 || ny < 2) throw StructuralError("verresen model needs nx, ny >= 2");
    // abstract honeycomb (periodic) provides vertices and slot edges
    LoopStructure skel = build_loop_structure(nx, ny, Boundary::periodic);
    const auto& l = skel.lattice;
    const int V = static_cast<int>(l.vertices.size());
    // one atom per (honeycomb vertex, slot pair); pair is named by the
    // missing slot q. These are the kagome-lattice links.
    BlockadeGraph g;
    g.n = 3 * V;
    g.weights.assign(g.n, 1);
    auto atom = [&](int v, int q) { return 3 * v + q; };
    for (int v = 0; v < V; ++v)
        for (int q = 0; q < 3; ++q)
            for (int r = q + 1; r < 3; ++r) g.edges.emplace_back(atom(v, q), atom(v, r));
    for (const auto& e : l.edges) {
        int v0 = e.vertex[0], v1 = e.vertex[1];
        int k0 = e.slot[0], k1 = e.slot[1];
        for (int q0 = 0; q0 < 3; ++q0) {
            if (q0 == k0) continue;  // pair must contain slot k0
            for (int q1 = 0; q1 < 3; ++q1) {
                if (q1 == k1) continue;
                g.edges.emplace_back(atom(v0, q0), atom(v1, q1));
            }
        }
    }
    g.normalize();
    g.validate();
    return g;
}

BlockadeGraph build_zeng(int nx, int ny, std::vector<int>* ports_out) {
    if (nx < 2 || ny < 2) throw StructuralError("zeng model needs nx, ny >= 2");
    const int N = nx * ny;
    // directions: 0 = +x, 1 = -x, 2 = +y, 3 = -y
    BlockadeGraph g;
    g.n = 4 * N + 2 * N;
    g.weights.assign(g.n, 0);
    auto vidx = [&](int i, int j) { return mod(j, ny) * nx + mod(i, nx); };
    auto gadget = [&](int v, int d) { return 4 * v + d; };
    auto port = [&](int v, int axis) { return 4 * N + 2 * v + axis; };  // +x / +y link of v
    for (int v = 0; v < N; ++v)
        for (int d = 0; d < 4; ++d) {
            g.weights[gadget(v, d)] = 2;
            for (int d2 = d + 1; d2 < 4; ++d2) g.edges.emplace_back(gadget(v, d), gadget(v, d2));
        }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            int v = vidx(i, j);
            int wx = vidx(i + 1, j), wy = vidx(i, j + 1);
            g.weights[port(v, 0)] = 1;
            g.weights[port(v, 1)] = 1;
            // +x link: atoms of v not pointing +x, atoms of wx not pointing -x
            for (int d = 0; d < 4; ++d) {
                if (d != 0) g.edges.emplace_back(port(v, 0), gadget(v, d));
                if (d != 1) g.edges.emplace_back(port(v, 0), gadget(wx, d));
            }
            for (int d = 0; d < 4; ++d) {
                if (d != 2) g.edges.emplace_back(port(v, 1), gadget(v, d));
                if (d != 3) g.edges.emplace_back(port(v, 1), gadget(wy, d));
            }
        }
    g.normalize();
    g.validate();
    if (ports_out) {
        ports_out->clear();
        for (int p = 4 * N; p < g.n; ++p) ports_out->push_back(p);
    }
    return g;
}

}  // namespace

BlockadeGraph build_literature_model(const std::string& name, int nx, int ny,
                                     std::vector<int>* ports_out) {
    if (name == "verresen") {
        if (ports_out) ports_out->clear();
        return build_verresen(nx, ny);
    }
    if (name == "zeng") return build_zeng(nx, ny, ports_out);
    if (name == "stastny")
        return build_singleport_xor_tessellation(nx, ny, Boundary::periodic, ports_out);
    throw StructuralError("unknown literature model '" + name +
                          "' (expected verresen|zeng|stastny)");
}

}  // namespace blockadelab
