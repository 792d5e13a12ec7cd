#include "blockadelab/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_set>

namespace blockadelab {

Permutation Permutation::identity(int n) {
    Permutation p;
    p.image.resize(n);
    std::iota(p.image.begin(), p.image.end(), 0);
    return p;
}

bool Permutation::is_identity() const {
    for (int i = 0; i < size(); ++i)
        if (image[i] != i) return false;
    return true;
}

bool Permutation::is_valid() const {
    std::vector<bool> seen(size(), false);
    for (int v : image) {
        if (v < 0 || v >= size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

Permutation Permutation::inverse() const {
    Permutation p;
    p.image.resize(size());
    for (int i = 0; i < size(); ++i) p.image[image[i]] = i;
    return p;
}

Permutation Permutation::then(const Permutation& other) const {
    Permutation p;
    p.image.resize(size());
    for (int i = 0; i < size(); ++i) p.image[i] = other.image[image[i]];
    return p;
}

Configuration act(const Permutation& p, const Configuration& c) {
    if (p.size() != c.size()) throw StructuralError("permutation/configuration length mismatch");
    Configuration out(c.size());
    for (int i = 0; i < c.size(); ++i)
        if (c.get(p.image[i])) out.set(i, true);
    return out;
}

Language act(const Permutation& p, const Language& l) {
    std::vector<Configuration> v;
    v.reserve(l.size());
    for (const auto& c : l.configs) v.push_back(act(p, c));
    return Language::from_unsorted(std::move(v));
}

bool is_automorphism(const BlockadeGraph& g, const Permutation& p) {
    if (p.size() != g.n || !p.is_valid()) return false;
    for (int i = 0; i < g.n; ++i)
        if (g.weights[i] != g.weights[p.image[i]]) return false;
    for (auto [i, j] : g.edges)
        if (!g.has_edge(p.image[i], p.image[j])) return false;
    // p bijective and preserves the edge count, so the reverse direction follows
    return true;
}

namespace {

// Joint 1-WL refinement of a source and a target coloring. Signatures are
// pooled so identical colors mean identical signatures on both sides. Returns
// false when the signature multisets diverge (no extension possible).
struct Refiner {
    const std::vector<std::vector<int>>& adj;

    bool refine_pair(std::vector<int>& a, std::vector<int>& b) const {
        const int n = static_cast<int>(adj.size());
        for (;;) {
            std::vector<std::vector<int>> siga(n), sigb(n);
            for (int v = 0; v < n; ++v) {
                siga[v] = signature(a, v);
                sigb[v] = signature(b, v);
            }
            std::vector<std::vector<int>> uniq;
            {
                std::vector<const std::vector<int>*> pool;
                pool.reserve(2 * n);
                for (int v = 0; v < n; ++v) pool.push_back(&siga[v]);
                for (int v = 0; v < n; ++v) pool.push_back(&sigb[v]);
                std::sort(pool.begin(), pool.end(), [](auto* x, auto* y) { return *x < *y; });
                for (auto* s : pool)
                    if (uniq.empty() || uniq.back() != *s) uniq.push_back(*s);
            }
            auto rank_of = [&](const std::vector<int>& s) {
                return static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), s) - uniq.begin());
            };
            std::vector<int> na(n), nb(n);
            std::vector<int> hist_a(uniq.size(), 0), hist_b(uniq.size(), 0);
            for (int v = 0; v < n; ++v) {
                na[v] = rank_of(siga[v]);
                nb[v] = rank_of(sigb[v]);
                ++hist_a[na[v]];
                ++hist_b[nb[v]];
            }
            if (hist_a != hist_b) return false;
            // Class counts can only grow; stop at the fixpoint of the partition.
            int before = count_classes(a), after = count_classes(na);
            a = std::move(na);
            b = std::move(nb);
            if (after == before || after == n) return true;
        }
    }

    std::vector<int> signature(const std::vector<int>& col, int v) const {
        std::vector<int> s;
        s.reserve(adj[v].size() + 1);
        s.push_back(col[v]);
        for (int u : adj[v]) s.push_back(col[u]);
        std::sort(s.begin() + 1, s.end());
        return s;
    }

    static int count_classes(const std::vector<int>& col) {
        auto c = col;
        std::sort(c.begin(), c.end());
        return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
    }
};

struct AutSearcher {
    const BlockadeGraph& g;
    std::vector<std::vector<int>> adj;
    std::vector<int> base_colors;
    std::vector<Permutation> generators;

    explicit AutSearcher(const BlockadeGraph& graph) : g(graph), adj(graph.adjacency_lists()) {
        // initial coloring by (weight, degree)
        auto deg = g.degrees();
        std::vector<std::pair<int, int>> keys(g.n);
        for (int v = 0; v < g.n; ++v) keys[v] = {g.weights[v], deg[v]};
        auto uniq = keys;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        base_colors.resize(g.n);
        for (int v = 0; v < g.n; ++v)
            base_colors[v] =
                static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), keys[v]) - uniq.begin());
    }

    // Chooses the branching cell: smallest non-singleton class, lowest color id.
    static int pick_cell(const std::vector<int>& col) {
        std::map<int, int> counts;
        for (int c : col) ++counts[c];
        int best = -1, best_size = 1 << 30;
        for (auto [c, k] : counts)
            if (k > 1 && k < best_size) {
                best = c;
                best_size = k;
            }
        return best;
    }

    // Finds one automorphism sending pins.first -> pins.second, or nullopt.
    std::optional<Permutation> find_extension(const std::vector<std::pair<int, int>>& pins) {
        std::vector<int> src = base_colors, tgt = base_colors;
        int marker = g.n + 1;
        for (auto [b, u] : pins) {
            src[b] = marker;
            tgt[u] = marker;
            ++marker;
        }
        return search(std::move(src), std::move(tgt), marker);
    }

    std::optional<Permutation> search(std::vector<int> src, std::vector<int> tgt, int marker) {
        Refiner ref{adj};
        if (!ref.refine_pair(src, tgt)) return std::nullopt;
        int cell = pick_cell(src);
        if (cell < 0) {
            // discrete: read off the candidate bijection
            Permutation p;
            p.image.assign(g.n, -1);
            std::map<int, int> tgt_of;
            for (int v = 0; v < g.n; ++v) tgt_of[tgt[v]] = v;
            for (int v = 0; v < g.n; ++v) {
                auto it = tgt_of.find(src[v]);
                if (it == tgt_of.end()) return std::nullopt;
                p.image[v] = it->second;
            }
            if (is_automorphism(g, p)) return p;
            return std::nullopt;
        }
        int v = -1;
        for (int w = 0; w < g.n; ++w)
            if (src[w] == cell) {
                v = w;
                break;
            }
        for (int u = 0; u < g.n; ++u) {
            if (tgt[u] != cell) continue;
            auto src2 = src;
            auto tgt2 = tgt;
            src2[v] = marker;
            tgt2[u] = marker;
            if (auto p = search(std::move(src2), std::move(tgt2), marker + 1)) return p;
        }
        return std::nullopt;
    }

    // Order of the pointwise stabilizer of the pinned vertices; generators of
    // everything found below are appended to `generators`.
    std::uint64_t level_order(std::vector<std::pair<int, int>> pins) {
        std::vector<int> col = base_colors;
        int marker = g.n + 1;
        for (auto [b, u] : pins) {
            col[b] = marker;
            ++marker;
        }
        Refiner ref{adj};
        auto col2 = col;
        ref.refine_pair(col, col2);
        int cell = pick_cell(col);
        if (cell < 0) return 1;
        int b = -1;
        for (int w = 0; w < g.n; ++w)
            if (col[w] == cell) {
                b = w;
                break;
            }
        std::size_t gens_start = generators.size();
        auto deeper = pins;
        deeper.emplace_back(b, b);
        std::uint64_t sub = level_order(deeper);

        std::vector<int> cell_members;
        for (int w = 0; w < g.n; ++w)
            if (col[w] == cell && w != b) cell_members.push_back(w);

        std::unordered_set<int> orbit{b};
        auto close_orbit = [&] {
            std::vector<int> frontier(orbit.begin(), orbit.end());
            while (!frontier.empty()) {
                int x = frontier.back();
                frontier.pop_back();
                for (std::size_t gi = gens_start; gi < generators.size(); ++gi) {
                    int y = generators[gi].image[x];
                    if (orbit.insert(y).second) frontier.push_back(y);
                }
            }
        };
        close_orbit();
        for (int u : cell_members) {
            if (orbit.count(u)) continue;
            auto trial = pins;
            trial.emplace_back(b, u);
            if (auto p = find_extension(trial)) {
                generators.push_back(*p);
                close_orbit();
            }
        }
        return static_cast<std::uint64_t>(orbit.size()) * sub;
    }
};

}  // namespace

AutGroup automorphism_group(const BlockadeGraph& g, const AutOptions& opts) {
    g.validate();
    if (g.n > opts.vertex_limit)
        throw ResourceLimitError("automorphism search limited to " +
                                 std::to_string(opts.vertex_limit) + " vertices, got " +
                                 std::to_string(g.n));
    AutGroup a;
    a.n = g.n;
    if (g.n == 0) return a;
    AutSearcher searcher(g);
    a.order = searcher.level_order({});
    a.generators = std::move(searcher.generators);
    for (const auto& p : a.generators)
        if (!is_automorphism(g, p)) throw StructuralError("internal error: invalid generator");
    return a;
}

namespace {

struct SSLevel {
    int base = -1;
    std::map<int, Permutation> transversal;  // point -> element mapping base -> point
    std::vector<Permutation> gens;
};

struct SSChain {
    int n;
    std::vector<SSLevel> levels;
    std::vector<int> base_prefix;
    std::size_t prefix_used = 0;

    void ensure_level_for(const Permutation& residue) {
        SSLevel lvl;
        if (prefix_used < base_prefix.size()) {
            lvl.base = base_prefix[prefix_used++];
        } else {
            for (int i = 0; i < n; ++i)
                if (residue.image[i] != i) {
                    lvl.base = i;
                    break;
                }
        }
        lvl.transversal[lvl.base] = Permutation::identity(n);
        levels.push_back(std::move(lvl));
    }

    void force_prefix_levels() {
        while (prefix_used < base_prefix.size()) {
            SSLevel lvl;
            lvl.base = base_prefix[prefix_used++];
            lvl.transversal[lvl.base] = Permutation::identity(n);
            levels.push_back(std::move(lvl));
        }
    }

    // Strips g through levels >= start; returns the residue and the level at
    // which stripping stopped (== levels.size() if fully stripped).
    std::pair<Permutation, std::size_t> strip(Permutation g, std::size_t start) const {
        for (std::size_t k = start; k < levels.size(); ++k) {
            int p = g.image[levels[k].base];
            auto it = levels[k].transversal.find(p);
            if (it == levels[k].transversal.end()) return {std::move(g), k};
            g = g.then(it->second.inverse());
        }
        return {std::move(g), levels.size()};
    }

    // Generators of the stabilizer group at level k: everything stored at
    // levels >= k (each fixes all base points before its own level).
    std::vector<const Permutation*> level_generators(std::size_t k) const {
        std::vector<const Permutation*> out;
        for (std::size_t j = k; j < levels.size(); ++j)
            for (const auto& s : levels[j].gens) out.push_back(&s);
        return out;
    }

    void rebuild_orbit(std::size_t k) {
        auto& lvl = levels[k];
        auto gens = level_generators(k);
        lvl.transversal.clear();
        lvl.transversal[lvl.base] = Permutation::identity(n);
        std::vector<int> frontier{lvl.base};
        while (!frontier.empty()) {
            int p = frontier.back();
            frontier.pop_back();
            Permutation tp = lvl.transversal.at(p);
            for (const auto* s : gens) {
                int q = s->image[p];
                if (!lvl.transversal.count(q)) {
                    lvl.transversal[q] = tp.then(*s);
                    frontier.push_back(q);
                }
            }
        }
    }

    void rebuild_all() {
        for (std::size_t k = 0; k < levels.size(); ++k) rebuild_orbit(k);
    }

    void insert(Permutation g, std::size_t start) {
        auto [res, k] = strip(std::move(g), start);
        if (res.is_identity()) return;
        // Forced prefix levels may have bases the residue fixes; walk past
        // them (extending the chain as needed) to a base the residue moves.
        for (;;) {
            while (k < levels.size() && res.image[levels[k].base] == levels[k].base) ++k;
            if (k < levels.size()) break;
            ensure_level_for(res);
        }
        levels[k].gens.push_back(res);
        rebuild_all();
    }

    bool verify_once() {
        for (std::size_t k = 0; k < levels.size(); ++k) {
            auto& lvl = levels[k];
            auto gens = level_generators(k);
            for (const auto& [p, tp] : lvl.transversal) {
                for (const auto* s : gens) {
                    int q = s->image[p];
                    Permutation schreier = tp.then(*s).then(lvl.transversal.at(q).inverse());
                    auto res = strip(schreier, k + 1).first;
                    if (!res.is_identity()) {
                        insert(std::move(res), k + 1);
                        return false;
                    }
                }
            }
        }
        return true;
    }

    std::uint64_t order() const {
        std::uint64_t o = 1;
        for (const auto& lvl : levels) o *= lvl.transversal.size();
        return o;
    }
};

SSChain build_chain(int n, const std::vector<Permutation>& generators,
                    const std::vector<int>& base_prefix) {
    SSChain chain{n, {}, base_prefix, 0};
    chain.force_prefix_levels();
    for (const auto& g : generators) {
        if (g.size() != n) throw StructuralError("generator degree mismatch");
        if (!g.is_valid()) throw StructuralError("generator is not a permutation");
        chain.insert(g, 0);
    }
    while (!chain.verify_once()) {
    }
    return chain;
}

}  // namespace

std::uint64_t schreier_sims_order(int n, const std::vector<Permutation>& generators,
                                  const std::vector<int>& base_prefix) {
    return build_chain(n, generators, base_prefix).order();
}

std::vector<Permutation> pointwise_stabilizer(int n, const std::vector<Permutation>& generators,
                                              const std::vector<int>& points) {
    auto chain = build_chain(n, generators, points);
    std::vector<Permutation> out;
    for (std::size_t k = points.size(); k < chain.levels.size(); ++k)
        for (const auto& g : chain.levels[k].gens) out.push_back(g);
    return out;
}

std::uint64_t brute_force_automorphism_count(const BlockadeGraph& g) {
    if (g.n > 10)
        throw ResourceLimitError("brute-force automorphism count limited to 10 vertices");
    Permutation p = Permutation::identity(g.n);
    std::uint64_t count = 0;
    do {
        if (is_automorphism(g, p)) ++count;
    } while (std::next_permutation(p.image.begin(), p.image.end()));
    return count;
}

OrbitDecomposition orbit_decomposition(const AutGroup& a, const Language& l) {
    OrbitDecomposition dec;
    std::unordered_set<Configuration, ConfigurationHash> seen;
    for (const auto& start : l.configs) {
        if (seen.count(start)) continue;
        std::vector<Configuration> orbit{start};
        seen.insert(start);
        for (std::size_t h = 0; h < orbit.size(); ++h) {
            for (const auto& gen : a.generators) {
                Configuration img = act(gen, orbit[h]);
                if (!l.contains(img))
                    throw StructuralError(
                        "group action leaves the language: " + orbit[h].str() + " -> " + img.str() +
                        " (the group is not a symmetry of this language)");
                if (seen.insert(img).second) orbit.push_back(img);
            }
        }
        std::sort(orbit.begin(), orbit.end());
        dec.orbits.push_back(std::move(orbit));
    }
    return dec;
}

FullSymmetryReport is_fully_symmetric(const BlockadeGraph& g, const std::optional<PortMap>& ports) {
    if (ports) ports->validate(g.n);
    FullSymmetryReport rep;
    rep.mwis = mwis(g);
    rep.group = automorphism_group(g);
    rep.orbits = orbit_decomposition(rep.group, rep.mwis.language);
    rep.fully_symmetric = rep.orbits.orbits.size() == 1;
    return rep;
}

BurnsideReport burnside_check(const AutGroup& a, const Language& l) {
    BurnsideReport rep;
    rep.aut_order = a.order;
    rep.language_size = l.size();
    rep.bound_satisfied = a.order >= l.size();
    auto dec = orbit_decomposition(a, l);
    rep.orbit_count = dec.orbits.size();
    rep.single_orbit = rep.orbit_count == 1;
    return rep;
}

bool isometry_realizable(const BlockadeStructure& s, const Permutation& p) {
    if (p.size() != s.size() || !p.is_valid())
        throw StructuralError("permutation does not match structure size");
    const double tol = 1e-9;
    auto dist = [&](int i, int j) {
        double d2 = 0;
        for (int k = 0; k < s.dimension; ++k) {
            double dx = s.atoms[i].pos[k] - s.atoms[j].pos[k];
            d2 += dx * dx;
        }
        return std::sqrt(d2);
    };
    for (int i = 0; i < s.size(); ++i)
        for (int j = i + 1; j < s.size(); ++j)
            if (std::abs(dist(i, j) - dist(p.image[i], p.image[j])) > tol) return false;
    return true;
}

}  // namespace blockadelab
