#include "blockadelab/combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace blockadelab {

namespace {

// DFS in string-lexicographic order: at atom i the 0-branch precedes the
// 1-branch, so configurations come out sorted without a final sort.
void enumerate_rec(const std::vector<std::uint64_t>& adj, int n, int i,
                   std::uint64_t chosen, std::uint64_t blocked,
                   std::vector<Configuration>& out,
                   std::optional<std::uint64_t> max_count, bool truncate, bool& overflow) {
    if (overflow) return;
    if (i == n) {
        if (max_count && out.size() >= *max_count) {
            overflow = true;
            return;
        }
        out.push_back(Configuration::from_mask(chosen, n));
        return;
    }
    enumerate_rec(adj, n, i + 1, chosen, blocked, out, max_count, truncate, overflow);
    if (!((blocked >> i) & 1u))
        enumerate_rec(adj, n, i + 1, chosen | (std::uint64_t{1} << i), blocked | adj[i], out,
                      max_count, truncate, overflow);
}

struct MwisSearch {
    const std::vector<std::uint64_t>& adj;
    const std::vector<int>& weights;
    std::vector<int> order;          // branching order
    long long best = -1;
    std::vector<std::uint64_t> argmax;

    void run(std::size_t idx, std::uint64_t avail, std::uint64_t chosen, long long w,
             long long residual) {
        if (w + residual < best) return;  // even taking everything left loses
        // advance to the next branching vertex still available
        while (idx < order.size() && !((avail >> order[idx]) & 1u)) ++idx;
        if (idx == order.size()) {
            if (w > best) {
                best = w;
                argmax.clear();
            }
            if (w == best) argmax.push_back(chosen);
            return;
        }
        int v = order[idx];
        std::uint64_t bit = std::uint64_t{1} << v;
        // include v
        run(idx + 1, avail & ~(adj[v] | bit), chosen | bit, w + weights[v],
            residual_of(avail & ~(adj[v] | bit)));
        // exclude v
        run(idx + 1, avail & ~bit, chosen, w, residual_of(avail & ~bit));
    }

    long long residual_of(std::uint64_t avail) const {
        long long s = 0;
        while (avail) {
            int v = std::countr_zero(avail);
            avail &= avail - 1;
            s += weights[v];
        }
        return s;
    }
};

}  // namespace

std::vector<Configuration> enumerate_independent_sets(const BlockadeGraph& g,
                                                      std::optional<std::uint64_t> max_count,
                                                      bool truncate) {
    g.validate();
    if (g.n > 64)
        throw ResourceLimitError("independent-set enumeration requires n <= 64, got " +
                                 std::to_string(g.n));
    auto adj = g.adjacency_masks();
    std::vector<Configuration> out;
    bool overflow = false;
    std::optional<std::uint64_t> cap = max_count;
    enumerate_rec(adj, g.n, 0, 0, 0, out, cap, truncate, overflow);
    if (overflow && !truncate)
        throw ResourceLimitError("independent-set count exceeds requested cap of " +
                                 std::to_string(*max_count));
    return out;
}

std::uint64_t count_independent_sets(const BlockadeGraph& g) {
    g.validate();
    auto adj = g.adjacency_masks();
    // simple DFS count, no materialization
    std::uint64_t count = 0;
    std::vector<std::pair<int, std::uint64_t>> stack{{0, 0}};
    // iterative: (next atom index, blocked mask)
    while (!stack.empty()) {
        auto [i, blocked] = stack.back();
        stack.pop_back();
        while (i < g.n) {
            if (!((blocked >> i) & 1u)) stack.push_back({i + 1, blocked | adj[i]});
            ++i;
        }
        ++count;
    }
    return count;
}

MwisResult mwis(const BlockadeGraph& g, const MwisOptions& opts) {
    g.validate();
    if (g.n > opts.exact_limit || g.n > 64)
        throw ResourceLimitError("mwis exact limit is " +
                                 std::to_string(std::min(opts.exact_limit, 64)) +
                                 " vertices, got " + std::to_string(g.n) +
                                 "; no heuristic fallback is offered");
    MwisResult res;
    if (g.n == 0) {
        res.max_weight = 0;
        res.language = Language::from_unsorted({Configuration(0)});
        res.independent_count = 1;
        return res;
    }
    auto adj = g.adjacency_masks();
    if (g.n < opts.enumeration_cutoff) {
        auto all = enumerate_independent_sets(g);
        long long best = -1;
        std::vector<Configuration> arg;
        for (const auto& c : all) {
            long long w = 0;
            for (int i = 0; i < g.n; ++i)
                if (c.get(i)) w += g.weights[i];
            if (w > best) {
                best = w;
                arg.clear();
            }
            if (w == best) arg.push_back(c);
        }
        res.max_weight = best;
        res.language = Language::from_unsorted(std::move(arg));
        res.independent_count = all.size();
        return res;
    }
    MwisSearch search{adj, g.weights, {}, -1, {}};
    search.order.resize(g.n);
    std::iota(search.order.begin(), search.order.end(), 0);
    auto deg = g.degrees();
    std::sort(search.order.begin(), search.order.end(), [&](int a, int b) {
        if (g.weights[a] != g.weights[b]) return g.weights[a] > g.weights[b];
        if (deg[a] != deg[b]) return deg[a] > deg[b];
        return a < b;
    });
    std::uint64_t full = (g.n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << g.n) - 1);
    search.run(0, full, 0, 0, search.residual_of(full));
    std::vector<Configuration> arg;
    arg.reserve(search.argmax.size());
    for (auto m : search.argmax) arg.push_back(Configuration::from_mask(m, g.n));
    res.max_weight = search.best;
    res.language = Language::from_unsorted(std::move(arg));
    return res;
}

std::vector<int> sphere_connected_vertices(const BlockadeGraph& g) {
    auto adj = g.adjacency_lists();
    std::vector<int> out;
    for (int v = 0; v < g.n; ++v) {
        const auto& nb = adj[v];
        if (nb.empty()) continue;  // empty sphere: treat as not connected (no contraction)
        // BFS within the induced subgraph on nb
        std::vector<int> comp{nb[0]};
        std::vector<bool> in_comp(g.n, false);
        in_comp[nb[0]] = true;
        for (std::size_t h = 0; h < comp.size(); ++h)
            for (int u : adj[comp[h]])
                if (!in_comp[u] && std::binary_search(nb.begin(), nb.end(), u)) {
                    in_comp[u] = true;
                    comp.push_back(u);
                }
        if (comp.size() == nb.size()) out.push_back(v);
    }
    return out;
}

QuotientGraph quotient_by_cliques(const BlockadeGraph& g, const VertexSetRule& rule) {
    g.validate();
    auto selected = rule(g);
    std::vector<bool> in_set(g.n, false);
    for (int v : selected) {
        if (v < 0 || v >= g.n) throw StructuralError("classifier produced an invalid vertex id");
        if (in_set[v]) throw StructuralError("classifier produced overlapping components");
        in_set[v] = true;
    }
    auto adj = g.adjacency_lists();
    QuotientGraph q;
    q.class_of.assign(g.n, -1);
    // components of the induced subgraph on the selected set; only components
    // that induce cliques qualify for contraction, the rest stay singletons
    // (a graph without qualifying cliques gets the identity quotient)
    std::vector<int> comp_of(g.n, -1);
    std::vector<std::vector<int>> components;
    for (int v = 0; v < g.n; ++v) {
        if (!in_set[v] || comp_of[v] >= 0) continue;
        std::vector<int> comp{v};
        comp_of[v] = static_cast<int>(components.size());
        for (std::size_t h = 0; h < comp.size(); ++h)
            for (int u : adj[comp[h]])
                if (in_set[u] && comp_of[u] < 0) {
                    comp_of[u] = comp_of[v];
                    comp.push_back(u);
                }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    for (auto& comp : components) {
        bool clique = true;
        for (std::size_t a = 0; a < comp.size() && clique; ++a)
            for (std::size_t b = a + 1; b < comp.size() && clique; ++b)
                if (!g.has_edge(comp[a], comp[b])) clique = false;
        if (!clique || comp.size() < 2) continue;
        for (int v : comp) q.class_of[v] = static_cast<int>(q.classes.size());
        q.classes.push_back(comp);
    }
    for (int v = 0; v < g.n; ++v)
        if (q.class_of[v] < 0) {
            q.class_of[v] = static_cast<int>(q.classes.size());
            q.classes.push_back({v});
        }
    const int m = static_cast<int>(q.classes.size());
    q.quotient.n = m;
    q.quotient.weights.assign(m, 0);
    for (int v = 0; v < g.n; ++v) q.quotient.weights[q.class_of[v]] += g.weights[v];
    for (auto [i, j] : g.edges) {
        int a = q.class_of[i], b = q.class_of[j];
        if (a != b) q.quotient.edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    q.quotient.normalize();
    q.quotient.validate();
    return q;
}

}  // namespace blockadelab
