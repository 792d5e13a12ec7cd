#include "blockadelab/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace blockadelab {

using nlohmann::json;

void BlockadeStructure::validate() const {
    if (dimension != 2 && dimension != 3)
        throw StructuralError("structure dimension must be 2 or 3");
    if (!(blockade_radius > 0.0) || !std::isfinite(blockade_radius))
        throw StructuralError("blockade radius must be positive and finite");
    const int n = size();
    for (int i = 0; i < n; ++i) {
        const Atom& a = atoms[i];
        if (a.id != i)
            throw StructuralError("atom ids must be 0..N-1 in order, got id " +
                                  std::to_string(a.id) + " at index " + std::to_string(i));
        if (static_cast<int>(a.pos.size()) != dimension)
            throw StructuralError("atom " + std::to_string(i) + " has wrong position dimension");
        for (double x : a.pos)
            if (!std::isfinite(x)) throw StructuralError("non-finite coordinate");
        if (a.detuning < 0)
            throw StructuralError("detunings must be nonnegative integers");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (atoms[i].pos == atoms[j].pos)
                throw StructuralError("atoms " + std::to_string(i) + " and " +
                                      std::to_string(j) + " share a position");
    if (!ports.empty()) {
        PortMap pm{ports};
        pm.validate(n);
    }
}

void BlockadeGraph::normalize() {
    for (auto& e : edges)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

void BlockadeGraph::validate() const {
    if (n < 0) throw StructuralError("negative vertex count");
    if (static_cast<int>(weights.size()) != n)
        throw StructuralError("weight list length must equal vertex count");
    for (int w : weights)
        if (w < 0) throw StructuralError("vertex weights must be nonnegative");
    for (auto [i, j] : edges) {
        if (i == j) throw StructuralError("self-loop on vertex " + std::to_string(i));
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw StructuralError("edge endpoint out of range");
    }
    auto sorted = edges;
    for (auto& e : sorted)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw StructuralError("duplicate edge");
}

bool BlockadeGraph::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

long long BlockadeGraph::total_weight() const {
    long long s = 0;
    for (int w : weights) s += w;
    return s;
}

std::vector<std::vector<int>> BlockadeGraph::adjacency_lists() const {
    std::vector<std::vector<int>> adj(n);
    for (auto [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

std::vector<std::uint64_t> BlockadeGraph::adjacency_masks() const {
    if (n > 64) throw ResourceLimitError("bitmask adjacency requires n <= 64, got n = " + std::to_string(n));
    std::vector<std::uint64_t> adj(n, 0);
    for (auto [i, j] : edges) {
        adj[i] |= std::uint64_t{1} << j;
        adj[j] |= std::uint64_t{1} << i;
    }
    return adj;
}

std::vector<int> BlockadeGraph::degrees() const {
    std::vector<int> deg(n, 0);
    for (auto [i, j] : edges) {
        ++deg[i];
        ++deg[j];
    }
    return deg;
}

Configuration Configuration::from_string(const std::string& bits) {
    Configuration c(static_cast<int>(bits.size()));
    for (int i = 0; i < c.n_; ++i) {
        if (bits[i] == '1')
            c.set(i, true);
        else if (bits[i] != '0')
            throw StructuralError("configuration strings may contain only 0/1");
    }
    return c;
}

Configuration Configuration::from_mask(std::uint64_t mask, int n) {
    Configuration c(n);
    if (n > 0) c.w_[0] = (n >= 64) ? mask : (mask & ((std::uint64_t{1} << n) - 1));
    return c;
}

int Configuration::count() const {
    int s = 0;
    for (auto w : w_) s += std::popcount(w);
    return s;
}

std::uint64_t Configuration::low_mask() const {
    if (n_ > 64) throw ResourceLimitError("configuration mask requires n <= 64");
    return w_.empty() ? 0 : w_[0];
}

std::string Configuration::str() const {
    std::string s(n_, '0');
    for (int i = 0; i < n_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

int Configuration::hamming_distance(const Configuration& o) const {
    if (n_ != o.n_) throw StructuralError("hamming distance of configurations with different lengths");
    int d = 0;
    for (std::size_t k = 0; k < w_.size(); ++k) d += std::popcount(w_[k] ^ o.w_[k]);
    return d;
}

bool Configuration::operator<(const Configuration& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    for (std::size_t k = 0; k < w_.size(); ++k) {
        std::uint64_t d = w_[k] ^ o.w_[k];
        if (d) {
            int bit = std::countr_zero(d);  // lowest index = earliest character
            return ((w_[k] >> bit) & 1u) == 0;
        }
    }
    return false;
}

std::size_t Configuration::hash() const {
    std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(n_);
    for (auto w : w_) {
        h ^= w;
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

Language Language::from_unsorted(std::vector<Configuration> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k].size() != v[0].size())
            throw StructuralError("language members must have equal length");
    return Language{std::move(v)};
}

bool Language::contains(const Configuration& c) const {
    return std::binary_search(configs.begin(), configs.end(), c);
}

void PortMap::validate(int n_atoms) const {
    std::vector<bool> seen(n_atoms, false);
    for (int p : ports) {
        if (p < 0 || p >= n_atoms) throw StructuralError("port id out of range");
        if (seen[p]) throw StructuralError("duplicate port id " + std::to_string(p));
        seen[p] = true;
    }
}

BlockadeGraph blockade_graph_from_structure(const BlockadeStructure& s) {
    s.validate();
    const int n = s.size();
    BlockadeGraph g;
    g.n = n;
    g.weights.resize(n);
    for (int i = 0; i < n; ++i) g.weights[i] = s.atoms[i].detuning;
    const double cut = s.blockade_radius * (1.0 + 1e-9);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double d2 = 0;
            for (int k = 0; k < s.dimension; ++k) {
                double dx = s.atoms[i].pos[k] - s.atoms[j].pos[k];
                d2 += dx * dx;
            }
            if (std::sqrt(d2) <= cut) g.edges.emplace_back(i, j);
        }
    }
    g.normalize();
    return g;
}

Language restrict_language_to_ports(const Language& l, const PortMap& p) {
    std::vector<Configuration> out;
    out.reserve(l.size());
    for (const auto& c : l.configs) {
        Configuration r(static_cast<int>(p.ports.size()));
        for (std::size_t k = 0; k < p.ports.size(); ++k) {
            int a = p.ports[k];
            if (a < 0 || a >= c.size())
                throw StructuralError("port id incompatible with configuration length");
            r.set(static_cast<int>(k), c.get(a));
        }
        out.push_back(std::move(r));
    }
    return Language::from_unsorted(std::move(out));
}

double blockade_margin(const BlockadeStructure& s) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s.size(); ++i) {
        for (int j = i + 1; j < s.size(); ++j) {
            double d2 = 0;
            for (int k = 0; k < s.dimension; ++k) {
                double dx = s.atoms[i].pos[k] - s.atoms[j].pos[k];
                d2 += dx * dx;
            }
            best = std::min(best, std::abs(std::sqrt(d2) - s.blockade_radius));
        }
    }
    return best;
}

std::string to_json(const BlockadeStructure& s) {
    json atoms = json::array();
    for (const auto& a : s.atoms)
        atoms.push_back({{"id", a.id}, {"pos", a.pos}, {"detuning", a.detuning}});
    json j = {{"dimension", s.dimension},
              {"blockade_radius", s.blockade_radius},
              {"atoms", atoms}};
    if (!s.ports.empty()) j["ports"] = s.ports;
    return j.dump(2);
}

std::string to_json(const BlockadeGraph& g) {
    json edges = json::array();
    for (auto [i, j] : g.edges) edges.push_back({i, j});
    json j = {{"n", g.n}, {"edges", edges}, {"weights", g.weights}};
    return j.dump(2);
}

static json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw StructuralError("malformed JSON document");
    return j;
}

static BlockadeStructure structure_from(const json& j) {
    BlockadeStructure s;
    s.dimension = j.at("dimension").get<int>();
    s.blockade_radius = j.at("blockade_radius").get<double>();
    for (const auto& a : j.at("atoms")) {
        Atom atom;
        atom.id = a.at("id").get<int>();
        atom.pos = a.at("pos").get<std::vector<double>>();
        atom.detuning = a.at("detuning").get<int>();
        s.atoms.push_back(std::move(atom));
    }
    if (j.contains("ports")) s.ports = j.at("ports").get<std::vector<int>>();
    s.validate();
    return s;
}

static BlockadeGraph graph_from(const json& j) {
    BlockadeGraph g;
    g.n = j.at("n").get<int>();
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw StructuralError("edges must be pairs");
        g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    g.weights = j.at("weights").get<std::vector<int>>();
    g.normalize();
    g.validate();
    return g;
}

BlockadeStructure structure_from_json(const std::string& text) { return structure_from(parse(text)); }

BlockadeGraph graph_from_json(const std::string& text) { return graph_from(parse(text)); }

std::pair<BlockadeGraph, std::vector<int>> any_graph_from_json(const std::string& text) {
    json j = parse(text);
    std::vector<int> ports;
    if (j.contains("ports")) ports = j.at("ports").get<std::vector<int>>();
    if (j.contains("edges") && j.contains("n")) return {graph_from(j), ports};
    if (j.contains("atoms")) return {blockade_graph_from_structure(structure_from(j)), ports};
    throw StructuralError("document is neither a structure nor a graph");
}

std::string language_to_text(const Language& l) {
    std::string out;
    for (const auto& c : l.configs) {
        out += c.str();
        out += '\n';
    }
    return out;
}

Language language_from_text(const std::string& text) {
    std::vector<Configuration> v;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        v.push_back(Configuration::from_string(line));
    }
    return Language::from_unsorted(std::move(v));
}

}  // namespace blockadelab
