#pragma once

// Core data model: blockade structures (atoms with positions and integer
// detunings), the derived vertex-weighted blockade graph, excitation
// configurations, and languages (ordered sets of configurations).
//
// Conventions used throughout the library:
//   - detunings are exact nonnegative integers, in units of the unit detuning
//     Δ; Δ itself only enters as a runtime real in the spectra module.
//   - an edge (i,j) is present iff |r_i - r_j| <= r_B (closed blockade ball),
//     compared with absolute tolerance 1e-9 * r_B.
//   - configurations are ordered lexicographically as bit strings, with bit 0
//     the most significant character.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blockadelab {

// Malformed input data (invariant violations, inconsistent files, ...).
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A computation refused because it would exceed a configured resource cap.
// Loud refusal instead of a heuristic answer.
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Atom {
    int id = 0;
    std::vector<double> pos;
    int detuning = 0;  // multiples of Δ, >= 0
};

struct BlockadeStructure {
    int dimension = 2;  // 2 or 3
    double blockade_radius = 1.0;
    std::vector<Atom> atoms;
    std::vector<int> ports;  // optional designated logical ports

    int size() const { return static_cast<int>(atoms.size()); }
    // Throws StructuralError if any invariant fails (ids 0..N-1, finite
    // coordinates of matching dimension, nonnegative detunings, distinct
    // positions, valid port ids).
    void validate() const;
};

struct BlockadeGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // i < j, sorted, unique
    std::vector<int> weights;                // per-vertex detuning in units of Δ

    void normalize();  // sort edges, canonicalize orientation
    void validate() const;
    bool has_edge(int i, int j) const;
    long long total_weight() const;
    std::vector<std::vector<int>> adjacency_lists() const;
    // Bitmask adjacency rows; only valid for n <= 64.
    std::vector<std::uint64_t> adjacency_masks() const;
    std::vector<int> degrees() const;

    bool operator==(const BlockadeGraph&) const = default;
};

// Excitation pattern over N atoms, packed 64 bits per word.
class Configuration {
  public:
    Configuration() = default;
    explicit Configuration(int n) : n_(n), w_((n + 63) / 64, 0) {}
    static Configuration from_string(const std::string& bits);
    static Configuration from_mask(std::uint64_t mask, int n);

    int size() const { return n_; }
    bool get(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(int i, bool v) {
        if (v)
            w_[i >> 6] |= (std::uint64_t{1} << (i & 63));
        else
            w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
    int count() const;
    // Low 64 bits; requires n <= 64.
    std::uint64_t low_mask() const;
    std::string str() const;
    int hamming_distance(const Configuration& o) const;

    bool operator==(const Configuration& o) const = default;
    // Lexicographic as a bit string (bit 0 most significant).
    bool operator<(const Configuration& o) const;

    std::size_t hash() const;

  private:
    int n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const { return c.hash(); }
};

// A set of same-length configurations in canonical (lexicographic) order.
struct Language {
    std::vector<Configuration> configs;

    static Language from_unsorted(std::vector<Configuration> v);
    std::size_t size() const { return configs.size(); }
    bool contains(const Configuration& c) const;
    bool operator==(const Language&) const = default;
};

struct PortMap {
    std::vector<int> ports;
    void validate(int n_atoms) const;
};

// Builds the vertex-weighted blockade graph of a structure: edge iff the pair
// distance is within the (closed) blockade ball, weights copied from detunings.
BlockadeGraph blockade_graph_from_structure(const BlockadeStructure& s);

// Projects every configuration to the port bits and merges duplicates.
Language restrict_language_to_ports(const Language& l, const PortMap& p);

// Smallest |distance - r_B| over all atom pairs; used to validate catalog
// coordinate tables against the 1e-3 margin requirement.
double blockade_margin(const BlockadeStructure& s);

// --- serialization (JSON documents and the newline-delimited language file) ---

std::string to_json(const BlockadeStructure& s);
std::string to_json(const BlockadeGraph& g);
BlockadeStructure structure_from_json(const std::string& text);
BlockadeGraph graph_from_json(const std::string& text);
// Accepts either a structure document (atoms) or a graph document (edges);
// returns the graph plus the port list if one was present.
std::pair<BlockadeGraph, std::vector<int>> any_graph_from_json(const std::string& text);

std::string language_to_text(const Language& l);
Language language_from_text(const std::string& text);

}  // namespace blockadelab
