#pragma once

// Exact enumeration kernels: independent sets, maximum-weight independent
// sets (classical ground languages), and clique-condensation quotients.

#include <cstdint>
#include <functional>
#include <optional>

#include "blockadelab/core.hpp"

namespace blockadelab {

struct MwisResult {
    long long max_weight = 0;
    Language language;  // every configuration attaining max_weight
    std::optional<std::uint64_t> independent_count;  // filled on the enumeration path
};

struct MwisOptions {
    int exact_limit = 64;          // hard cap; refusal above
    int enumeration_cutoff = 20;   // below this, full enumeration instead of B&B
};

// All independent sets of g (the all-zero configuration included), in
// lexicographic order. If max_count is set, at most that many are produced;
// with truncate=false exceeding the cap is an error, with truncate=true the
// first max_count sets are returned.
std::vector<Configuration> enumerate_independent_sets(
    const BlockadeGraph& g,
    std::optional<std::uint64_t> max_count = std::nullopt,
    bool truncate = false);

std::uint64_t count_independent_sets(const BlockadeGraph& g);

// Exhaustive-correct maximum-weight independent sets. Branch and bound with a
// residual-weight upper bound for n >= enumeration_cutoff, full enumeration
// below. Refuses (ResourceLimitError) above exact_limit vertices.
MwisResult mwis(const BlockadeGraph& g, const MwisOptions& opts = {});

struct QuotientGraph {
    std::vector<std::vector<int>> classes;  // partition of 0..n-1, each sorted
    std::vector<int> class_of;              // vertex -> class index
    BlockadeGraph quotient;                 // class weights = sum of member weights
};

// Vertex-set rule: returns the vertex subset whose connected components are to
// be contracted. The default rule selects vertices whose neighborhood sphere
// ∂B1(v) induces a connected subgraph.
using VertexSetRule = std::function<std::vector<int>(const BlockadeGraph&)>;

std::vector<int> sphere_connected_vertices(const BlockadeGraph& g);

// Contracts every connected component of the classifier set that induces a
// clique to a single class; non-clique components are left untouched, so a
// graph without qualifying cliques gets the identity quotient. A classifier
// emitting a vertex twice is a structural error.
QuotientGraph quotient_by_cliques(const BlockadeGraph& g, const VertexSetRule& rule = sphere_connected_vertices);

}  // namespace blockadelab
