#pragma once

#include <functional>
#include <optional>
#include <set>
#include <unordered_map>

#include "hsys/common.hpp"

namespace hsys {

struct HyperEdge {
    std::size_t color = 0; // 0-based
    // Sorted for undirected hypergraphs; (tail, head) for directed graphs.
    std::vector<std::size_t> verts;
    std::optional<Tuple> label;
};

// Colored s-uniform hypergraph on vertices [0, num_vertices). Clusters are an
// optional partition of the vertices (one per block variable for K built from
// a circular system); vertex_tags optionally attach a group element to each
// vertex.
struct ColoredHypergraph {
    std::size_t num_vertices = 0;
    std::size_t uniformity = 2;
    std::size_t num_colors = 0;
    bool directed = false;
    std::vector<std::vector<std::size_t>> clusters;
    std::vector<Tuple> vertex_tags;
    std::vector<HyperEdge> edges;

    // Normalizes the vertex order of undirected edges; returns the index.
    std::size_t add_edge(std::size_t color, std::vector<std::size_t> verts, std::optional<Tuple> label = {});
    // Throws InvalidInput on a wrong edge size, an out-of-range vertex or
    // color, a directed edge with s != 2, or a duplicated (color, verts) pair.
    void validate() const;
    std::vector<std::size_t> edges_of_color(std::size_t color) const;
};

// Lookup of edges by (color, vertex tuple).
class EdgeIndex {
public:
    explicit EdgeIndex(const ColoredHypergraph& g);
    // verts in the stored order (sorted unless directed).
    std::optional<std::size_t> find(std::size_t color, const std::vector<std::size_t>& verts) const;
    // Edges of the given color through vertex v.
    const std::vector<std::size_t>& incident(std::size_t v, std::size_t color) const;

private:
    const ColoredHypergraph* g_;
    std::unordered_map<Tuple, std::size_t, TupleHash> map_;
    std::vector<std::vector<std::vector<std::size_t>>> incident_;
    std::vector<std::size_t> empty_;
};

// Vertices [0, m), edge i = {i, ..., i + k} (mod m) colored i.
ColoredHypergraph build_cycle_template_H(std::size_t m, std::size_t k);

struct Copy {
    std::vector<std::size_t> vertex_map; // V(H) -> V(K)
    std::vector<std::size_t> edges;      // K edge matched by each H edge, in H edge order
};

struct CopySearchOptions {
    std::uint64_t cap = kDefaultCap; // maximum number of copies reported
    // Report one vertex map per set of matched edges (drops maps that differ
    // by an automorphism of H fixing every edge).
    bool distinct_edge_sets = false;
};

// Color-preserving injective homomorphisms H -> K by backtracking, in
// lexicographic order of the vertex maps (H vertices in index order).
// Candidates for a vertex adjacent to an assigned vertex are drawn from the
// incident edges of the required color.
void for_each_copy(const ColoredHypergraph& H, const ColoredHypergraph& K, const std::function<void(const Copy&)>& fn,
                   const CopySearchOptions& opt = {});
std::vector<Copy> enumerate_copies(const ColoredHypergraph& H, const ColoredHypergraph& K,
                                   const CopySearchOptions& opt = {});

// Edges of color i whose label lies in domains[i] (nullopt keeps all).
// Edge order of the result follows K; kept[j] is the K index of edge j.
struct RestrictedHypergraph {
    ColoredHypergraph graph;
    std::vector<std::size_t> kept;
};
RestrictedHypergraph restrict_to_domains(const ColoredHypergraph& K, const std::vector<std::optional<std::set<Tuple>>>& domains);

// Edge set hitting every copy of H in K: repeatedly takes the edge lying in
// the most surviving copies (smallest index on ties). Indices into K.
std::vector<std::size_t> greedy_edge_cover(const ColoredHypergraph& H, const ColoredHypergraph& K,
                                           std::uint64_t cap = kDefaultCap);

// K without the listed edges.
ColoredHypergraph remove_edges(const ColoredHypergraph& K, const std::vector<std::size_t>& edges);

} // namespace hsys
