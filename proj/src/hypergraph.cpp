#include "hsys/hypergraph.hpp"

#include <algorithm>
#include <unordered_set>

namespace hsys {

namespace {

Tuple edge_key(std::size_t color, const std::vector<std::size_t>& verts)
{
    Tuple key;
    key.reserve(verts.size() + 1);
    key.push_back(static_cast<std::int64_t>(color));
    for (auto v : verts) key.push_back(static_cast<std::int64_t>(v));
    return key;
}

} // namespace

std::size_t ColoredHypergraph::add_edge(std::size_t color, std::vector<std::size_t> verts, std::optional<Tuple> label)
{
    if (!directed) std::sort(verts.begin(), verts.end());
    edges.push_back({color, std::move(verts), std::move(label)});
    return edges.size() - 1;
}

void ColoredHypergraph::validate() const
{
    if (directed && uniformity != 2) throw InvalidInput("directed hypergraphs must be 2-uniform");
    std::unordered_set<Tuple, TupleHash> seen;
    for (const auto& e : edges) {
        if (e.verts.size() != uniformity) throw InvalidInput("edge size differs from the uniformity");
        if (e.color >= num_colors) throw InvalidInput("edge color out of range");
        for (auto v : e.verts)
            if (v >= num_vertices) throw InvalidInput("edge vertex out of range");
        auto sorted = e.verts;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InvalidInput("edge with a repeated vertex");
        if (!directed && sorted != e.verts) throw InvalidInput("undirected edge vertices must be sorted");
        if (!seen.insert(edge_key(e.color, e.verts)).second) throw InvalidInput("duplicated edge");
    }
    if (!vertex_tags.empty() && vertex_tags.size() != num_vertices) throw InvalidInput("vertex tags size mismatch");
    for (const auto& c : clusters)
        for (auto v : c)
            if (v >= num_vertices) throw InvalidInput("cluster vertex out of range");
}

std::vector<std::size_t> ColoredHypergraph::edges_of_color(std::size_t color) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].color == color) out.push_back(i);
    return out;
}

EdgeIndex::EdgeIndex(const ColoredHypergraph& g)
    : g_(&g), incident_(g.num_vertices, std::vector<std::vector<std::size_t>>(g.num_colors))
{
    map_.reserve(g.edges.size() * 2);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        map_.emplace(edge_key(e.color, e.verts), i);
        for (auto v : e.verts) incident_[v][e.color].push_back(i);
    }
}

std::optional<std::size_t> EdgeIndex::find(std::size_t color, const std::vector<std::size_t>& verts) const
{
    auto it = map_.find(edge_key(color, verts));
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

const std::vector<std::size_t>& EdgeIndex::incident(std::size_t v, std::size_t color) const
{
    if (v >= incident_.size() || color >= g_->num_colors) return empty_;
    return incident_[v][color];
}

ColoredHypergraph build_cycle_template_H(std::size_t m, std::size_t k)
{
    if (m < k + 2) throw PreconditionError("cycle template needs m >= k + 2");
    ColoredHypergraph h;
    h.num_vertices = m;
    h.uniformity = k + 1;
    h.num_colors = m;
    for (std::size_t i = 0; i < m; ++i) h.clusters.push_back({i});
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::size_t> verts;
        for (std::size_t j = 0; j <= k; ++j) verts.push_back((i + j) % m);
        h.add_edge(i, std::move(verts));
    }
    return h;
}

void for_each_copy(const ColoredHypergraph& H, const ColoredHypergraph& K, const std::function<void(const Copy&)>& fn,
                   const CopySearchOptions& opt)
{
    if (H.uniformity != K.uniformity || H.directed != K.directed)
        throw InvalidInput("copy search: H and K differ in uniformity or orientation");
    std::size_t h = H.num_vertices;
    if (h == 0) return;
    EdgeIndex index(K);

    // Edges of H completed when vertex v is assigned, and an anchor edge
    // through v and an earlier vertex for candidate generation.
    std::vector<std::vector<std::size_t>> completes(h);
    std::vector<std::optional<std::pair<std::size_t, std::size_t>>> anchor(h);
    for (std::size_t e = 0; e < H.edges.size(); ++e) {
        const auto& verts = H.edges[e].verts;
        if (H.edges[e].color >= K.num_colors) return; // no edge of that color in K
        std::size_t last = *std::max_element(verts.begin(), verts.end());
        completes[last].push_back(e);
        for (auto v : verts) {
            if (anchor[v]) continue;
            for (auto u : verts)
                if (u < v) {
                    anchor[v] = std::make_pair(e, u);
                    break;
                }
        }
    }

    std::vector<std::size_t> f(h);
    std::vector<char> used(K.num_vertices, 0);
    std::vector<std::size_t> matched(H.edges.size());
    std::unordered_set<Tuple, TupleHash> seen_sets;
    std::uint64_t reported = 0;
    Copy copy;
    std::vector<std::size_t> image;

    std::function<void(std::size_t)> rec = [&](std::size_t v) {
        if (v == h) {
            copy.vertex_map = f;
            copy.edges = matched;
            if (opt.distinct_edge_sets) {
                Tuple key(matched.begin(), matched.end());
                std::sort(key.begin(), key.end());
                if (!seen_sets.insert(key).second) return;
            }
            if (++reported > opt.cap) throw CapExceeded("copy enumeration exceeded the cap");
            fn(copy);
            return;
        }
        std::vector<std::size_t> cands;
        if (anchor[v]) {
            auto [e, u] = *anchor[v];
            const auto& hv = H.edges[e].verts;
            std::size_t pos_v = std::find(hv.begin(), hv.end(), v) - hv.begin();
            for (auto ke : index.incident(f[u], H.edges[e].color)) {
                const auto& kv = K.edges[ke].verts;
                if (K.directed) {
                    cands.push_back(kv[pos_v]);
                } else {
                    for (auto w : kv)
                        if (w != f[u]) cands.push_back(w);
                }
            }
            std::sort(cands.begin(), cands.end());
            cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
        } else {
            cands.resize(K.num_vertices);
            for (std::size_t w = 0; w < K.num_vertices; ++w) cands[w] = w;
        }
        for (auto w : cands) {
            if (used[w]) continue;
            f[v] = w;
            bool ok = true;
            for (auto e : completes[v]) {
                const auto& hv = H.edges[e].verts;
                image.resize(hv.size());
                for (std::size_t j = 0; j < hv.size(); ++j) image[j] = f[hv[j]];
                if (!K.directed) std::sort(image.begin(), image.end());
                auto found = index.find(H.edges[e].color, image);
                if (!found) {
                    ok = false;
                    break;
                }
                matched[e] = *found;
            }
            if (!ok) continue;
            used[w] = 1;
            rec(v + 1);
            used[w] = 0;
        }
    };
    rec(0);
}

std::vector<Copy> enumerate_copies(const ColoredHypergraph& H, const ColoredHypergraph& K, const CopySearchOptions& opt)
{
    std::vector<Copy> out;
    for_each_copy(H, K, [&](const Copy& c) { out.push_back(c); }, opt);
    return out;
}

RestrictedHypergraph restrict_to_domains(const ColoredHypergraph& K, const std::vector<std::optional<std::set<Tuple>>>& domains)
{
    RestrictedHypergraph out;
    out.graph = K;
    out.graph.edges.clear();
    for (std::size_t i = 0; i < K.edges.size(); ++i) {
        const auto& e = K.edges[i];
        if (e.color < domains.size() && domains[e.color]) {
            if (!e.label || !domains[e.color]->count(*e.label)) continue;
        }
        out.graph.edges.push_back(e);
        out.kept.push_back(i);
    }
    return out;
}

std::vector<std::size_t> greedy_edge_cover(const ColoredHypergraph& H, const ColoredHypergraph& K, std::uint64_t cap)
{
    CopySearchOptions opt;
    opt.cap = cap;
    opt.distinct_edge_sets = true;
    std::vector<std::vector<std::size_t>> copies;
    for_each_copy(H, K, [&](const Copy& c) { copies.push_back(c.edges); }, opt);

    std::vector<std::vector<std::size_t>> through(K.edges.size());
    for (std::size_t c = 0; c < copies.size(); ++c) {
        auto es = copies[c];
        std::sort(es.begin(), es.end());
        es.erase(std::unique(es.begin(), es.end()), es.end());
        for (auto e : es) through[e].push_back(c);
    }
    std::vector<std::size_t> alive(K.edges.size());
    for (std::size_t e = 0; e < K.edges.size(); ++e) alive[e] = through[e].size();
    std::vector<char> hit(copies.size(), 0);
    std::size_t remaining = copies.size();
    std::vector<std::size_t> cover;
    while (remaining > 0) {
        std::size_t best = 0;
        for (std::size_t e = 1; e < alive.size(); ++e)
            if (alive[e] > alive[best]) best = e;
        if (alive.empty() || alive[best] == 0) throw PreconditionError("edge cover: a copy of H has no edges");
        cover.push_back(best);
        for (auto c : through[best]) {
            if (hit[c]) continue;
            hit[c] = 1;
            --remaining;
            for (auto e : copies[c])
                if (alive[e] > 0) --alive[e];
        }
        alive[best] = 0;
    }
    std::sort(cover.begin(), cover.end());
    return cover;
}

ColoredHypergraph remove_edges(const ColoredHypergraph& K, const std::vector<std::size_t>& edges)
{
    std::vector<char> drop(K.edges.size(), 0);
    for (auto e : edges) {
        if (e >= K.edges.size()) throw InvalidInput("edge index out of range");
        drop[e] = 1;
    }
    ColoredHypergraph out = K;
    out.edges.clear();
    for (std::size_t i = 0; i < K.edges.size(); ++i)
        if (!drop[i]) out.edges.push_back(K.edges[i]);
    return out;
}

} // namespace hsys
