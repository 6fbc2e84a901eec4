#include "hsys/perm.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace hsys {

Permutation Permutation::identity(std::size_t n)
{
    Permutation p;
    p.values.resize(n);
    std::iota(p.values.begin(), p.values.end(), 0);
    return p;
}

Permutation Permutation::parse(const std::string& text)
{
    std::istringstream in(text);
    Permutation p;
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        long long v = -1;
        try {
            v = std::stoll(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || v < 0) throw InvalidInput("permutation: bad entry '" + tok + "'");
        p.values.push_back(static_cast<std::size_t>(v));
    }
    p.validate();
    return p;
}

void Permutation::validate() const
{
    auto s = values;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] != i) throw InvalidInput("permutation: values are not a bijection on [0, n)");
}

std::string Permutation::str() const
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? " " : "") + std::to_string(values[i]);
    return out;
}

std::vector<Permutation> all_permutations(std::size_t n)
{
    std::vector<Permutation> out;
    auto p = Permutation::identity(n);
    do out.push_back(p);
    while (std::next_permutation(p.values.begin(), p.values.end()));
    return out;
}

ColoredHypergraph build_pattern_digraph(const Permutation& sigma)
{
    sigma.validate();
    ColoredHypergraph g;
    g.directed = true;
    g.uniformity = 2;
    g.num_colors = 2;
    g.num_vertices = sigma.size();
    for (std::size_t i = 0; i < sigma.size(); ++i)
        for (std::size_t j = 0; j < sigma.size(); ++j)
            if (i != j && sigma.values[i] < sigma.values[j]) g.add_edge(i < j ? Blue : Red, {i, j});
    return g;
}

std::vector<std::vector<std::size_t>> occurrences(const Permutation& tau, const Permutation& sigma, std::uint64_t cap)
{
    tau.validate();
    sigma.validate();
    std::size_t m = tau.size(), n = sigma.size();
    if (m > n) throw PreconditionError("occurrences: pattern longer than the permutation");
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> x(m);
    std::iota(x.begin(), x.end(), 0);
    while (true) {
        bool ok = true;
        for (std::size_t a = 0; ok && a < m; ++a)
            for (std::size_t b = a + 1; ok && b < m; ++b)
                ok = (sigma.values[x[a]] < sigma.values[x[b]]) == (tau.values[a] < tau.values[b]);
        if (ok) {
            if (out.size() >= cap) throw CapExceeded("occurrences: cap exceeded");
            out.push_back(x);
        }
        // Next m-subset in lexicographic order.
        std::size_t i = m;
        while (i > 0 && x[i - 1] == n - m + i - 1) --i;
        if (i == 0) break;
        ++x[i - 1];
        for (std::size_t j = i; j < m; ++j) x[j] = x[j - 1] + 1;
    }
    return out;
}

OccurrenceReport copies_match_occurrences(const Permutation& tau, const Permutation& sigma, std::uint64_t cap)
{
    OccurrenceReport rep;
    auto occ = occurrences(tau, sigma, cap);
    rep.occurrences = occ.size();
    auto gt = build_pattern_digraph(tau);
    auto gs = build_pattern_digraph(sigma);
    std::map<std::vector<std::size_t>, std::uint64_t> images;
    CopySearchOptions opt;
    opt.cap = cap;
    for_each_copy(gt, gs, [&](const Copy& c) {
        ++rep.copies;
        if (!std::is_sorted(c.vertex_map.begin(), c.vertex_map.end())) {
            rep.monotone = false;
            if (rep.mismatches.size() < 5) rep.mismatches.push_back("copy is not monotone");
        }
        auto img = c.vertex_map;
        std::sort(img.begin(), img.end());
        ++images[img];
    }, opt);
    for (const auto& [img, n] : images)
        if (n != 1) {
            rep.rigid = false;
            if (rep.mismatches.size() < 5) rep.mismatches.push_back(std::to_string(n) + " copies share one image set");
        }
    std::set<std::vector<std::size_t>> occ_set(occ.begin(), occ.end());
    rep.match = rep.copies == rep.occurrences && images.size() == occ_set.size();
    for (const auto& [img, n] : images)
        if (!occ_set.count(img)) {
            rep.match = false;
            if (rep.mismatches.size() < 5) rep.mismatches.push_back("copy image is not an occurrence");
        }
    return rep;
}

PairDeletion greedy_pair_deletion(const Permutation& tau, const Permutation& sigma, std::uint64_t cap)
{
    PairDeletion out;
    out.occurrences_before = occurrences(tau, sigma, cap).size();
    auto gt = build_pattern_digraph(tau);
    auto gs = build_pattern_digraph(sigma);
    auto cover = greedy_edge_cover(gt, gs, cap);
    for (auto e : cover) {
        auto v = gs.edges[e].verts;
        out.pairs.emplace_back(std::min(v[0], v[1]), std::max(v[0], v[1]));
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    std::set<std::pair<std::size_t, std::size_t>> del(out.pairs.begin(), out.pairs.end());
    for (const auto& o : occurrences(tau, sigma, cap)) {
        bool hit = false;
        for (std::size_t a = 0; !hit && a < o.size(); ++a)
            for (std::size_t b = a + 1; !hit && b < o.size(); ++b) hit = del.count({o[a], o[b]}) > 0;
        if (!hit) ++out.occurrences_after;
    }
    return out;
}

} // namespace hsys
