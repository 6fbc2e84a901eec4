#include "doctest.h"

#include "hsys/hypergraph.hpp"

using namespace hsys;

namespace {

// K4 with every pair present in each of the given number of colors.
ColoredHypergraph complete_colored(std::size_t n, std::size_t colors)
{
    ColoredHypergraph g;
    g.num_vertices = n;
    g.uniformity = 2;
    g.num_colors = colors;
    for (std::size_t c = 0; c < colors; ++c)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) g.add_edge(c, {a, b});
    return g;
}

} // namespace

TEST_CASE("cycle template")
{
    auto tri = build_cycle_template_H(3, 1);
    CHECK(tri.num_vertices == 3);
    CHECK(tri.edges.size() == 3);
    CHECK(tri.edges[2].verts == std::vector<std::size_t>{0, 2});
    auto h = build_cycle_template_H(4, 2);
    CHECK(h.uniformity == 3);
    CHECK(h.edges[0].verts == std::vector<std::size_t>{0, 1, 2});
    CHECK(h.edges[2].verts == std::vector<std::size_t>{0, 2, 3});
    CHECK(h.edges[3].verts == std::vector<std::size_t>{0, 1, 3});
    CHECK_THROWS_AS(build_cycle_template_H(2, 1), PreconditionError);
    CHECK_NOTHROW(h.validate());
}

TEST_CASE("validate rejects malformed graphs")
{
    ColoredHypergraph g;
    g.num_vertices = 3;
    g.num_colors = 1;
    g.add_edge(0, {0, 1});
    CHECK_NOTHROW(g.validate());
    g.add_edge(0, {1, 0});
    CHECK_THROWS_AS(g.validate(), InvalidInput);
    g.edges.pop_back();
    g.add_edge(1, {1, 2});
    CHECK_THROWS_AS(g.validate(), InvalidInput);
    g.edges.pop_back();
    g.add_edge(0, {2, 5});
    CHECK_THROWS_AS(g.validate(), InvalidInput);
    g.edges.pop_back();
    g.edges.push_back({0, {1, 1}, {}});
    CHECK_THROWS_AS(g.validate(), InvalidInput);
}

TEST_CASE("colored triangles in complete graphs")
{
    auto H = build_cycle_template_H(3, 1);
    auto K = complete_colored(4, 3);
    // Injective maps of three labelled vertices into four.
    CHECK(enumerate_copies(H, K).size() == 24);
    CopySearchOptions opt;
    opt.distinct_edge_sets = true;
    CHECK(enumerate_copies(H, K, opt).size() == 24);

    auto mono = complete_colored(4, 1);
    ColoredHypergraph h1;
    h1.num_vertices = 3;
    h1.num_colors = 1;
    h1.add_edge(0, {0, 1});
    h1.add_edge(0, {1, 2});
    h1.add_edge(0, {0, 2});
    CHECK(enumerate_copies(h1, mono).size() == 24);
    // The six automorphisms of the triangle fix the edge set.
    CHECK(enumerate_copies(h1, mono, opt).size() == 4);
}

TEST_CASE("copies come out in lexicographic order and respect the cap")
{
    auto H = build_cycle_template_H(3, 1);
    auto K = complete_colored(5, 3);
    auto copies = enumerate_copies(H, K);
    CHECK(copies.size() == 60);
    for (std::size_t i = 1; i < copies.size(); ++i) CHECK(copies[i - 1].vertex_map < copies[i].vertex_map);
    CopySearchOptions opt;
    opt.cap = 10;
    CHECK_THROWS_AS(enumerate_copies(H, K, opt), CapExceeded);
}

TEST_CASE("missing color kills all copies")
{
    auto H = build_cycle_template_H(3, 1);
    auto K = complete_colored(4, 3);
    std::vector<std::size_t> drop = K.edges_of_color(1);
    auto K2 = remove_edges(K, drop);
    CHECK(enumerate_copies(H, K2).empty());
}

TEST_CASE("directed copies keep orientation")
{
    ColoredHypergraph H;
    H.directed = true;
    H.num_vertices = 3;
    H.num_colors = 1;
    H.add_edge(0, {0, 1});
    H.add_edge(0, {1, 2});
    ColoredHypergraph K = H;
    K.num_vertices = 4;
    K.edges.clear();
    K.add_edge(0, {0, 1});
    K.add_edge(0, {1, 2});
    K.add_edge(0, {2, 3});
    K.add_edge(0, {3, 2});
    auto copies = enumerate_copies(H, K);
    // 0-1-2 and 1-2-3; 2-3-2 repeats a vertex.
    CHECK(copies.size() == 2);
    CHECK(copies[0].vertex_map == std::vector<std::size_t>{0, 1, 2});
    CHECK(copies[1].vertex_map == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("restriction by label domains")
{
    ColoredHypergraph K;
    K.num_vertices = 3;
    K.num_colors = 2;
    K.add_edge(0, {0, 1}, Tuple{0});
    K.add_edge(0, {1, 2}, Tuple{1});
    K.add_edge(1, {0, 2}, Tuple{1});
    std::vector<std::optional<std::set<Tuple>>> dom{std::set<Tuple>{Tuple{1}}, std::nullopt};
    auto r = restrict_to_domains(K, dom);
    CHECK(r.graph.edges.size() == 2);
    CHECK(r.kept == std::vector<std::size_t>{1, 2});
}

TEST_CASE("greedy edge cover")
{
    auto H = build_cycle_template_H(3, 1);
    ColoredHypergraph empty = complete_colored(4, 3);
    empty.edges.clear();
    CHECK(greedy_edge_cover(H, empty).empty());

    ColoredHypergraph one;
    one.num_vertices = 3;
    one.num_colors = 3;
    one.add_edge(0, {0, 1});
    one.add_edge(1, {1, 2});
    one.add_edge(2, {0, 2});
    CHECK(greedy_edge_cover(H, one).size() == 1);

    auto K = complete_colored(5, 3);
    auto cover = greedy_edge_cover(H, K);
    CHECK_FALSE(cover.empty());
    CHECK(enumerate_copies(H, remove_edges(K, cover)).empty());
}
