#include "doctest.h"

#include <random>

#include "hsys/pipeline.hpp"
#include "oracles.hpp"

using namespace hsys;

namespace {

const TraceStage* find_stage(const PipelineTrace& tr, const std::string& label)
{
    for (const auto& s : tr.stages)
        if (s.label == label) return &s;
    return nullptr;
}

} // namespace

TEST_CASE("dehomogenize")
{
    auto z2 = FiniteAbelianGroup::cyclic(2);
    auto r = dehomogenize(scalar_system(IntMatrix::from_rows({{1, 1}}), z2, {1}));
    REQUIRE(r.has_solution);
    CHECK(r.particular == Tuple{0, 1});
    CHECK(r.stage->system.homogeneous());

    auto h = dehomogenize(scalar_system(IntMatrix::from_rows({{1, 1}}), z2));
    CHECK(h.particular == Tuple{0, 0});

    auto none = dehomogenize(scalar_system(IntMatrix::from_rows({{2}}), FiniteAbelianGroup::cyclic(4), {1}));
    CHECK_FALSE(none.has_solution);
    auto tr = run_full_pipeline(scalar_system(IntMatrix::from_rows({{2, 2}}), FiniteAbelianGroup::cyclic(4), {1}));
    CHECK(tr.no_solution);
}

TEST_CASE("lift to the homocyclic cover")
{
    auto z6 = FiniteAbelianGroup::cyclic(6);
    auto s = scalar_system(IntMatrix::from_rows({{1, 2, 3}}), z6);
    auto l = lift_to_homocyclic(s);
    CHECK(l.map.mu == 1);
    CHECK(l.system.matrix == s.matrix);

    auto g = FiniteAbelianGroup::product({4, 2});
    auto s2 = scalar_system(IntMatrix::from_rows({{1, 1, 1}}), g);
    auto l2 = lift_to_homocyclic(s2);
    CHECK(l2.map.mu == 8);
    CHECK(verify_equivalence(l2.map, s2, l2.system).ok());
    // |G| / |S_i| is preserved.
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(g.order() * projection_size(l2.system, i) == l2.system.group.order() * projection_size(s2, i));
}

TEST_CASE("simulation stage on (2 2 2) over Z4")
{
    auto s = scalar_system(IntMatrix::from_rows({{2, 2, 2}}), FiniteAbelianGroup::cyclic(4));
    auto rr = row_reduce_stage(s);
    auto sim = simulate_independent_vectors(rr.stage.system, rr.divisors);
    CHECK(sim.system.matrix == IntMatrix::from_rows({{1, 1, 1, 2}}));
    CHECK(sim.map.mu == 2);
    CHECK(count_solutions(s) == 32);
    CHECK(count_solutions(sim.system) == 64);
    CHECK(oracle::brute_solutions({{2, 2, 2}}, {0}, 4).size() == 32);
    CHECK(oracle::brute_solutions({{1, 1, 1, 2}}, {0}, 4).size() == 64);
    CHECK(verify_equivalence(sim.map, rr.stage.system, sim.system).ok());
}

TEST_CASE("simulation with coprime content gives zero columns mod n")
{
    auto s = scalar_system(IntMatrix::from_rows({{1, 1, 1}}), FiniteAbelianGroup::cyclic(5));
    auto rr = row_reduce_stage(s);
    auto sim = simulate_independent_vectors(rr.stage.system, rr.divisors);
    CHECK(sim.map.mu == 5);
    CHECK(mod(sim.system.matrix(0, 3), 5) == 0);
    CHECK(verify_equivalence(sim.map, rr.stage.system, sim.system).ok());
}

TEST_CASE("determinantal to identity")
{
    auto z4 = FiniteAbelianGroup::cyclic(4);
    auto a3 = scalar_system(IntMatrix::from_rows({{1, 1, 1, 2}}), z4);
    auto st = determinantal_to_identity(a3, 3);
    CHECK(st.system.is_parametric());
    CHECK(st.system.k() == 3);
    CHECK(st.system.m() == 6);
    CHECK(count_solutions(st.system) == count_solutions(a3));
    CHECK(verify_equivalence(st.map, a3, st.system).ok());
}

TEST_CASE("block row reduce")
{
    auto z6 = FiniteAbelianGroup::homocyclic(6, 2);
    // (I_2 | B) with B = [[2, 4], [3, 5]] over Z6^2 viewed as one block row.
    auto a5 = make_system(IntMatrix::from_rows({{1, 0, 2, 4}, {0, 1, 3, 5}}), z6);
    auto br = block_row_reduce(a5);
    auto b1 = br.stage.system.matrix;
    REQUIRE(br.divisors.size() == 1);
    CHECK(br.divisors[0][0] == 1);
    CHECK(br.divisors[0][1] == 2);
    for (std::size_t r = 0; r < 2; ++r) {
        Int g = 0;
        for (std::size_t c = 2; c < 4; ++c) g = gcd(g, b1(r, c));
        CHECK(g == br.divisors[0][r]);
    }
    CHECK(count_solutions(br.stage.system) == count_solutions(a5));
    CHECK(verify_equivalence(br.stage.map, a5, br.stage.system).ok());

    // Zero block over Z4 is repaired with multiples of n.
    auto z4 = FiniteAbelianGroup::homocyclic(4, 2);
    auto zero = make_system(IntMatrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}}), z4);
    auto bz = block_row_reduce(zero);
    CHECK(bz.divisors[0][0] == 4);
    CHECK(bz.divisors[0][1] == 4);
    CHECK(verify_equivalence(bz.stage.map, zero, bz.stage.system).ok());
}

TEST_CASE("split with one nontrivial group")
{
    // (I_1 | 2) over Z4 with t = 1: G_(1,1) = {0, 2}.
    auto a = make_system(IntMatrix::from_rows({{1, 2, 0}}), FiniteAbelianGroup::cyclic(4));
    auto br = block_row_reduce(a);
    CHECK(br.divisors[0][0] == 2);
    auto parts = split_to_J_systems(br.stage.system, br);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].order == 4);
    CHECK(parts[1].order == 2);
    for (auto& p : parts) {
        CHECK(p.J.k() == 2);
        CHECK(p.J.m() == 5);
        CHECK(p.J.is_parametric());
        auto rep = verify_equivalence(p.f, restrict_to_subgroup(br.stage.system, p.order), p.J);
        CHECK(rep.ok());
        CHECK(rep.mu_declared == p.order);
    }
}

TEST_CASE("circularize")
{
    auto z5 = FiniteAbelianGroup::cyclic(5);
    auto j = make_system(IntMatrix::from_rows({{1, 1, 1}}), z5);
    auto c = circularize(j, 5);
    CHECK(c.system.matrix.rows() == 5 * 2);
    CHECK(c.system.matrix.cols() == 6 * 2);
    CHECK(is_block_n_circular(c.system.matrix, 1, 5));
    CHECK(count_solutions(c.system) == count_solutions(j));
    CHECK(verify_equivalence(c.map, j, c.system).ok());

    auto id = make_system(IntMatrix::from_rows({{1, 0, 1}, {0, 1, 1}}), z5);
    auto c2 = circularize(id, 5);
    CHECK(is_block_n_circular(c2.system.matrix, 1, 5));
    CHECK(verify_equivalence(c2.map, id, c2.system).ok());
}

TEST_CASE("full pipeline on x1 + x2 + x3 = 0 over Z5")
{
    PipelineOptions opt;
    opt.constancy = true;
    auto tr = run_full_pipeline(scalar_system(IntMatrix::from_rows({{1, 1, 1}}), FiniteAbelianGroup::cyclic(5)), opt);
    CHECK(tr.certified());
    CHECK(tr.exhaustive());
    CHECK(tr.final_is_circular);
    const auto& fin = tr.stages.back().system;
    CHECK(count_solutions(fin) == tr.total_mu * 25);
    // S_i(A7) = G^t for every block variable.
    for (std::size_t i : {std::size_t{0}, fin.m() / 2, fin.m() - 1}) CHECK(projection_size(fin, i) == fin.group.order());
    // Composite map certifies onto the input.
    auto comp = composite_map(tr);
    CHECK(comp.mu == tr.total_mu);
    CHECK(verify_equivalence(comp, tr.stages.front().system, fin).ok());
}

TEST_CASE("full pipeline on (2 2 2) over Z4")
{
    auto tr = run_full_pipeline(scalar_system(IntMatrix::from_rows({{2, 2, 2}}), FiniteAbelianGroup::cyclic(4)));
    CHECK(tr.certified());
    auto sim = find_stage(tr, "simulate");
    REQUIRE(sim);
    CHECK(sim->map->mu == 2);
    CHECK(sim->report->source_count == 64);
    CHECK(sim->report->target_count == 32);
}

TEST_CASE("full pipeline pads short systems")
{
    auto tr = run_full_pipeline(scalar_system(IntMatrix::from_rows({{1, 1}}), FiniteAbelianGroup::cyclic(3)));
    auto pad = find_stage(tr, "pad");
    REQUIRE(pad);
    CHECK(pad->system.matrix == IntMatrix::from_rows({{1, 1, 3, 3}}));
    CHECK(pad->map->mu == 9);
    CHECK(tr.certified());
}

TEST_CASE("full pipeline with redundant rows, repair and nonzero rhs")
{
    auto z2 = FiniteAbelianGroup::cyclic(2);
    auto tr = run_full_pipeline(scalar_system(IntMatrix::from_rows({{1, 1}, {1, 1}, {0, 0}}), z2, {1, 1, 0}));
    CHECK(find_stage(tr, "remove-redundant"));
    CHECK(tr.certified());

    auto tr2 = run_full_pipeline(scalar_system(IntMatrix::from_rows({{0, 2, 0, 0}}), FiniteAbelianGroup::cyclic(4)));
    CHECK(find_stage(tr2, "repair"));
    CHECK(tr2.certified());
}

TEST_CASE("full pipeline over a non-cyclic group")
{
    auto g = FiniteAbelianGroup::product({2, 2});
    auto tr = run_full_pipeline(scalar_system(IntMatrix::from_rows({{1, 1, 1}}), g));
    CHECK(tr.certified());
    CHECK(tr.stages.back().system.block == 2 * tr.upsilon.size());
}

TEST_CASE("pipeline property on random small systems")
{
    std::mt19937_64 rng(11);
    std::vector<FiniteAbelianGroup> gs{FiniteAbelianGroup::cyclic(2), FiniteAbelianGroup::cyclic(3),
                                       FiniteAbelianGroup::cyclic(4)};
    for (int it = 0; it < 6; ++it) {
        auto g = gs[rng() % gs.size()];
        std::size_t k = 1 + rng() % 2, m = 3;
        std::vector<std::vector<long>> rows(k, std::vector<long>(m));
        for (auto& r : rows)
            for (auto& v : r) v = static_cast<long>(rng() % 4);
        auto tr = run_full_pipeline(scalar_system(IntMatrix::from_rows(rows), g));
        CHECK(tr.certified());
        Int prod = 1;
        for (const auto& s : tr.stages)
            if (s.map) prod *= s.map->mu;
        CHECK(prod == tr.total_mu);
        CHECK(count_solutions(tr.stages.back().system) == tr.total_mu * count_solutions(tr.stages.front().system));
    }
}

TEST_CASE("partition by the independent vector")
{
    auto z4 = FiniteAbelianGroup::cyclic(4);
    auto rep = check_partition(IntMatrix::from_rows({{2, 2, 2}}), z4);
    CHECK(rep.holds);
    CHECK(rep.pieces == 2);
    CHECK(rep.solutions == 32);
    CHECK(rep.total == 32);

    auto rep2 = check_partition(IntMatrix::from_rows({{1, 3}, {2, 2}}), FiniteAbelianGroup::product({4, 2}));
    CHECK(rep2.holds);
    CHECK(rep2.disjoint);

    auto rep3 = check_partition(IntMatrix::from_rows({{0, 0}, {2, 0}}), FiniteAbelianGroup::cyclic(6));
    CHECK(rep3.holds);
}
