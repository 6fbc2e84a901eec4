#include "doctest.h"

#include <map>

#include "hsys/equivalence.hpp"
#include "hsys/lattice.hpp"
#include "oracles.hpp"

using namespace hsys;

TEST_CASE("identity map certifies with mu 1")
{
    auto s = scalar_system(IntMatrix::from_rows({{1, 2, 3}}), FiniteAbelianGroup::cyclic(6));
    VerifyOptions opt;
    opt.constancy = true;
    auto rep = verify_equivalence(identity_map(3, 1), s, s, opt);
    CHECK(rep.ok());
    CHECK(rep.exhaustive);
    CHECK(rep.fiber_histogram.size() == 1);
    CHECK(rep.fiber_histogram.begin()->first == 1);
    CHECK(rep.constancy == std::vector<bool>{true, true, true});
}

TEST_CASE("projection dropping a variable")
{
    // x1 + x2 + 2y = 0 over Z4 onto x1 + x2 = 0 (mod 2) read over Z4: 2x1 + 2x2 = 0.
    auto g = FiniteAbelianGroup::cyclic(4);
    auto big = scalar_system(IntMatrix::from_rows({{1, 1, 2}}), g);
    auto small = scalar_system(IntMatrix::from_rows({{2, 2}}), g);
    auto map = projection_map({0, 1}, 1, 2);
    auto rep = verify_equivalence(map, small, big);
    CHECK(rep.ok());

    // Independent fiber count by brute force.
    auto sols = oracle::brute_solutions({{1, 1, 2}}, {0}, 4);
    std::map<std::pair<std::int64_t, std::int64_t>, int> fib;
    for (auto& x : sols) ++fib[{x[0], x[1]}];
    CHECK(fib.size() == oracle::brute_solutions({{2, 2}}, {0}, 4).size());
    for (auto& [k, c] : fib) CHECK(c == 2);
}

TEST_CASE("wrong sigma is reported as a failure")
{
    auto g = FiniteAbelianGroup::cyclic(5);
    auto s1 = scalar_system(IntMatrix::from_rows({{1, 0}}), g);
    auto s2 = scalar_system(IntMatrix::from_rows({{1, 0}}), g);
    auto map = projection_map({1, 1}, 1, 1);
    auto rep = verify_equivalence(map, s1, s2);
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.lands_in);
    CHECK_FALSE(rep.failure.empty());

    auto bad_mu = projection_map({0, 1}, 1, 2);
    auto rep2 = verify_equivalence(bad_mu, s1, s2);
    CHECK_FALSE(rep2.ok());
    CHECK_FALSE(rep2.uniform);
    CHECK_FALSE(rep2.counts_match);
}

TEST_CASE("shift map of a coset")
{
    auto g = FiniteAbelianGroup::cyclic(2);
    auto inhom = scalar_system(IntMatrix::from_rows({{1, 1}}), g, {1});
    auto hom = scalar_system(IntMatrix::from_rows({{1, 1}}), g);
    auto map = identity_map(2, 1);
    map.affines[0].shift = {1};
    CHECK(verify_equivalence(map, inhom, hom).ok());
    CHECK_FALSE(verify_equivalence(identity_map(2, 1), inhom, hom).ok());
}

TEST_CASE("quotient map Z4 x Z2 <- Z4^2 is beta-to-one per coordinate")
{
    auto g = FiniteAbelianGroup::product({4, 2});
    auto lifted = FiniteAbelianGroup::homocyclic(4, 2);
    auto s = make_system(IntMatrix(2, 4), g);
    auto sl = make_system(IntMatrix(2, 4), lifted);
    auto map = identity_map(2, 2, MapKind::MuEquiv1);
    map.mu = 4;
    VerifyOptions opt;
    opt.constancy = true;
    auto rep = verify_equivalence(map, s, sl, opt);
    CHECK(rep.ok());
    CHECK(rep.constancy == std::vector<bool>{true, true});
}

TEST_CASE("constancy fails for a map whose fibers are not products")
{
    // S2 = {(a, b, c) in Z2^3 : a = b + c} mapped onto S1 = Z2^2 by (a, b, c) -> (a, b),
    // 1-to-1; a second map (a, b, c) -> (a, a) is not onto.
    auto g = FiniteAbelianGroup::cyclic(2);
    auto s2 = scalar_system(IntMatrix::from_rows({{1, 1, 1}}), g);
    auto s1 = scalar_system(IntMatrix(1, 2), g);
    CHECK(verify_equivalence(projection_map({0, 1}, 1, 1), s1, s2).ok());
    auto rep = verify_equivalence(projection_map({0, 0}, 1, 1), s1, s2);
    CHECK_FALSE(rep.surjective);
}

TEST_CASE("sampled certification above the cap")
{
    auto g = FiniteAbelianGroup::cyclic(7);
    auto s = scalar_system(IntMatrix::from_rows({{1, 1, 1, 1, 1, 1, 1, 1}}), g);
    VerifyOptions opt;
    opt.cap = 1000;
    opt.probes = 200;
    auto rep = verify_equivalence(identity_map(8, 1), s, s, opt);
    CHECK_FALSE(rep.exhaustive);
    CHECK(rep.probes == 200);
    CHECK(rep.ok());
}

TEST_CASE("compose and kernel sizes")
{
    auto a = projection_map({0, 2}, 1, 3);
    auto b = identity_map(3, 1);
    b.affines[2].linear(0, 0) = 2;
    auto c = compose(a, b);
    CHECK(c.sigma == std::vector<std::size_t>{0, 2});
    CHECK(c.affines[1].linear(0, 0) == 2);
    CHECK(c.mu == 3);
    CHECK(hom_kernel_size(IntMatrix::from_rows({{2}}), {4}, {4}) == 2);
    CHECK(hom_kernel_size(IntMatrix::from_rows({{1, 1}}), {4, 2}, {2}) == 4);
    CHECK(hom_kernel_size(IntMatrix::from_rows({{3}}), {6}, {2}) == 3);
    CHECK(to_string(MapKind::MuEquiv2) == "mu-equiv-2");
    CHECK(map_kind_from_string("join") == MapKind::Join);
}
