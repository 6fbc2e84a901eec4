#include "doctest.h"

#include <random>

#include "hsys/system.hpp"
#include "oracles.hpp"

using namespace hsys;

namespace {

FiniteAbelianGroup grp(std::vector<std::int64_t> o)
{
    return FiniteAbelianGroup::product(std::move(o));
}

HomSystem random_block_system(std::mt19937_64& rng, const FiniteAbelianGroup& g, std::size_t k, std::size_t m,
                              bool with_rhs)
{
    std::size_t t = g.rank();
    IntMatrix a(k * t, m * t);
    for (std::size_t i = 0; i < k * t; ++i)
        for (std::size_t j = 0; j < m * t; ++j) {
            std::int64_t np = g.orders[i % t], nq = g.orders[j % t];
            // smallest multiplier making the entry a valid homomorphism
            std::int64_t unit = np / gcd64(np, nq);
            a(i, j) = static_cast<long>(unit * static_cast<std::int64_t>(rng() % 4));
        }
    Tuple b(k * t, 0);
    if (with_rhs)
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<std::int64_t>(rng() % g.orders[i % t]);
    return make_system(a, g, b);
}

} // namespace

TEST_CASE("enumerate_solutions examples")
{
    auto z6 = FiniteAbelianGroup::cyclic(6);
    auto s = scalar_system(IntMatrix::from_rows({{1, 2, 2}}), z6);
    CHECK(enumerate_solutions(s).count() == 36);
    CHECK(count_solutions(s) == 36);

    auto s2 = scalar_system(IntMatrix::from_rows({{1, 1}}), FiniteAbelianGroup::cyclic(2));
    Domains d{std::set<Tuple>{{0}}, std::set<Tuple>{{1}}};
    CHECK(enumerate_solutions(s2, d).count() == 0);
    CHECK(enumerate_solutions(s2, d, Strategy::FullScan).count() == 0);
    CHECK(enumerate_solutions(s2, d, Strategy::Lattice).count() == 0);
}

TEST_CASE("from_blocks shear system")
{
    auto g = FiniteAbelianGroup::homocyclic(2, 2);
    for (std::int64_t b0 = 0; b0 < 2; ++b0)
        for (std::int64_t b1 = 0; b1 < 2; ++b1) {
            auto s = from_blocks({{IntMatrix::from_rows({{1, 0}, {1, 1}})}}, g, {b0, b1});
            auto sol = enumerate_solutions(s);
            REQUIRE(sol.count() == 1);
            CHECK(sol.solutions[0] == Tuple{b0, (b1 - b0 + 2) % 2});
        }
    auto z6 = FiniteAbelianGroup::cyclic(6);
    auto twice = from_blocks({{IntMatrix::from_rows({{2}})}}, z6, {4});
    CHECK(enumerate_solutions(twice).solutions == std::vector<Tuple>{{2}, {5}});
    CHECK_THROWS_AS(from_blocks({{IntMatrix::identity(2)}}, z6), InvalidInput);
}

TEST_CASE("validate rejects non-homomorphic entries")
{
    // 1 : Z_2 -> Z_4 is not a homomorphism
    auto g = grp({4, 2});
    IntMatrix a(2, 2);
    a(0, 1) = 1;
    CHECK_THROWS_AS(make_system(a, g), InvalidInput);
    a(0, 1) = 2;
    CHECK_NOTHROW(make_system(a, g));
}

TEST_CASE("projections")
{
    auto z6 = FiniteAbelianGroup::cyclic(6);
    auto s = scalar_system(IntMatrix::from_rows({{1, 2, 2}}), z6);
    auto sol = enumerate_solutions(s);
    CHECK(project_solutions(sol, 0) == std::vector<Tuple>{{0}, {2}, {4}});
    CHECK(projection_size(s, 0) == 3);
    auto s5 = scalar_system(IntMatrix::from_rows({{1, 1}}), FiniteAbelianGroup::cyclic(5));
    CHECK(project_solutions(enumerate_solutions(s5), 0).size() == 5);
    auto s23 = scalar_system(IntMatrix::from_rows({{2, 3}}), z6);
    CHECK(project_solutions(enumerate_solutions(s23), 1) == std::vector<Tuple>{{0}, {2}, {4}});
    CHECK(projection_size(s23, 1) == 3);
}

TEST_CASE("strategies agree with each other and with brute force")
{
    std::mt19937_64 rng(17);
    std::vector<FiniteAbelianGroup> groups{grp({2}), grp({3}), grp({4}), grp({6}), grp({2, 2}), grp({4, 2}), grp({6, 3})};
    for (int it = 0; it < 300; ++it) {
        const auto& g = groups[rng() % groups.size()];
        std::size_t k = 1 + rng() % 2, m = 1 + rng() % 3;
        if (g.order() > 16 && m > 2) m = 2;
        auto s = random_block_system(rng, g, k, m, rng() % 2);
        auto full = enumerate_solutions(s, {}, Strategy::FullScan);
        auto lat = enumerate_solutions(s, {}, Strategy::Lattice);
        CHECK(full.solutions == lat.solutions);
        CHECK(count_solutions(s) == full.count());
        for (auto& x : full.solutions) CHECK(satisfies(s, x));
        auto least = least_solution(s);
        CHECK(least.has_value() == (full.count() > 0));
        if (least) CHECK(*least == full.solutions.front());
        // independent brute force for cyclic groups
        if (g.rank() == 1) {
            oracle::Mat a(s.matrix.rows(), std::vector<long>(s.matrix.cols()));
            for (std::size_t i = 0; i < a.size(); ++i)
                for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] = s.matrix(i, j).get_si();
            CHECK(oracle::brute_solutions(a, s.rhs, g.orders[0]) == full.solutions);
        }
        // parametric form
        std::size_t t = g.rank();
        auto b = IntMatrix(k * t, m * t);
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) = s.matrix(i, j);
        HomSystem p{hstack(IntMatrix::identity(k * t), b), t, g, s.rhs};
        validate(p);
        auto pp = enumerate_solutions(p, {}, Strategy::Parametric);
        CHECK(pp.solutions == enumerate_solutions(p, {}, Strategy::FullScan).solutions);
        CHECK(pp.solutions == enumerate_solutions(p, {}, Strategy::Lattice).solutions);
        CHECK(count_solutions(p) == pp.count());
    }
}

TEST_CASE("homogeneous solution sets are subgroups and inhomogeneous ones are cosets")
{
    std::mt19937_64 rng(23);
    std::vector<FiniteAbelianGroup> groups{grp({4}), grp({6}), grp({2, 2}), grp({4, 2})};
    for (int it = 0; it < 60; ++it) {
        const auto& g = groups[rng() % groups.size()];
        auto s = random_block_system(rng, g, 1 + rng() % 2, 2, false);
        auto sol = enumerate_solutions(s);
        std::set<Tuple> set(sol.solutions.begin(), sol.solutions.end());
        std::size_t t = g.rank();
        for (auto& x : sol.solutions)
            for (auto& y : sol.solutions) {
                Tuple z(x.size()), w(x.size());
                for (std::size_t j = 0; j < x.size(); ++j) {
                    z[j] = mod(x[j] + y[j], g.orders[j % t]);
                    w[j] = mod(-x[j], g.orders[j % t]);
                }
                CHECK(set.count(z) == 1);
                CHECK(set.count(w) == 1);
            }
        // every rhs gives 0 or |S_0| solutions
        std::vector<std::int64_t> radix;
        for (std::size_t i = 0; i < s.rhs.size(); ++i) radix.push_back(g.orders[i % t]);
        for (Odometer od(radix); !od.done(); od.next()) {
            HomSystem sb = s;
            sb.rhs = od.value();
            auto c = enumerate_solutions(sb).count();
            CHECK((c == 0 || c == sol.count()));
        }
    }
}

TEST_CASE("subgroup_to_system")
{
    auto z2 = FiniteAbelianGroup::cyclic(2);
    auto s = subgroup_to_system({{1, 1}}, {}, z2, 2);
    CHECK(enumerate_solutions(s).solutions == std::vector<Tuple>{{0, 0}, {1, 1}});
    auto whole = subgroup_to_system({{1, 0}, {0, 1}}, {}, z2, 2);
    CHECK(whole.matrix.is_zero());
    CHECK(enumerate_solutions(whole).count() == 4);
    auto z4 = FiniteAbelianGroup::cyclic(4);
    auto c = subgroup_to_system({{1, 2}}, {0, 1}, z4, 2);
    CHECK(enumerate_solutions(c).solutions == std::vector<Tuple>{{0, 1}, {1, 3}, {2, 1}, {3, 3}});
    CHECK_THROWS_AS(subgroup_to_system({{1}}, {}, grp({2, 4}), 1), PreconditionError);

    std::mt19937_64 rng(29);
    std::vector<FiniteAbelianGroup> groups{grp({6}), grp({4, 2}), grp({2, 2}), grp({6, 2})};
    for (int it = 0; it < 80; ++it) {
        const auto& g = groups[rng() % groups.size()];
        std::size_t m = 1 + rng() % 2, t = g.rank();
        std::vector<Tuple> gens(rng() % 3);
        for (auto& v : gens) {
            v.resize(m * t);
            for (std::size_t j = 0; j < v.size(); ++j) v[j] = static_cast<std::int64_t>(rng() % g.orders[j % t]);
        }
        Tuple shift(m * t);
        for (std::size_t j = 0; j < shift.size(); ++j) shift[j] = static_cast<std::int64_t>(rng() % g.orders[j % t]);
        auto sys = subgroup_to_system(gens, shift, g, m);
        std::set<Tuple> expect;
        for (auto& h : span(gens, g, m)) {
            Tuple y(h.size());
            for (std::size_t j = 0; j < y.size(); ++j) y[j] = mod(h[j] + shift[j], g.orders[j % t]);
            expect.insert(y);
        }
        auto sol = enumerate_solutions(sys);
        CHECK(std::set<Tuple>(sol.solutions.begin(), sol.solutions.end()) == expect);
    }
}

TEST_CASE("pad_variables")
{
    auto z2 = FiniteAbelianGroup::cyclic(2);
    auto s = scalar_system(IntMatrix::from_rows({{1, 1}}), z2);
    auto p = pad_variables(s);
    CHECK(p.matrix == IntMatrix::from_rows({{1, 1, 2, 2}}));
    CHECK(enumerate_solutions(s).count() == 2);
    CHECK(enumerate_solutions(p).count() == 8);
    auto z4 = FiniteAbelianGroup::cyclic(4);
    auto q = pad_variables(scalar_system(IntMatrix::from_rows({{2}}), z4));
    CHECK(q.matrix == IntMatrix::from_rows({{2, 4, 4}}));
    CHECK(enumerate_solutions(q).count() == 32);
    auto zero = pad_variables(scalar_system(IntMatrix(1, 2), z2));
    CHECK(enumerate_solutions(zero).count() == 16);
    auto g = grp({4, 2});
    std::mt19937_64 rng(31);
    for (int it = 0; it < 10; ++it) {
        auto r = random_block_system(rng, g, 1, 1, true);
        CHECK(count_solutions(pad_variables(r)) == count_solutions(r) * 64);
        CHECK(enumerate_solutions(pad_variables(r)).count() == enumerate_solutions(r).count() * 64);
    }
}

TEST_CASE("extension_count_check")
{
    auto rep = extension_count_check(scalar_system(IntMatrix::from_rows({{1, 1, 1}}), FiniteAbelianGroup::cyclic(5)));
    CHECK(rep.holds);
    CHECK(rep.expected == 5);
    auto r2 = extension_count_check(scalar_system(IntMatrix::from_rows({{1, 1}}), FiniteAbelianGroup::cyclic(3)));
    CHECK(r2.holds);
    CHECK(r2.expected == 1);
    auto r3 = extension_count_check(scalar_system(IntMatrix::from_rows({{1, 2, 1}}), FiniteAbelianGroup::cyclic(4)));
    CHECK(r3.holds);
    CHECK(r3.expected == 4);
    CHECK_THROWS_AS(extension_count_check(scalar_system(IntMatrix::from_rows({{1, 2, 2}}), FiniteAbelianGroup::cyclic(4))),
                    PreconditionError);
}
