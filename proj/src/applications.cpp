#include "hsys/applications.hpp"

namespace hsys {

FiniteAbelianGroup corner_block_group(const FiniteAbelianGroup& G, std::size_t m)
{
    std::vector<std::int64_t> orders;
    for (std::size_t j = 0; j < m; ++j) orders.insert(orders.end(), G.orders.begin(), G.orders.end());
    return FiniteAbelianGroup::product(orders);
}

HomSystem build_corner_system(const FiniteAbelianGroup& G, std::size_t m)
{
    if (m == 0) throw InvalidInput("build_corner_system: m must be positive");
    std::size_t r = G.rank(), t = m * r, vars = m + 1;
    IntMatrix a(m * t, vars * t);
    std::size_t eq = 0;
    // One G-valued equation: coefficients on (variable, coordinate) pairs.
    auto put = [&](const std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>>& terms) {
        std::size_t block = eq / m, pos = eq % m;
        for (std::size_t rho = 0; rho < r; ++rho) {
            std::size_t row = block * t + pos * r + rho;
            for (auto [var, coord, coef] : terms) a(row, var * t + coord * r + rho) = coef;
        }
        ++eq;
    };
    for (std::size_t j = 1; j <= m; ++j)
        for (std::size_t c = 0; c < m; ++c)
            if (c != j - 1) put({{j, c, 1}, {0, c, -1}});
    for (std::size_t j = 2; j <= m; ++j) put({{j, j - 1, 1}, {0, j - 1, -1}, {1, 0, -1}, {0, 0, 1}});
    return make_system(a, corner_block_group(G, m));
}

ConfigurationCensus count_corners(const FiniteAbelianGroup& G, std::size_t m, const std::set<Tuple>& S,
                                  std::uint64_t cap)
{
    ConfigurationCensus out;
    out.system = build_corner_system(G, m);
    out.subset = S;
    out.total = count_solutions(out.system);
    std::size_t r = G.rank();
    for (const auto& x : S)
        if (x.size() != m * r) throw InvalidInput("count_corners: point of the wrong length");
    std::vector<Tuple> gel;
    for_each_element(G, [&](const Tuple& g) { gel.push_back(g); }, cap);
    Tuple y;
    for (const auto& x : S) {
        for (const auto& g : gel) {
            bool all = true;
            for (std::size_t j = 0; all && j < m; ++j) {
                y = x;
                for (std::size_t rho = 0; rho < r; ++rho)
                    y[j * r + rho] = mod(y[j * r + rho] + g[rho], G.orders[rho]);
                all = S.count(y) > 0;
            }
            if (all) ++out.hits;
        }
    }
    Domains dom(m + 1, S);
    out.hits_solver = enumerate_solutions(out.system, dom, Strategy::Automatic, cap).count();
    return out;
}

std::set<Tuple> random_subset(const FiniteAbelianGroup& G, std::size_t m, double density, std::mt19937_64& rng)
{
    std::bernoulli_distribution keep(density);
    std::set<Tuple> out;
    for_each_element(corner_block_group(G, m), [&](const Tuple& x) {
        if (keep(rng)) out.insert(x);
    });
    return out;
}

HomSystem build_homothetic_system(const FiniteAbelianGroup& G, const std::vector<std::vector<Tuple>>& subgroups,
                                  const std::vector<IntMatrix>& phis)
{
    if (!G.is_canonical()) throw InvalidInput("build_homothetic_system: G must be in canonical form");
    std::size_t r = G.rank(), s = subgroups.size(), t = phis.size();
    if (t == 0) throw InvalidInput("build_homothetic_system: at least one map is needed");
    auto gs = corner_block_group(G, s);
    for (std::size_t i = 0; i < t; ++i) {
        const auto& phi = phis[i];
        if (phi.rows() != r || phi.cols() != s * r)
            throw InvalidInput("build_homothetic_system: Phi_" + std::to_string(i + 1) + " has the wrong shape");
        for (std::size_t p = 0; p < r; ++p)
            for (std::size_t q = 0; q < s * r; ++q)
                if (mod(phi(p, q) * Int(static_cast<long>(gs.orders[q])), G.orders[p]) != 0)
                    throw PreconditionError("build_homothetic_system: Phi_" + std::to_string(i + 1) +
                                            " is not a homomorphism");
    }
    for (const auto& gens : subgroups)
        for (const auto& h : gens)
            if (h.size() != r) throw InvalidInput("build_homothetic_system: generator of the wrong length");

    auto image = [&](const IntMatrix& phi, const Tuple& xs) {
        Tuple out(r, 0);
        for (std::size_t p = 0; p < r; ++p) {
            Int acc = 0;
            for (std::size_t q = 0; q < xs.size(); ++q) acc += phi(p, q) * Int(static_cast<long>(xs[q]));
            out[p] = mod(acc, G.orders[p]);
        }
        return out;
    };
    std::vector<Tuple> gens;
    // Diagonal copies of the basis of G.
    for (std::size_t rho = 0; rho < r; ++rho) {
        Tuple g(t * r, 0);
        for (std::size_t i = 0; i < t; ++i) g[i * r + rho] = 1;
        gens.push_back(g);
    }
    for (std::size_t j = 0; j < s; ++j)
        for (const auto& h : subgroups[j]) {
            Tuple xs(s * r, 0);
            for (std::size_t rho = 0; rho < r; ++rho) xs[j * r + rho] = mod(h[rho], G.orders[rho]);
            Tuple g;
            for (const auto& phi : phis) {
                auto v = image(phi, xs);
                g.insert(g.end(), v.begin(), v.end());
            }
            gens.push_back(g);
        }
    return subgroup_to_system(gens, Tuple(t * r, 0), G, t);
}

DiagonalReport check_diagonal(const HomSystem& sys, std::uint64_t cap)
{
    DiagonalReport rep;
    std::size_t t = sys.block, m = sys.m();
    auto sol = enumerate_solutions(sys, {}, Strategy::Automatic, cap);
    std::set<Tuple> all(sol.solutions.begin(), sol.solutions.end());
    rep.diagonal_inside = true;
    std::set<Tuple> diag_values;
    for_each_element(sys.group, [&](const Tuple& g) {
        Tuple x;
        for (std::size_t i = 0; i < m; ++i) x.insert(x.end(), g.begin(), g.end());
        if (!all.count(x)) rep.diagonal_inside = false;
        diag_values.insert(g);
    }, cap);
    rep.full_projections = true;
    for (std::size_t i = 0; i < m; ++i) {
        auto proj = project_solutions(sol, i);
        if (std::set<Tuple>(proj.begin(), proj.end()) != diag_values) rep.full_projections = false;
    }
    if (static_cast<double>(sol.count()) * static_cast<double>(sol.count()) > static_cast<double>(cap))
        throw CapExceeded("check_diagonal: closure check exceeds the cap");
    rep.closed = true;
    Tuple z;
    for (std::size_t a = 0; rep.closed && a < sol.count(); ++a)
        for (const auto& y : sol.solutions) {
            z.resize(y.size());
            for (std::size_t c = 0; c < y.size(); ++c) z[c] = mod(sol.solutions[a][c] + y[c], sys.group.orders[c % t]);
            if (!all.count(z)) {
                rep.closed = false;
                break;
            }
        }
    return rep;
}

} // namespace hsys
