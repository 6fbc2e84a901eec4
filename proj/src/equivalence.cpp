#include "hsys/equivalence.hpp"

#include <unordered_map>

#include "hsys/lattice.hpp"

namespace hsys {

namespace {

const std::pair<MapKind, const char*> kKindNames[] = {
    {MapKind::OneAuto, "1-auto"},   {MapKind::MuAuto, "mu-auto"},  {MapKind::MuEquiv1, "mu-equiv-1"},
    {MapKind::MuEquiv2, "mu-equiv-2"}, {MapKind::RowReduce, "equivalent-rowreduce"},
    {MapKind::Split, "split"},      {MapKind::Join, "join"},
};

// Affine coordinate maps in machine words, reduced per target row.
struct CompiledMap {
    std::vector<std::size_t> sigma;
    std::size_t t1, t2;
    std::vector<std::vector<std::int64_t>> lin; // per coordinate, t1 x t2 row-major
    std::vector<Tuple> shift;
    std::vector<std::int64_t> mod1;

    CompiledMap(const EquivalenceMap& map, const FiniteAbelianGroup& target, std::size_t source_block)
        : sigma(map.sigma), t1(target.rank()), t2(source_block), mod1(target.orders)
    {
        if (map.affines.size() != map.sigma.size()) throw InvalidInput("map: sigma and affines differ in length");
        for (const auto& f : map.affines) {
            if (f.linear.rows() != t1 || f.linear.cols() != t2) throw InvalidInput("map: affine shape mismatch");
            std::vector<std::int64_t> l(t1 * t2);
            for (std::size_t p = 0; p < t1; ++p)
                for (std::size_t q = 0; q < t2; ++q) l[p * t2 + q] = mod(f.linear(p, q), mod1[p]);
            lin.push_back(std::move(l));
            Tuple s(t1, 0);
            for (std::size_t p = 0; p < t1 && p < f.shift.size(); ++p) s[p] = mod(f.shift[p], mod1[p]);
            shift.push_back(std::move(s));
        }
    }

    void apply(const Tuple& y, Tuple& x) const
    {
        x.assign(sigma.size() * t1, 0);
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            const std::int64_t* v = y.data() + sigma[i] * t2;
            for (std::size_t p = 0; p < t1; ++p) {
                __int128 s = shift[i][p];
                const std::int64_t* row = lin[i].data() + p * t2;
                for (std::size_t q = 0; q < t2; ++q)
                    if (row[q] && v[q]) s += static_cast<__int128>(row[q]) * v[q];
                x[i * t1 + p] = static_cast<std::int64_t>(s % mod1[p]);
            }
        }
    }
};

} // namespace

std::string to_string(MapKind kind)
{
    for (auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

MapKind map_kind_from_string(const std::string& s)
{
    for (auto& [k, name] : kKindNames)
        if (s == name) return k;
    throw InvalidInput("unknown map kind: " + s);
}

EquivalenceMap identity_map(std::size_t m, std::size_t t, MapKind kind)
{
    std::vector<std::size_t> sigma(m);
    for (std::size_t i = 0; i < m; ++i) sigma[i] = i;
    return projection_map(sigma, t, 1, kind);
}

EquivalenceMap projection_map(const std::vector<std::size_t>& sigma, std::size_t t, const Int& mu, MapKind kind)
{
    EquivalenceMap e;
    e.sigma = sigma;
    e.affines.assign(sigma.size(), AffineMap{IntMatrix::identity(t), Tuple(t, 0)});
    e.mu = mu;
    e.kind = kind;
    return e;
}

EquivalenceMap compose(const EquivalenceMap& outer, const EquivalenceMap& inner)
{
    EquivalenceMap e;
    e.mu = outer.mu * inner.mu;
    e.kind = outer.kind == inner.kind ? outer.kind : MapKind::MuEquiv2;
    for (std::size_t i = 0; i < outer.sigma.size(); ++i) {
        std::size_t j = outer.sigma[i];
        if (j >= inner.sigma.size()) throw InvalidInput("compose: sigma out of range");
        const auto& f = outer.affines[i];
        const auto& g = inner.affines[j];
        AffineMap h{f.linear * g.linear, f.shift};
        for (std::size_t p = 0; p < h.shift.size(); ++p) {
            Int s = h.shift[p];
            for (std::size_t q = 0; q < g.shift.size(); ++q) s += f.linear(p, q) * static_cast<long>(g.shift[q]);
            if (!s.fits_slong_p()) throw InvalidInput("compose: shift does not fit a machine word");
            h.shift[p] = s.get_si();
        }
        e.sigma.push_back(inner.sigma[j]);
        e.affines.push_back(std::move(h));
    }
    return e;
}

Tuple apply_coordinate(const AffineMap& f, const FiniteAbelianGroup& target, const Tuple& v)
{
    Tuple x(f.linear.rows());
    for (std::size_t p = 0; p < x.size(); ++p) {
        Int s = p < f.shift.size() ? Int(static_cast<long>(f.shift[p])) : Int(0);
        for (std::size_t q = 0; q < f.linear.cols(); ++q) s += f.linear(p, q) * static_cast<long>(v[q]);
        x[p] = mod(s, target.orders[p]);
    }
    return x;
}

Tuple apply_map(const EquivalenceMap& map, const FiniteAbelianGroup& target, const Tuple& y)
{
    std::size_t t2 = map.affines.empty() ? 1 : map.affines[0].linear.cols();
    Tuple x;
    CompiledMap(map, target, t2).apply(y, x);
    return x;
}

bool EquivalenceReport::ok() const
{
    if (!lands_in || !counts_match) return false;
    if (!exhaustive) return true;
    if (!surjective || !uniform) return false;
    for (bool c : constancy)
        if (!c) return false;
    return true;
}

EquivalenceReport verify_equivalence(const EquivalenceMap& map, const HomSystem& sys1, const HomSystem& sys2,
                                     const VerifyOptions& opt)
{
    EquivalenceReport rep;
    rep.mu_declared = map.mu;
    if (map.sigma.size() != sys1.m()) {
        rep.failure = "sigma length differs from the target variable count";
        return rep;
    }
    for (auto s : map.sigma)
        if (s >= sys2.m()) {
            rep.failure = "sigma points outside the source system";
            return rep;
        }
    CompiledMap cm(map, sys1.group, sys2.block);
    SparseSystem target(sys1);
    rep.source_count = count_solutions(sys2);
    rep.target_count = count_solutions(sys1);
    rep.counts_match = rep.source_count == map.mu * rep.target_count;
    if (rep.target_count != 0) rep.mu_observed = rep.source_count / rep.target_count;

    if (rep.source_count > Int(static_cast<unsigned long>(opt.cap))) {
        std::mt19937_64 rng(opt.seed);
        SparseSystem source(sys2);
        rep.lands_in = true;
        Tuple x;
        for (std::uint64_t i = 0; i < opt.probes; ++i) {
            Tuple y = random_solution(source, sys2, rng);
            cm.apply(y, x);
            ++rep.probes;
            if (!target.satisfies(x)) {
                rep.lands_in = false;
                rep.failure = "probe image is not a solution";
                break;
            }
        }
        if (!rep.counts_match && rep.failure.empty()) rep.failure = "solution counts do not match mu";
        return rep;
    }

    rep.exhaustive = true;
    std::unordered_map<Tuple, std::uint64_t, TupleHash> fibers;
    rep.lands_in = true;
    Tuple x;
    for_each_solution(sys2, [&](const Tuple& y) {
        cm.apply(y, x);
        if (rep.lands_in && !target.satisfies(x)) {
            rep.lands_in = false;
            rep.failure = "image of a solution is not a solution";
        }
        ++fibers[x];
    }, opt.cap);
    rep.surjective = Int(static_cast<unsigned long>(fibers.size())) == rep.target_count;
    rep.uniform = true;
    for (auto& [img, c] : fibers) {
        rep.fiber_histogram[Int(static_cast<unsigned long>(c))] += 1;
        if (Int(static_cast<unsigned long>(c)) != map.mu) rep.uniform = false;
    }
    if (!rep.surjective && rep.failure.empty()) rep.failure = "map is not surjective";
    if (!rep.uniform && rep.failure.empty()) rep.failure = "fibers are not all of size mu";

    if (opt.constancy && rep.lands_in && rep.surjective && rep.uniform) {
        std::size_t t2 = sys2.block;
        std::vector<std::int64_t> src(sys2.group.orders), dst(sys1.group.orders);
        for (std::size_t i = 0; i < map.sigma.size(); ++i) {
            Int ker = hom_kernel_size(map.affines[i].linear, src, dst);
            bool good = map.mu % ker == 0;
            std::uint64_t expect = good ? Int(map.mu / ker).get_ui() : 0;
            std::unordered_map<Tuple, std::uint64_t, TupleHash> counts;
            if (good) {
                for_each_solution(sys2, [&](const Tuple& y) {
                    cm.apply(y, x);
                    Tuple key = x;
                    key.insert(key.end(), y.begin() + map.sigma[i] * t2, y.begin() + (map.sigma[i] + 1) * t2);
                    ++counts[key];
                }, opt.cap);
                for (auto& [key, c] : counts)
                    if (c != expect) {
                        good = false;
                        break;
                    }
            }
            rep.constancy.push_back(good);
            if (!good && rep.failure.empty())
                rep.failure = "fiber size is not constant along coordinate " + std::to_string(i + 1);
        }
    }
    if (!rep.counts_match && rep.failure.empty()) rep.failure = "solution counts do not match mu";
    return rep;
}

} // namespace hsys
