#include "hsys/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace hsys {

std::int64_t gcd64(std::int64_t a, std::int64_t b)
{
    return std::gcd(a, b);
}

std::int64_t lcm64(std::int64_t a, std::int64_t b)
{
    if (a == 0 || b == 0) return 0;
    return std::lcm(a, b);
}

Int gcd(const Int& a, const Int& b)
{
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t n)
{
    if (n == 1) return 0;
    Int r;
    Int aa(static_cast<long>(mod(a, n))), nn(static_cast<long>(n));
    if (mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), nn.get_mpz_t()) == 0)
        throw PreconditionError("inverse_mod: not a unit");
    return r.get_si();
}

std::vector<std::int64_t> prime_divisors(std::int64_t n)
{
    std::vector<std::int64_t> ps;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

std::int64_t to_i64(const Int& a)
{
    if (!a.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
    return a.get_si();
}

FiniteAbelianGroup FiniteAbelianGroup::cyclic(std::int64_t n)
{
    return normalize_group({n});
}

FiniteAbelianGroup FiniteAbelianGroup::homocyclic(std::int64_t n, std::size_t t)
{
    if (n < 1) throw InvalidInput("homocyclic: order must be positive");
    return FiniteAbelianGroup{std::vector<std::int64_t>(t, n)};
}

FiniteAbelianGroup FiniteAbelianGroup::product(std::vector<std::int64_t> orders)
{
    for (auto n : orders)
        if (n < 1) throw InvalidInput("product group: factor orders must be >= 1");
    return FiniteAbelianGroup{std::move(orders)};
}

Int FiniteAbelianGroup::order() const
{
    Int r = 1;
    for (auto n : orders) r *= static_cast<long>(n);
    return r;
}

std::int64_t FiniteAbelianGroup::exponent() const
{
    std::int64_t e = 1;
    for (auto n : orders) e = lcm64(e, n);
    return e;
}

bool FiniteAbelianGroup::is_canonical() const
{
    if (orders.empty()) return false;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 2) return false;
        if (i + 1 < orders.size() && orders[i] % orders[i + 1] != 0) return false;
    }
    return true;
}

bool FiniteAbelianGroup::is_homocyclic() const
{
    return std::all_of(orders.begin(), orders.end(), [&](std::int64_t n) { return n == orders.front(); });
}

FiniteAbelianGroup normalize_group(const std::vector<std::int64_t>& orders)
{
    if (orders.empty()) throw InvalidInput("normalize_group: empty order list");
    std::vector<std::int64_t> a = orders;
    for (auto n : a)
        if (n < 2) throw InvalidInput("normalize_group: cyclic orders must be >= 2");
    // Pairwise gcd/lcm merging converges to the invariant factors.
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            std::int64_t g = gcd64(a[i], a[j]);
            std::int64_t l = a[i] / g * a[j];
            a[i] = l;
            a[j] = g;
        }
    }
    std::vector<std::int64_t> out;
    for (auto n : a)
        if (n > 1) out.push_back(n);
    std::sort(out.begin(), out.end(), std::greater<>());
    return FiniteAbelianGroup{out};
}

GroupElement make_element(const GroupRef& G, const std::vector<std::int64_t>& coords)
{
    if (coords.size() != G->rank()) throw InvalidInput("element has wrong number of coordinates");
    GroupElement e{coords, G};
    for (std::size_t i = 0; i < coords.size(); ++i) e.coords[i] = mod(coords[i], G->orders[i]);
    return e;
}

static void check_same(const GroupElement& a, const GroupElement& b)
{
    if (!a.group || !b.group || *a.group != *b.group) throw InvalidInput("group mismatch");
}

GroupElement add(const GroupElement& a, const GroupElement& b)
{
    check_same(a, b);
    GroupElement r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i)
        r.coords[i] = mod(a.coords[i] + b.coords[i], a.group->orders[i]);
    return r;
}

GroupElement neg(const GroupElement& a)
{
    GroupElement r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = mod(-a.coords[i], a.group->orders[i]);
    return r;
}

GroupElement scalar_mul(const Int& c, const GroupElement& a)
{
    GroupElement r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i) {
        std::int64_t n = a.group->orders[i];
        r.coords[i] = mod(mod(c, n) * a.coords[i], n);
    }
    return r;
}

GroupElement scalar_mul(std::int64_t c, const GroupElement& a)
{
    return scalar_mul(Int(static_cast<long>(c)), a);
}

std::vector<GroupElement> kernel_of_mult(std::int64_t d, const GroupRef& G)
{
    if (d < 0) throw PreconditionError("kernel_of_mult: d must be >= 0");
    // In Z_n the kernel of d is generated by n / gcd(d, n).
    std::vector<std::int64_t> step, count;
    for (auto n : G->orders) {
        std::int64_t g = gcd64(d, n);
        step.push_back(n / g);
        count.push_back(g);
    }
    std::vector<GroupElement> out;
    for (Odometer od(count); !od.done(); od.next()) {
        GroupElement e{Tuple(G->rank()), G};
        for (std::size_t i = 0; i < G->rank(); ++i) e.coords[i] = od.value()[i] * step[i];
        out.push_back(std::move(e));
    }
    return out;
}

Tuple QuotientLift::tau(const Tuple& a) const
{
    Tuple r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i], G.orders[i]);
    return r;
}

QuotientLift quotient_lift(const FiniteAbelianGroup& G)
{
    if (G.rank() == 0) throw InvalidInput("quotient_lift: empty group");
    QuotientLift q;
    q.G = G;
    std::int64_t n = G.exponent();
    q.Gprime = FiniteAbelianGroup::homocyclic(n, G.rank());
    q.beta = q.Gprime.order() / G.order();
    return q;
}

Odometer::Odometer(std::vector<std::int64_t> radix) : radix_(std::move(radix)), v_(radix_.size(), 0)
{
    for (auto r : radix_)
        if (r <= 0) done_ = true;
}

std::size_t Odometer::next()
{
    std::size_t i = radix_.size();
    while (i > 0) {
        --i;
        if (++v_[i] < radix_[i]) return i;
        v_[i] = 0;
    }
    done_ = true;
    return 0;
}

void for_each_element(const FiniteAbelianGroup& G, const std::function<void(const Tuple&)>& fn, std::uint64_t cap)
{
    if (G.order() > Int(static_cast<unsigned long>(cap)))
        throw CapExceeded("group enumeration exceeds cap");
    for (Odometer od(G.orders); !od.done(); od.next()) fn(od.value());
}

std::vector<GroupElement> enumerate_elements(const GroupRef& G, std::uint64_t cap)
{
    std::vector<GroupElement> out;
    for_each_element(*G, [&](const Tuple& t) { out.push_back(GroupElement{t, G}); }, cap);
    return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> element_order_census(const FiniteAbelianGroup& G,
                                                                        std::uint64_t cap)
{
    std::map<std::int64_t, std::int64_t> census;
    for_each_element(G, [&](const Tuple& t) {
        std::int64_t ord = 1;
        for (std::size_t i = 0; i < t.size(); ++i) ord = lcm64(ord, G.orders[i] / gcd64(t[i], G.orders[i]));
        ++census[ord];
    }, cap);
    return {census.begin(), census.end()};
}

} // namespace hsys
