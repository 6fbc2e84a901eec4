#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "hsys/common.hpp"

namespace hsys {

// Product of cyclic groups Z_{n_1} x ... x Z_{n_t}. The canonical form keeps
// the divisibility chain n_{i+1} | n_i; raw products (mixed or trivial
// factors) are allowed for intermediate constructions such as the product of
// the split groups.
struct FiniteAbelianGroup {
    std::vector<std::int64_t> orders;

    static FiniteAbelianGroup cyclic(std::int64_t n);
    static FiniteAbelianGroup homocyclic(std::int64_t n, std::size_t t);
    // No canonicalization; every factor must be >= 1.
    static FiniteAbelianGroup product(std::vector<std::int64_t> orders);

    std::size_t rank() const { return orders.size(); }
    Int order() const;
    std::int64_t exponent() const;
    bool is_canonical() const;
    bool is_homocyclic() const;
    bool operator==(const FiniteAbelianGroup& o) const { return orders == o.orders; }
    bool operator!=(const FiniteAbelianGroup& o) const { return orders != o.orders; }
};

using GroupRef = std::shared_ptr<const FiniteAbelianGroup>;

inline GroupRef make_group(FiniteAbelianGroup g)
{
    return std::make_shared<const FiniteAbelianGroup>(std::move(g));
}

FiniteAbelianGroup normalize_group(const std::vector<std::int64_t>& orders);

struct GroupElement {
    Tuple coords;
    GroupRef group;

    bool operator==(const GroupElement& o) const
    {
        return coords == o.coords && *group == *o.group;
    }
    bool operator<(const GroupElement& o) const { return coords < o.coords; }
};

GroupElement make_element(const GroupRef& G, const std::vector<std::int64_t>& coords);
GroupElement add(const GroupElement& a, const GroupElement& b);
GroupElement neg(const GroupElement& a);
GroupElement scalar_mul(const Int& c, const GroupElement& a);
GroupElement scalar_mul(std::int64_t c, const GroupElement& a);

// Elements x with d x = 0, in lexicographic order.
std::vector<GroupElement> kernel_of_mult(std::int64_t d, const GroupRef& G);

struct QuotientLift {
    FiniteAbelianGroup G;
    FiniteAbelianGroup Gprime;
    Int beta;
    Tuple tau(const Tuple& a) const;
};

QuotientLift quotient_lift(const FiniteAbelianGroup& G);

// Odometer over a product of ranges [0, r_0) x ... x [0, r_{k-1}), last index
// fastest, so the visiting order is lexicographic.
class Odometer {
public:
    explicit Odometer(std::vector<std::int64_t> radix);
    const Tuple& value() const { return v_; }
    bool done() const { return done_; }
    // Advances; returns the index of the most significant digit that changed.
    std::size_t next();

private:
    std::vector<std::int64_t> radix_;
    Tuple v_;
    bool done_ = false;
};

void for_each_element(const FiniteAbelianGroup& G, const std::function<void(const Tuple&)>& fn,
                      std::uint64_t cap = kDefaultCap);
std::vector<GroupElement> enumerate_elements(const GroupRef& G, std::uint64_t cap = kDefaultCap);

// Element order census used to compare groups up to isomorphism.
std::vector<std::pair<std::int64_t, std::int64_t>> element_order_census(const FiniteAbelianGroup& G,
                                                                        std::uint64_t cap = kDefaultCap);

} // namespace hsys
