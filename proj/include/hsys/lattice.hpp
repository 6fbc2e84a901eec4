#pragma once

#include <functional>
#include <random>

#include "hsys/matrix.hpp"

namespace hsys {

// Solution set of A X = b over Z_n, described through the Smith form of A:
// X = V y with y_i = y0_i + j * step_i, j in [0, count_i).
class CongruenceSolver {
public:
    CongruenceSolver(const IntMatrix& a, const Tuple& b, std::int64_t n);

    bool consistent() const { return consistent_; }
    Int count() const;
    std::size_t vars() const { return cols_; }
    void for_each(const std::function<void(const Tuple&)>& fn, std::uint64_t cap = kDefaultCap) const;
    Tuple particular() const;
    Tuple sample(std::mt19937_64& rng) const;

private:
    Tuple to_x(const Tuple& y) const;

    std::int64_t n_;
    std::size_t cols_;
    bool consistent_ = true;
    std::vector<std::int64_t> v_; // V mod n, row-major
    Tuple y0_;
    std::vector<std::int64_t> step_, count_;
};

// Size of the kernel of the homomorphism prod Z_{src_q} -> prod Z_{dst_p}
// given by an integer matrix (rows indexed by dst, columns by src).
Int hom_kernel_size(const IntMatrix& m, const std::vector<std::int64_t>& src, const std::vector<std::int64_t>& dst);

} // namespace hsys
