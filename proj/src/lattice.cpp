#include "hsys/lattice.hpp"

#include "hsys/group.hpp"

namespace hsys {

CongruenceSolver::CongruenceSolver(const IntMatrix& a, const Tuple& b, std::int64_t n) : n_(n), cols_(a.cols())
{
    if (b.size() != a.rows()) throw InvalidInput("congruence: rhs length mismatch");
    auto snf = smith_normal_form(a);
    v_.resize(cols_ * cols_);
    for (std::size_t i = 0; i < cols_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) v_[i * cols_ + j] = mod(snf.V(i, j), n);
    Tuple c(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Int s = 0;
        for (std::size_t j = 0; j < a.rows(); ++j)
            if (b[j] != 0) s += snf.U(i, j) * static_cast<long>(b[j]);
        c[i] = mod(s, n);
    }
    y0_.assign(cols_, 0);
    step_.assign(cols_, 1);
    count_.assign(cols_, n);
    std::size_t r = std::min(a.rows(), cols_);
    for (std::size_t i = 0; i < r; ++i) {
        std::int64_t d = mod(snf.diag[i], n);
        std::int64_t g = gcd64(d, n);
        if (c[i] % g != 0) {
            consistent_ = false;
            return;
        }
        std::int64_t ng = n / g;
        y0_[i] = ng == 1 ? 0 : mod(static_cast<std::int64_t>(static_cast<__int128>(c[i] / g) * inverse_mod(d / g, ng) % ng), ng);
        step_[i] = ng;
        count_[i] = g;
    }
    for (std::size_t i = r; i < a.rows(); ++i)
        if (c[i] != 0) {
            consistent_ = false;
            return;
        }
}

Int CongruenceSolver::count() const
{
    if (!consistent_) return 0;
    Int c = 1;
    for (auto x : count_) c *= static_cast<long>(x);
    return c;
}

Tuple CongruenceSolver::to_x(const Tuple& y) const
{
    Tuple x(cols_, 0);
    for (std::size_t i = 0; i < cols_; ++i) {
        __int128 s = 0;
        for (std::size_t j = 0; j < cols_; ++j)
            if (y[j]) s = (s + static_cast<__int128>(v_[i * cols_ + j]) * y[j]) % n_;
        x[i] = static_cast<std::int64_t>(s);
    }
    return x;
}

Tuple CongruenceSolver::particular() const
{
    if (!consistent_) throw PreconditionError("congruence: no solution");
    return to_x(y0_);
}

void CongruenceSolver::for_each(const std::function<void(const Tuple&)>& fn, std::uint64_t cap) const
{
    if (!consistent_) return;
    if (count() > Int(static_cast<unsigned long>(cap))) throw CapExceeded("solution set exceeds cap");
    Tuple y(cols_);
    for (Odometer od(count_); !od.done(); od.next()) {
        for (std::size_t i = 0; i < cols_; ++i) y[i] = (y0_[i] + od.value()[i] * step_[i]) % n_;
        fn(to_x(y));
    }
}

Tuple CongruenceSolver::sample(std::mt19937_64& rng) const
{
    if (!consistent_) throw PreconditionError("congruence: no solution");
    Tuple y(cols_);
    for (std::size_t i = 0; i < cols_; ++i) {
        std::uniform_int_distribution<std::int64_t> d(0, count_[i] - 1);
        y[i] = (y0_[i] + d(rng) * step_[i]) % n_;
    }
    return to_x(y);
}

Int hom_kernel_size(const IntMatrix& m, const std::vector<std::int64_t>& src, const std::vector<std::int64_t>& dst)
{
    if (m.rows() != dst.size() || m.cols() != src.size()) throw InvalidInput("hom_kernel_size: shape mismatch");
    if (src.empty()) return 1;
    std::int64_t n = 1;
    for (auto v : src) n = lcm64(n, v);
    for (auto v : dst) n = lcm64(n, v);
    // X_q = (n / src_q) x_q; row p reads (n / dst_p) sum m_pq x_q = sum m_pq (src_q / dst_p) X_q.
    IntMatrix a(m.rows() + m.cols(), m.cols());
    for (std::size_t p = 0; p < m.rows(); ++p)
        for (std::size_t q = 0; q < m.cols(); ++q) {
            Int v = m(p, q) * static_cast<long>(src[q]);
            if (!mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(dst[p])))
                throw InvalidInput("hom_kernel_size: entry is not a homomorphism");
            mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(dst[p]));
            a(p, q) = v;
        }
    for (std::size_t q = 0; q < m.cols(); ++q) a(m.rows() + q, q) = src[q];
    return CongruenceSolver(a, Tuple(a.rows(), 0), n).count();
}

} // namespace hsys
