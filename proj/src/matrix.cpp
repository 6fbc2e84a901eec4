#include "hsys/matrix.hpp"

#include <algorithm>
#include <sstream>

namespace hsys {

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows)
{
    std::size_t c = rows.empty() ? 0 : rows.front().size();
    IntMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c) throw InvalidInput("ragged matrix rows");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& b) const
{
    if (cols_ != b.rows_) throw InvalidInput("matrix product dimension mismatch");
    IntMatrix r(rows_, b.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t l = 0; l < cols_; ++l) {
            const Int& x = (*this)(i, l);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) {
                const Int& y = b(l, j);
                if (y != 0) r(i, j) += x * y;
            }
        }
    return r;
}

bool IntMatrix::operator==(const IntMatrix& b) const
{
    return rows_ == b.rows_ && cols_ == b.cols_ && a_ == b.a_;
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

IntMatrix IntMatrix::submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
    if (r0 + nr > rows_ || c0 + nc > cols_) throw InvalidInput("submatrix out of range");
    IntMatrix r(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
    return r;
}

IntMatrix IntMatrix::select(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const
{
    IntMatrix r(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) r(i, j) = (*this)(rows[i], cols[j]);
    return r;
}

bool IntMatrix::is_zero() const
{
    return std::all_of(a_.begin(), a_.end(), [](const Int& x) { return x == 0; });
}

bool IntMatrix::is_identity() const
{
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j)
{
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j)
{
    if (i == j) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
}

void IntMatrix::add_row(std::size_t i, std::size_t j, const Int& c)
{
    if (c == 0) return;
    for (std::size_t k = 0; k < cols_; ++k)
        if ((*this)(j, k) != 0) (*this)(i, k) += c * (*this)(j, k);
}

void IntMatrix::add_col(std::size_t i, std::size_t j, const Int& c)
{
    if (c == 0) return;
    for (std::size_t k = 0; k < rows_; ++k)
        if ((*this)(k, j) != 0) (*this)(k, i) += c * (*this)(k, j);
}

void IntMatrix::negate_row(std::size_t i)
{
    for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) = -(*this)(i, k);
}

std::string IntMatrix::to_string() const
{
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "\n[" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
        os << "]";
    }
    return os.str();
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b)
{
    if (a.rows() != b.rows()) throw InvalidInput("hstack: row mismatch");
    IntMatrix r(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
    }
    return r;
}

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() != b.cols()) throw InvalidInput("vstack: column mismatch");
    IntMatrix r(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(a.rows() + i, j) = b(i, j);
    return r;
}

Int det(const IntMatrix& a)
{
    if (a.rows() != a.cols()) throw InvalidInput("det: matrix not square");
    std::size_t n = a.rows();
    if (n == 0) return 1;
    IntMatrix m = a;
    int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

std::int64_t det_mod_prime(const IntMatrix& a, std::int64_t p)
{
    if (a.rows() != a.cols()) throw InvalidInput("det: matrix not square");
    std::size_t n = a.rows();
    std::vector<std::int64_t> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = mod(a(i, j), p);
    std::int64_t d = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m[piv * n + k] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
            d = mod(-d, p);
        }
        std::int64_t pv = m[k * n + k];
        d = static_cast<std::int64_t>(static_cast<__int128>(d) * pv % p);
        std::int64_t inv = inverse_mod(pv, p);
        for (std::size_t i = k + 1; i < n; ++i) {
            std::int64_t f = m[i * n + k];
            if (f == 0) continue;
            f = static_cast<std::int64_t>(static_cast<__int128>(f) * inv % p);
            for (std::size_t j = k; j < n; ++j) {
                __int128 v = m[i * n + j] - static_cast<__int128>(f) * m[k * n + j];
                m[i * n + j] = static_cast<std::int64_t>(((v % p) + p) % p);
            }
        }
    }
    return d;
}

bool det_coprime(const IntMatrix& a, std::int64_t n)
{
    for (auto p : prime_divisors(n))
        if (det_mod_prime(a, p) == 0) return false;
    return true;
}

// Gauss-Jordan over Q on [A | B]; returns X with A X = B. A must be invertible.
static std::vector<std::vector<Rational>> solve_rational(const IntMatrix& a, const IntMatrix& b)
{
    std::size_t n = a.rows(), w = b.cols();
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + w));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j);
        for (std::size_t j = 0; j < w; ++j) m[i][n + j] = b(i, j);
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k] == 0) ++p;
        if (p == n) throw PreconditionError("singular matrix");
        std::swap(m[k], m[p]);
        Rational inv = 1 / m[k][k];
        for (auto& x : m[k]) x *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || m[i][k] == 0) continue;
            Rational f = m[i][k];
            for (std::size_t j = k; j < n + w; ++j) m[i][j] -= f * m[k][j];
        }
    }
    std::vector<std::vector<Rational>> x(n, std::vector<Rational>(w));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < w; ++j) x[i][j] = m[i][n + j];
    return x;
}

IntMatrix inverse_unimodular(const IntMatrix& a)
{
    if (a.rows() != a.cols()) throw InvalidInput("inverse: matrix not square");
    auto x = solve_rational(a, IntMatrix::identity(a.rows()));
    IntMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (x[i][j].get_den() != 1) throw PreconditionError("inverse: matrix is not unimodular");
            r(i, j) = x[i][j].get_num();
        }
    return r;
}

static int cmpabs(const Int& a, const Int& b)
{
    return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}

SmithDecomposition smith_normal_form(const IntMatrix& a)
{
    std::size_t k = a.rows(), m = a.cols();
    IntMatrix S = a, U = IntMatrix::identity(k), V = IntMatrix::identity(m);
    std::size_t r = std::min(k, m);

    auto place_min = [&](std::size_t t, std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) {
        bool found = false;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = i0; i < i1; ++i)
            for (std::size_t j = j0; j < j1; ++j) {
                if (S(i, j) == 0) continue;
                if (!found || cmpabs(S(i, j), S(bi, bj)) < 0) {
                    found = true;
                    bi = i;
                    bj = j;
                }
            }
        if (!found) return false;
        S.swap_rows(t, bi);
        U.swap_rows(t, bi);
        S.swap_cols(t, bj);
        V.swap_cols(t, bj);
        return true;
    };

    for (std::size_t t = 0; t < r; ++t) {
        if (!place_min(t, t, k, t, m)) break;
        for (;;) {
            bool dirty = false;
            for (std::size_t i = t + 1; i < k; ++i) {
                if (S(i, t) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), S(i, t).get_mpz_t(), S(t, t).get_mpz_t());
                q = -q;
                S.add_row(i, t, q);
                U.add_row(i, t, q);
                if (S(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < m; ++j) {
                if (S(t, j) == 0) continue;
                Int q;
                mpz_tdiv_q(q.get_mpz_t(), S(t, j).get_mpz_t(), S(t, t).get_mpz_t());
                q = -q;
                S.add_col(j, t, q);
                V.add_col(j, t, q);
                if (S(t, j) != 0) dirty = true;
            }
            if (dirty) {
                // A remainder is smaller than the pivot; bring the smallest entry of row/column t in.
                std::size_t bi = t, bj = t;
                for (std::size_t i = t + 1; i < k; ++i)
                    if (S(i, t) != 0 && cmpabs(S(i, t), S(bi, bj)) < 0) bi = i, bj = t;
                for (std::size_t j = t + 1; j < m; ++j)
                    if (S(t, j) != 0 && cmpabs(S(t, j), S(bi, bj)) < 0) bi = t, bj = j;
                S.swap_rows(t, bi);
                U.swap_rows(t, bi);
                S.swap_cols(t, bj);
                V.swap_cols(t, bj);
                continue;
            }
            bool fixed = false;
            for (std::size_t i = t + 1; i < k && !fixed; ++i)
                for (std::size_t j = t + 1; j < m; ++j)
                    if (!mpz_divisible_p(S(i, j).get_mpz_t(), S(t, t).get_mpz_t())) {
                        S.add_row(t, i, 1);
                        U.add_row(t, i, 1);
                        fixed = true;
                        break;
                    }
            if (!fixed) break;
        }
        if (S(t, t) < 0) {
            S.negate_row(t);
            U.negate_row(t);
        }
    }
    SmithDecomposition d{U, S, V, {}};
    for (std::size_t i = 0; i < r; ++i) d.diag.push_back(S(i, i));
    return d;
}

Int determinantal_divisor(const IntMatrix& a, std::size_t i)
{
    if (i < 1 || i > std::min(a.rows(), a.cols())) throw InvalidInput("determinantal_divisor: index out of range");
    auto snf = smith_normal_form(a);
    Int d = 1;
    for (std::size_t j = 0; j < i; ++j) d *= snf.diag[j];
    return d;
}

RowReduction row_reduce_to_gcd_rows(const IntMatrix& a)
{
    if (a.rows() > a.cols()) throw PreconditionError("row_reduce_to_gcd_rows: more rows than columns");
    auto snf = smith_normal_form(a);
    return RowReduction{snf.U * a, snf.U, snf.diag};
}

IntMatrix divide_rows_by_gcd(const IntMatrix& a1, const std::vector<Int>& diag)
{
    if (diag.size() != a1.rows()) throw InvalidInput("divide_rows_by_gcd: diagonal length mismatch");
    IntMatrix r = a1;
    for (std::size_t i = 0; i < r.rows(); ++i) {
        if (diag[i] == 0) throw PreconditionError("divide_rows_by_gcd: degenerate system (zero divisor)");
        for (std::size_t j = 0; j < r.cols(); ++j) {
            if (!mpz_divisible_p(r(i, j).get_mpz_t(), diag[i].get_mpz_t()))
                throw PreconditionError("divide_rows_by_gcd: divisor does not divide its row");
            mpz_divexact(r(i, j).get_mpz_t(), r(i, j).get_mpz_t(), diag[i].get_mpz_t());
        }
    }
    return r;
}

IntMatrix extend_to_det(const IntMatrix& a)
{
    std::size_t k = a.rows(), m = a.cols();
    if (k > m) throw PreconditionError("extend_to_det: more rows than columns");
    auto snf = smith_normal_form(a);
    Int dk = 1;
    for (auto& d : snf.diag) dk *= d;
    if (dk == 0) throw PreconditionError("extend_to_det: rank-deficient matrix");
    if (k == m) return a;
    IntMatrix vinv = inverse_unimodular(snf.V);
    IntMatrix n = vstack(a, vinv.submatrix(k, 0, m - k, m));
    if (det(n) < 0) n.negate_row(m - 1);
    return n;
}

// Coefficients x with sum x_j a_j = gcd(a).
static std::vector<Int> bezout(const std::vector<Int>& a, Int& g)
{
    std::vector<Int> x(a.size());
    g = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        Int s, t, ng;
        mpz_gcdext(ng.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(), a[j].get_mpz_t());
        for (std::size_t l = 0; l < j; ++l) x[l] *= s;
        x[j] = t;
        g = ng;
    }
    return x;
}

// Rows T_1..T_r: T_i = (0,..,0,d_i,*,..) and every window of consecutive rows
// crossing from M into T has det coprime with n.
static IntMatrix build_tail(const IntMatrix& m, std::int64_t n)
{
    std::size_t r = m.rows();
    IntMatrix w = m;
    IntMatrix t(r, r);
    Int nn(static_cast<long>(n));
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<Int> rest;
        for (std::size_t j = i + 1; j < r; ++j) rest.push_back(w(j, i));
        Int gp;
        std::vector<Int> x = bezout(rest, gp);
        Int d = gcd(w(i, i), gp);
        if (d == 0) throw PreconditionError("circular_extension: singular leading block");
        std::vector<Int> lambda(r - i);
        if (gp == 0) {
            lambda[0] = w(i, i) / d;
        } else {
            // lambda_i * a_i = d mod g', with lambda_i coprime to n.
            Int ai = w(i, i) / d, step = gp / d, lam0 = 0;
            if (step > 1) {
                Int ai_mod = ai % step;
                if (ai_mod < 0) ai_mod += step;
                mpz_invert(lam0.get_mpz_t(), ai_mod.get_mpz_t(), step.get_mpz_t());
            }
            Int lam = lam0;
            while (gcd(lam, nn) != 1) lam += step;
            lambda[0] = lam;
            Int remaining = d - lam * w(i, i);
            Int scale = remaining / gp;
            for (std::size_t j = 0; j < x.size(); ++j) lambda[j + 1] = x[j] * scale;
        }
        for (std::size_t j = i; j < r; ++j)
            for (std::size_t c = 0; c < r; ++c)
                if (lambda[j - i] != 0) t(i, c) += lambda[j - i] * w(j, c);
        for (std::size_t j = i + 1; j < r; ++j) {
            if (w(j, i) == 0) continue;
            Int f = w(j, i) / d;
            for (std::size_t c = 0; c < r; ++c) w(j, c) -= f * t(i, c);
        }
    }
    return t;
}

static IntMatrix reverse_both(const IntMatrix& a)
{
    IntMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(a.rows() - 1 - i, a.cols() - 1 - j) = a(i, j);
    return r;
}

bool sliding_windows_coprime(const IntMatrix& a, std::int64_t n)
{
    std::size_t r = a.cols();
    if (a.rows() < r) return false;
    for (std::size_t w = 0; w + r <= a.rows(); ++w)
        if (!det_coprime(a.submatrix(w, 0, r, r), n)) return false;
    return true;
}

IntMatrix circular_extension(const IntMatrix& m, std::int64_t n)
{
    if (m.rows() != m.cols() || m.rows() == 0) throw InvalidInput("circular_extension: matrix must be square");
    if (n < 2) throw PreconditionError("circular_extension: n must be >= 2");
    if (!det_coprime(m, n)) throw PreconditionError("circular_extension: det(M) not coprime with n");
    std::size_t r = m.rows();
    IntMatrix s, t;
    if (r == 1) {
        s = IntMatrix::identity(1);
        t = IntMatrix::identity(1);
    } else {
        t = build_tail(m, n);
        s = reverse_both(build_tail(reverse_both(m), n));
    }
    IntMatrix id = IntMatrix::identity(r);
    IntMatrix out = vstack(vstack(vstack(vstack(id, s), m), t), id);
    if (!sliding_windows_coprime(out, n)) throw std::logic_error("circular_extension: window check failed");
    return out;
}

bool is_block_n_circular(const IntMatrix& a, std::size_t block, std::int64_t n)
{
    if (block == 0 || a.rows() % block || a.cols() % block) throw InvalidInput("dimensions not divisible by block");
    std::size_t k = a.rows() / block, m = a.cols() / block;
    if (m < k) return false;
    if (n == 1) return true;
    std::size_t kt = a.rows();
    bool standard = a.submatrix(0, 0, kt, kt).is_identity();
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::size_t> cols;
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t c = 0; c < block; ++c) cols.push_back(((i + b) % m) * block + c);
        if (standard) {
            // det = +- minor of B on the rows whose identity column is not selected.
            std::vector<bool> id_taken(kt, false);
            std::vector<std::size_t> bcols;
            for (auto c : cols) {
                if (c < kt) id_taken[c] = true;
                else bcols.push_back(c);
            }
            std::vector<std::size_t> rows;
            for (std::size_t rr = 0; rr < kt; ++rr)
                if (!id_taken[rr]) rows.push_back(rr);
            if (rows.empty()) continue;
            if (!det_coprime(a.select(rows, bcols), n)) return false;
        } else {
            std::vector<std::size_t> rows(kt);
            for (std::size_t rr = 0; rr < kt; ++rr) rows[rr] = rr;
            if (!det_coprime(a.select(rows, cols), n)) return false;
        }
    }
    return true;
}

IntMatrix build_band_annihilator(const IntMatrix& a, std::size_t block, std::int64_t n)
{
    if (!is_block_n_circular(a, block, n)) throw PreconditionError("build_band_annihilator: matrix is not block n-circular");
    std::size_t t = block, k = a.rows() / t, m = a.cols() / t;
    if (m <= k) throw PreconditionError("build_band_annihilator: need more column blocks than row blocks");
    std::size_t kt = k * t;
    IntMatrix c(m * t, m * t);
    std::vector<std::size_t> all_rows(kt);
    for (std::size_t r = 0; r < kt; ++r) all_rows[r] = r;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::size_t> wcols, tcols;
        for (std::size_t b = 0; b < k; ++b)
            for (std::size_t q = 0; q < t; ++q) wcols.push_back(((i + b) % m) * t + q);
        std::size_t target = (i + k) % m;
        for (std::size_t q = 0; q < t; ++q) tcols.push_back(target * t + q);
        auto x = solve_rational(a.select(all_rows, wcols), a.select(all_rows, tcols));
        for (std::size_t j = 0; j < t; ++j) {
            Int den = 1;
            for (std::size_t w = 0; w < kt; ++w) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x[w][j].get_den_mpz_t());
            std::size_t col = tcols[j];
            c(col, col) += den;
            for (std::size_t w = 0; w < kt; ++w) {
                Rational v = -x[w][j] * den;
                c(wcols[w], col) += v.get_num();
            }
        }
    }
    return c;
}

} // namespace hsys
