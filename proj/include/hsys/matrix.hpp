#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hsys/common.hpp"

namespace hsys {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    IntMatrix operator*(const IntMatrix& b) const;
    bool operator==(const IntMatrix& b) const;
    bool operator!=(const IntMatrix& b) const { return !(*this == b); }

    IntMatrix transpose() const;
    IntMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    IntMatrix select(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
    bool is_zero() const;
    bool is_identity() const;

    void swap_rows(std::size_t i, std::size_t j);
    void swap_cols(std::size_t i, std::size_t j);
    // row_i += c * row_j
    void add_row(std::size_t i, std::size_t j, const Int& c);
    // col_i += c * col_j
    void add_col(std::size_t i, std::size_t j, const Int& c);
    void negate_row(std::size_t i);

    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
IntMatrix vstack(const IntMatrix& a, const IntMatrix& b);

// Fraction-free (Bareiss) determinant.
Int det(const IntMatrix& a);
// Determinant modulo a prime p, computed in machine words.
std::int64_t det_mod_prime(const IntMatrix& a, std::int64_t p);
bool det_coprime(const IntMatrix& a, std::int64_t n);
IntMatrix inverse_unimodular(const IntMatrix& a);

// U * A * V = S, U and V unimodular, S diagonal with d_1 | d_2 | ... and d_i >= 0.
struct SmithDecomposition {
    IntMatrix U, S, V;
    std::vector<Int> diag;
};

SmithDecomposition smith_normal_form(const IntMatrix& a);
Int determinantal_divisor(const IntMatrix& a, std::size_t i);

struct RowReduction {
    IntMatrix A1;
    IntMatrix U;
    std::vector<Int> diag;
};

// A1 = U * A whose row j has content d_j.
RowReduction row_reduce_to_gcd_rows(const IntMatrix& a);
IntMatrix divide_rows_by_gcd(const IntMatrix& a1, const std::vector<Int>& diag);

// Square N whose first rows are A, det N = D_k(A) (up to sign when A is square).
IntMatrix extend_to_det(const IntMatrix& a);

// stack(I, S, M, T, I): every r consecutive rows have det coprime with n.
IntMatrix circular_extension(const IntMatrix& m, std::int64_t n);
// All r consecutive rows of a (non-cyclic) have det coprime with n.
bool sliding_windows_coprime(const IntMatrix& a, std::int64_t n);

bool is_block_n_circular(const IntMatrix& a, std::size_t block, std::int64_t n);
IntMatrix build_band_annihilator(const IntMatrix& a, std::size_t block, std::int64_t n);

} // namespace hsys
