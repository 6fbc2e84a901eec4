#pragma once

#include <memory>
#include <optional>
#include <random>
#include <set>

#include "hsys/group.hpp"
#include "hsys/matrix.hpp"

namespace hsys {

// A x = b over G^m where G is the block group of rank t. The matrix has
// (k t) rows and (m t) columns; row (R, p) is read modulo n_p and column
// (C, q) multiplies the coordinate x_{C,q} in Z_{n_q}.
struct HomSystem {
    IntMatrix matrix;
    std::size_t block = 1;
    FiniteAbelianGroup group;
    Tuple rhs;

    std::size_t k() const { return matrix.rows() / block; }
    std::size_t m() const { return matrix.cols() / block; }
    std::int64_t modulus(std::size_t index) const { return group.orders[index % block]; }
    bool homogeneous() const;
    // Leading (k t) x (k t) identity.
    bool is_parametric() const;
};

// Checks shapes and that every entry maps Z_{n_q} into Z_{n_p}.
void validate(const HomSystem& sys);
HomSystem make_system(const IntMatrix& a, const FiniteAbelianGroup& g, const Tuple& rhs = {});
// A (k x m scalars) acting diagonally on every coordinate: A tensor I_t.
HomSystem scalar_system(const IntMatrix& a, const FiniteAbelianGroup& g, const Tuple& rhs = {});
HomSystem from_blocks(const std::vector<std::vector<IntMatrix>>& blocks, const FiniteAbelianGroup& g,
                      const Tuple& rhs = {});

Tuple residual(const HomSystem& sys, const Tuple& x);
bool satisfies(const HomSystem& sys, const Tuple& x);

enum class Strategy { Automatic, FullScan, Parametric, Lattice };

// Optional per-variable domains: allowed block values for each block variable.
using Domains = std::vector<std::optional<std::set<Tuple>>>;

struct SolutionSet {
    std::vector<Tuple> solutions;
    std::size_t block = 1;
    std::size_t count() const { return solutions.size(); }
};

SolutionSet enumerate_solutions(const HomSystem& sys, const Domains& domains = {},
                                Strategy strategy = Strategy::Automatic, std::uint64_t cap = kDefaultCap);
// Streams solutions without storing them; order is deterministic but not sorted.
void for_each_solution(const HomSystem& sys, const std::function<void(const Tuple&)>& fn,
                       std::uint64_t cap = kDefaultCap);
// Exact count without listing (Smith form over the homocyclic embedding).
Int count_solutions(const HomSystem& sys);
std::optional<Tuple> least_solution(const HomSystem& sys, std::uint64_t cap = kDefaultCap);
Tuple random_solution(const HomSystem& sys, std::mt19937_64& rng);

// Machine-word copy of a system for repeated membership checks on large,
// sparse matrices.
class CongruenceSolver;

class SparseSystem {
public:
    explicit SparseSystem(const HomSystem& sys);
    bool satisfies(const Tuple& x) const;
    // Fills the leading identity coordinates of an (I | B) system from the
    // parameter coordinates of x.
    Tuple complete_parametric(Tuple x) const;
    bool parametric() const { return parametric_; }
    // Uniform solution; the lattice solver of a general system is built once.
    Tuple sample(const HomSystem& sys, std::mt19937_64& rng) const;

private:
    bool parametric_ = false;
    mutable std::shared_ptr<const CongruenceSolver> solver_;
    mutable std::int64_t solver_n_ = 0;
    std::size_t cols_;
    Tuple rhs_;
    std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> rows_;
    std::vector<std::int64_t> moduli_, col_moduli_;
};

Tuple random_solution(const SparseSystem& sparse, const HomSystem& sys, std::mt19937_64& rng);

// Sorted distinct values of block variable i (0-based).
std::vector<Tuple> project_solutions(const SolutionSet& sol, std::size_t i);
Int projection_size(const HomSystem& sys, std::size_t i);

// System whose solution set is shift + <generators>; generators and shift are
// flat tuples over G^m. G must be canonical.
HomSystem subgroup_to_system(const std::vector<Tuple>& generators, const Tuple& shift, const FiniteAbelianGroup& g,
                             std::size_t m);
// Subgroup generated by the tuples, by closure.
std::set<Tuple> span(const std::vector<Tuple>& generators, const FiniteAbelianGroup& g, std::size_t m,
                     std::uint64_t cap = kDefaultCap);

HomSystem pad_variables(const HomSystem& sys);

struct ExtensionReport {
    bool holds = false;
    Int expected;
    Int min_completions, max_completions;
};

// Shape (A' | B) with A' of k x k blocks: every assignment of the first k
// block variables extends in exactly |G|^(m_B - k) ways.
ExtensionReport extension_count_check(const HomSystem& sys, std::uint64_t cap = kDefaultCap);

// Block slice of a tuple.
Tuple block_value(const Tuple& x, std::size_t i, std::size_t t);

} // namespace hsys
