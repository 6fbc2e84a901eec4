#pragma once

#include <random>
#include <set>

#include "hsys/system.hpp"

namespace hsys {

// Corners (x, x + a e_1, ..., x + a e_m) in P = G^m as a system with m + 1
// block variables over P. Equations: y_j - y_0 vanishes outside coordinate j,
// and the differences agree on their own coordinates; one zero block row pads
// the shape to k = m.
HomSystem build_corner_system(const FiniteAbelianGroup& G, std::size_t m);

// Block group P = G^m used by the corner system.
FiniteAbelianGroup corner_block_group(const FiniteAbelianGroup& G, std::size_t m);

struct ConfigurationCensus {
    HomSystem system;
    std::set<Tuple> subset;
    std::uint64_t hits = 0;       // direct scan over (x, a)
    std::uint64_t hits_solver = 0; // enumeration with X_1 = ... = X_{m+1} = subset
    Int total;                     // |S(A, P)|
    bool agree() const { return hits == hits_solver; }
};

// S is a set of points of G^m (flat tuples of length m rank(G)).
ConfigurationCensus count_corners(const FiniteAbelianGroup& G, std::size_t m, const std::set<Tuple>& S,
                                  std::uint64_t cap = kDefaultCap);

// Each point of G^m kept with the given probability.
std::set<Tuple> random_subset(const FiniteAbelianGroup& G, std::size_t m, double density, std::mt19937_64& rng);

// Configurations (x + Phi_1(xs), ..., x + Phi_t(xs)) with x in G and
// xs in G_1 x ... x G_s. subgroups[j] lists generators of G_j <= G. Each
// Phi_i is a rank(G) x (s rank(G)) integer matrix acting on the concatenated
// xs; it must be a homomorphism G^s -> G. G must be canonical.
HomSystem build_homothetic_system(const FiniteAbelianGroup& G, const std::vector<std::vector<Tuple>>& subgroups,
                                  const std::vector<IntMatrix>& phis);

struct DiagonalReport {
    bool diagonal_inside = false;  // (x, ..., x) solves for every x
    bool full_projections = false; // pi_i(diagonal) = S_i
    bool closed = false;           // solution set is a subgroup
};
DiagonalReport check_diagonal(const HomSystem& sys, std::uint64_t cap = kDefaultCap);

} // namespace hsys
