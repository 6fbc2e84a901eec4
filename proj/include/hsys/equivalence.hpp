#pragma once

#include <map>
#include <string>

#include "hsys/system.hpp"

namespace hsys {

enum class MapKind { OneAuto, MuAuto, MuEquiv1, MuEquiv2, RowReduce, Split, Join };

std::string to_string(MapKind kind);
MapKind map_kind_from_string(const std::string& s);

// x_i = linear * y + shift, read in the target block group.
struct AffineMap {
    IntMatrix linear;
    Tuple shift;
};

// Coordinatewise map S(sys2) -> S(sys1): block variable i of sys1 is
// affines[i] applied to block variable sigma[i] of sys2 (0-based).
struct EquivalenceMap {
    std::vector<std::size_t> sigma;
    std::vector<AffineMap> affines;
    Int mu = 1;
    MapKind kind = MapKind::OneAuto;
};

EquivalenceMap identity_map(std::size_t m, std::size_t t, MapKind kind = MapKind::OneAuto);
// Keeps the listed block variables unchanged.
EquivalenceMap projection_map(const std::vector<std::size_t>& sigma, std::size_t t, const Int& mu,
                              MapKind kind = MapKind::MuAuto);
// outer: S2 -> S1, inner: S3 -> S2; result S3 -> S1.
EquivalenceMap compose(const EquivalenceMap& outer, const EquivalenceMap& inner);

// Image of a solution of the source system, reduced in the target group.
Tuple apply_map(const EquivalenceMap& map, const FiniteAbelianGroup& target, const Tuple& y);
Tuple apply_coordinate(const AffineMap& f, const FiniteAbelianGroup& target, const Tuple& v);

struct EquivalenceReport {
    bool exhaustive = false;
    bool lands_in = false;
    bool surjective = false;
    bool uniform = false;
    bool counts_match = false;
    Int mu_declared, mu_observed;
    Int source_count, target_count;
    // fiber size -> number of targets with that fiber size
    std::map<Int, Int> fiber_histogram;
    // Per coordinate i of the target: for every x, the number of preimages
    // with a fixed value of y_sigma(i) is the same for all values in
    // phi_i^{-1}(x_i). Empty when not checked.
    std::vector<bool> constancy;
    std::uint64_t probes = 0;
    std::string failure;

    bool ok() const;
};

struct VerifyOptions {
    std::uint64_t cap = kDefaultCap;
    std::uint64_t probes = 10000;
    std::uint64_t seed = 1;
    bool constancy = false;
};

// Certifies map: S(sys2) -> S(sys1). Exhaustive when |S(sys2)| <= cap,
// otherwise random probes plus the exact count identity.
EquivalenceReport verify_equivalence(const EquivalenceMap& map, const HomSystem& sys1, const HomSystem& sys2,
                                     const VerifyOptions& opt = {});

} // namespace hsys
