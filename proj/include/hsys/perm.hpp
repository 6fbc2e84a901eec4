#pragma once

#include <string>

#include "hsys/hypergraph.hpp"

namespace hsys {

// Bijection on [0, n).
struct Permutation {
    std::vector<std::size_t> values;

    std::size_t size() const { return values.size(); }
    static Permutation identity(std::size_t n);
    // Whitespace separated values, e.g. "2 0 1".
    static Permutation parse(const std::string& text);
    // Throws InvalidInput unless values is a bijection on [0, n).
    void validate() const;
    std::string str() const;
};

// All permutations of [0, n) in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t n);

enum PatternColor : std::size_t { Blue = 0, Red = 1 };

// Tournament on [0, n): edge i -> j iff sigma(i) < sigma(j), blue when i < j
// and red otherwise.
ColoredHypergraph build_pattern_digraph(const Permutation& sigma);

// Index sets x_0 < ... < x_{m-1} on which sigma is order-isomorphic to tau,
// in lexicographic order. Throws PreconditionError when m > n.
std::vector<std::vector<std::size_t>> occurrences(const Permutation& tau, const Permutation& sigma,
                                                  std::uint64_t cap = kDefaultCap);

struct OccurrenceReport {
    std::uint64_t copies = 0;
    std::uint64_t occurrences = 0;
    bool monotone = true; // every copy maps 0 < 1 < ... increasingly
    bool rigid = true;    // one copy per occurrence set
    bool match = false;   // image sets of the copies = occurrences
    std::vector<std::string> mismatches;
    bool ok() const { return monotone && rigid && match; }
};

// Copies of G_tau in G_sigma against the occurrence list.
OccurrenceReport copies_match_occurrences(const Permutation& tau, const Permutation& sigma,
                                          std::uint64_t cap = kDefaultCap);

// Heuristic deletion: a greedy set of index pairs (i < j) meeting every
// occurrence of tau in sigma.
struct PairDeletion {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::uint64_t occurrences_before = 0;
    std::uint64_t occurrences_after = 0; // occurrences avoiding every deleted pair
};
PairDeletion greedy_pair_deletion(const Permutation& tau, const Permutation& sigma, std::uint64_t cap = kDefaultCap);

} // namespace hsys
