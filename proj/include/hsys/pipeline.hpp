#pragma once

#include <optional>
#include <string>
#include <utility>

#include "hsys/equivalence.hpp"

namespace hsys {

// One system produced by a stage together with the map from its solutions
// onto the solutions of the previous stage.
struct StageResult {
    HomSystem system;
    EquivalenceMap map;
    std::string notes;
};

struct DehomogenizeResult {
    bool has_solution = false;
    std::optional<StageResult> stage;
    Tuple particular;
};

// Shift by the lexicographically least particular solution.
DehomogenizeResult dehomogenize(const HomSystem& sys);
// Homocyclic Z_n^t with n the exponent of G; row p multiplied by n / n_p.
StageResult lift_to_homocyclic(const HomSystem& sys);
// Drops integer-redundant equations (homocyclic, homogeneous input).
StageResult remove_redundant_rows(const HomSystem& sys);
// Zero columns become columns of n; a rank-deficient matrix gets n^e added
// on the diagonal of its leading square block.
StageResult repair_degenerate(const HomSystem& sys);

struct RowReduceStage {
    StageResult stage;
    std::vector<Int> divisors;
};
// A1 = U A with row contents equal to the Smith diagonal.
RowReduceStage row_reduce_stage(const HomSystem& sys);
// (A2 | diag(n / gcd(n, d_r))) from a gcd-normalized A1.
StageResult simulate_independent_vectors(const HomSystem& a1, const std::vector<Int>& divisors);
// (I_{tm} | B) via a determinant-one extension of the leading part.
StageResult determinantal_to_identity(const HomSystem& a3, std::size_t m_original);

struct BlockReduction {
    StageResult stage;
    // d[i][j]: content of row j of block row i of B.
    std::vector<std::vector<Int>> divisors;
    IntMatrix B2; // rows divided by their contents
};
BlockReduction block_row_reduce(const HomSystem& a5);

struct SplitComponent {
    std::pair<std::size_t, std::size_t> kappa; // (1,0) or (i,j), 1-based
    std::int64_t order = 1;                    // |G_kappa|
    HomSystem J;                               // over Z_order^t
    // J -> A6 read over Z_order^t (the subgroup of Z_n^t of the paper's
    // maps, up to the embedding y -> (n / order) y).
    EquivalenceMap f;
    HomSystem Jbar;
    EquivalenceMap circ; // Jbar -> J
};

std::vector<SplitComponent> split_to_J_systems(const HomSystem& a6, const BlockReduction& br);
// A6 over Z_order^t, the target of a component's f map.
HomSystem restrict_to_subgroup(const HomSystem& a6, std::int64_t order);

// Circular extension of an (I | B) system over Z_g^t whose t-row blocks of
// B have determinantal coprime to n.
StageResult circularize(const HomSystem& j, std::int64_t n);

// Interleaves the circular systems; map onto A6 over Z_n^t.
StageResult join_systems(const std::vector<SplitComponent>& parts, const HomSystem& a6,
                         const std::vector<std::vector<Int>>& divisors);

struct TraceStage {
    std::string label;
    HomSystem system;
    std::optional<EquivalenceMap> map; // none for the input stage
    std::string notes;
    std::optional<EquivalenceReport> report;
};

struct PipelineTrace {
    std::vector<TraceStage> stages;
    bool no_solution = false;
    bool final_is_circular = false;
    std::int64_t n = 0;
    std::vector<SplitComponent> upsilon;
    std::vector<std::vector<Int>> divisors;
    std::vector<EquivalenceReport> split_reports, circ_reports;
    Int total_mu = 1;

    bool certified() const;
    bool exhaustive() const;
};

struct PipelineOptions {
    bool certify = true;
    bool constancy = false; // hypothesis check for the join map
    VerifyOptions verify;
};

PipelineTrace run_full_pipeline(const HomSystem& sys, const PipelineOptions& opt = {});
// Composite of all stage maps: final solutions onto input solutions.
EquivalenceMap composite_map(const PipelineTrace& trace);

struct PartitionReport {
    bool holds = false;
    std::vector<Int> divisors;
    std::uint64_t pieces = 0;       // number of b in prod P_{d_i}(G)
    std::uint64_t total = 0;        // sum of |S(A2, b, G)|
    std::uint64_t solutions = 0;    // |S(A, G)|
    bool disjoint = false;
    std::string failure;
};

// S(A, G) as the disjoint union of S(A2, b, G) over b in prod P_{d_i}(G),
// for a scalar matrix A acting on G^m.
PartitionReport check_partition(const IntMatrix& a, const FiniteAbelianGroup& g, std::uint64_t cap = kDefaultCap);

} // namespace hsys
