#pragma once

#include <map>
#include <optional>
#include <set>

#include "hsys/equivalence.hpp"
#include "hsys/hypergraph.hpp"

namespace hsys {

// One transfer applied to a certificate. The vertex sets never change, so a
// copy (vertex map) of the current H is evaluated by reading the base labels
// and pushing them through the layers in order.
struct TransferLayer {
    MapKind kind = MapKind::OneAuto;
    EquivalenceMap map;
    HomSystem source; // system represented before this layer
    HomSystem target; // system represented after it
    // MuAuto: homogeneous solutions of source killed by the map (full tuples).
    // MuEquiv1: kernel of phi_1 in the source block group.
    std::vector<Tuple> kernel;
    std::int64_t beta = 1;
};

// Index in Q: one tuple per layer that extends Q (nested tuples).
using QIndex = std::vector<Tuple>;

struct RepresentationCertificate {
    enum class Domain { Homomorphism, Copies };
    Domain domain = Domain::Homomorphism;
    std::optional<HomSystem> system; // Homomorphism domain only
    ColoredHypergraph K, H;
    std::vector<Rational> gamma;
    Rational p = 1, c = 1, chi1 = 1, chi2 = 1;
    Int ground_size = 1; // |G|, the order of the label group
    bool strong = false; // declared; verified by verify_rp_properties
    // Rule data: labels of base_K read along base_H, then the layers.
    ColoredHypergraph base_K, base_H;
    std::vector<TransferLayer> layers;

    std::size_t m() const { return gamma.size(); }
    // lambda = c |V(K)|^s / |G|
    Rational lambda() const;
    Int q_size() const;
};

// K with vertex set G^t x [0, m): the edge {g_i, ..., g_{i+k}} colored i is
// labelled sum_j C_{i,j} g_j. Certificate: Q = {()}, p = 1, gamma = 1,
// c = (1/m)^(k+1), chi1 = m, strong.
RepresentationCertificate build_K_from_circular(const HomSystem& sys, const IntMatrix& C,
                                                std::uint64_t cap = kDefaultCap);
// Uses build_band_annihilator for C.
RepresentationCertificate build_K_from_circular(const HomSystem& sys, std::uint64_t cap = kDefaultCap);

// Copies of H0 in K0 represented by themselves: labels are edge indices,
// Q = {()}, p = c = gamma = 1, and |G| = |V(K0)|^s so that lambda = 1.
RepresentationCertificate identity_representation(const ColoredHypergraph& H0, const ColoredHypergraph& K0);

struct RpOptions {
    bool strong = true;
    // Per-(x, q) constants: checks c_{x,q} >= chi2 instead of c_{x,q} = c.
    bool tolerance = false;
    std::uint64_t cap = kDefaultCap;
    std::size_t max_counterexamples = 5;
};

struct RpReport {
    bool rp1 = false, rp2 = false, rp3 = false, rp4 = false;
    bool rp4_checked = false;
    Rational lambda_declared;
    Rational lambda_min, lambda_max; // measured |r^{-1}(x,q)| / (p prod gamma)
    Rational c_min;                  // smallest measured c_{x,q}
    std::uint64_t copies = 0;
    std::uint64_t classes = 0;
    Int expected_classes; // |S| |Q|
    Rational class_size_declared;
    std::map<std::uint64_t, std::uint64_t> class_sizes;      // size -> number of classes
    std::map<std::uint64_t, std::uint64_t> edge_copy_counts; // copies through an edge -> occurrences
    std::vector<std::string> counterexamples;
    bool ok() const;
};

// Evaluates r on one copy; nullopt when the copy does not extend to a copy
// of the base template.
struct RuleValue {
    Tuple x;
    QIndex q;
};
std::optional<RuleValue> evaluate_rule(const RepresentationCertificate& cert, const Copy& copy);

RpReport verify_rp_properties(const RepresentationCertificate& cert, const RpOptions& opt = {});

// Transfers along map: S(sys2) -> S(sys1), where sys2 is the system the
// certificate represents. Hypotheses are checked (exhaustively) and a
// PreconditionError names the failing one.
RepresentationCertificate transfer_1_auto(const RepresentationCertificate& cert, const EquivalenceMap& map,
                                          const HomSystem& sys1);
RepresentationCertificate transfer_mu_auto(const RepresentationCertificate& cert, const EquivalenceMap& map,
                                           const HomSystem& sys1);
RepresentationCertificate transfer_mu_equiv_1(const RepresentationCertificate& cert, const EquivalenceMap& map,
                                              const HomSystem& sys1);
RepresentationCertificate transfer_mu_equiv_2(const RepresentationCertificate& cert, const EquivalenceMap& map,
                                              const HomSystem& sys1);
// Dispatches on map.kind.
RepresentationCertificate transfer(const RepresentationCertificate& cert, const EquivalenceMap& map,
                                   const HomSystem& sys1);

using LabelDomains = std::vector<std::optional<std::set<Tuple>>>;

struct RemovalResult {
    bool precondition_ok = false; // E' destroys every copy of H in K_X
    std::string failure;
    std::vector<Rational> thresholds; // lambda gamma_i / m
    std::vector<std::set<Tuple>> Xprime;
    std::uint64_t remaining = 0; // |S(A, G, X \ X')|
    bool verified = false;
};

// K_X for the certificate: edges of color i labelled in X_i.
RestrictedHypergraph restrict_certificate(const RepresentationCertificate& cert, const LabelDomains& X);

// Deletion rule: x enters X'_i when E' holds at least lambda gamma_i / m edges
// colored i labelled x. eprime indexes the edges of restrict_certificate(cert, X).
RemovalResult removal_deletion(const RepresentationCertificate& cert, const LabelDomains& X,
                               const std::vector<std::size_t>& eprime, std::uint64_t cap = kDefaultCap);

} // namespace hsys
