#ifndef BRENT_STRUCTURE_HPP
#define BRENT_STRUCTURE_HPP

#include "brent/rank.hpp"
#include "brent/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace brent {

/// Square matrix whose column j is the vectorization of a chosen factor;
/// invertible whenever the factors span (Lemma-level property of solutions).
struct BasisMatrix {
    FactorRole role = FactorRole::U;
    RationalMatrix matrix;
    std::vector<Index> source_terms;
};

/// Greedy-leftmost maximal independent factor subset in term order.
/// DeficientSpan if the factors do not span their matrix space.
BasisMatrix basis_matrix(const Algorithm& q, FactorRole role);

/// Splits a as U_m ⊗ U_n for the given block sizes, or nothing. The scalar
/// freedom is fixed by anchoring U_n to the first nonzero block of a.
std::optional<std::pair<RationalMatrix, RationalMatrix>> kron_factorize(
    const RationalMatrix& a, int m, int n);

enum class ContainmentMode { literal, up_to_scalar };

/// Does every unit matrix of the role's shape occur among the role's factors?
bool unit_basis_containment(const Algorithm& q, FactorRole role,
                            ContainmentMode mode = ContainmentMode::literal);

enum class DPropertyStatus {
    proven_yes,
    proven_no_for_canonical_basis,
    unknown,
};

std::string to_string(DPropertyStatus s);

struct DPropertyWitness {
    RationalMatrix a;
    RationalMatrix b;
};

struct DPropertyVerdict {
    DPropertyStatus status = DPropertyStatus::unknown;
    std::optional<DPropertyWitness> witness;
};

/// Checks {e_ij} ⊆ {a · u_i · b^{-1}} exactly over the role's factors.
bool verify_d_witness(const Algorithm& q, FactorRole role, const RationalMatrix& a,
                      const RationalMatrix& b);

/// Sound three-state decision for one factor family. proven_yes always
/// carries a verified witness. DeficientSpan if the factors do not span.
DPropertyVerdict d_property_check(const Algorithm& q, FactorRole role);

/// Algorithm-level aggregation: two of the three roles suffice.
DPropertyVerdict d_property_check(const Algorithm& q);

/// Exact decision via the support partition: factors supported only in the
/// first row against factors vanishing there.
bool weak_d_check(const Algorithm& q, FactorRole role);

/// All three roles.
bool weak_d_check(const Algorithm& q);

struct BoundReport {
    MatMulFormat format{1, 1, 1};
    int r = 0;
    Index k = 0;
    Index rank = 0;
    RankMethod rank_method = RankMethod::exact;
    Index u = 0;
    Index l = 0;
    Index l_prime = 0;
    Index l_dprime = 0;
    Index g = 0;
    Index g_prime = 0;
    Index g_dprime = 0;
    DPropertyStatus d_property = DPropertyStatus::unknown;
    bool weak_d = false;
    /// l and its gaps bind only when the D-property or weak-D-property holds.
    bool lower_bounds_valid = false;
    /// u < l'' would contradict the conditional bound; flagged for review.
    bool anomaly = false;
};

/// Upper bound u = k - rank against the conditional lower bounds
/// l = m²+n²+p²-m-n-p-3, l' = l+2r, l'' = m²+n²+p²+2r-3.
BoundReport bound_report(const Algorithm& q, const RankResult& rank);

std::string bound_report_to_json(const BoundReport& report);
std::string d_property_verdict_to_json(const DPropertyVerdict& verdict);

}  // namespace brent

#endif
