#ifndef BRENT_SYMMETRY_HPP
#define BRENT_SYMMETRY_HPP

#include "brent/linalg.hpp"
#include "brent/rank.hpp"
#include "brent/types.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace brent {

/// T(a,b,c): term-wise (u,v,w) -> (a u b^{-1}, b v c^{-1}, c w a^{-1}).
struct Sandwich {
    RationalMatrix a;
    RationalMatrix b;
    RationalMatrix c;

    /// Validates invertibility of all three matrices.
    Sandwich(RationalMatrix a, RationalMatrix b, RationalMatrix c);
};

/// Per-term (λ_i, μ_i): u_i -> λ_i u_i, v_i -> μ_i v_i, w_i -> (λ_i μ_i)^{-1} w_i.
struct TermScale {
    std::vector<std::pair<Rational, Rational>> scales;

    explicit TermScale(std::vector<std::pair<Rational, Rational>> scales);
};

/// Reorders terms: output slot i receives input term sigma[i] (0-based).
struct TermPermutation {
    std::vector<int> sigma;

    explicit TermPermutation(std::vector<int> sigma);
};

/// The six triad maps. Odd elements transpose every factor.
///
///   cyclic              (u,v,w) -> (v,w,u)        (m,n,p) -> (n,p,m)
///   cyclic_sq           (u,v,w) -> (w,u,v)        (m,n,p) -> (p,m,n)
///   transpose           (u,v,w) -> (vᵀ,uᵀ,wᵀ)     (m,n,p) -> (p,n,m)
///   transpose_cyclic    (u,v,w) -> (wᵀ,vᵀ,uᵀ)     (m,n,p) -> (m,p,n)
///   transpose_cyclic_sq (u,v,w) -> (uᵀ,wᵀ,vᵀ)     (m,n,p) -> (n,m,p)
struct TriadSymmetry {
    enum class Kind {
        identity,
        cyclic,
        cyclic_sq,
        transpose,
        transpose_cyclic,
        transpose_cyclic_sq,
    };
    Kind kind = Kind::identity;
};

std::string to_string(TriadSymmetry::Kind k);
TriadSymmetry::Kind triad_kind_from_string(const std::string& name);

using GroupElement = std::variant<Sandwich, TermScale, TermPermutation, TriadSymmetry>;

/// Applies the action; TriadSymmetry may return an Algorithm in a permuted
/// format. Solutions map to solutions for every variant.
Algorithm apply_element(const GroupElement& g, const Algorithm& q);

/// Same-variant composition with apply(compose(g,h), q) = apply(g, apply(h, q)).
GroupElement compose(const GroupElement& g, const GroupElement& h);

GroupElement invert(const GroupElement& g);

enum class TermEquality {
    /// Term triples compared entry by entry.
    raw,
    /// Term triples compared as decomposable tensors u ⊗ v ⊗ w.
    tensor,
};

/// True iff g maps q to itself as a multiset of terms.
bool fixes_algorithm(const GroupElement& g, const Algorithm& q,
                     TermEquality mode = TermEquality::tensor);

struct OrbitSample {
    std::string element;
    Index rank = 0;
};

struct OrbitExperimentReport {
    Index base_rank = 0;
    std::vector<OrbitSample> samples;
    bool all_equal = true;
};

/// Transforms q by random sandwiches and recomputes the Jacobian rank each
/// time. Reports only; rank invariance across the orbit is not asserted.
OrbitExperimentReport orbit_rank_experiment(const Algorithm& q, int samples,
                                            std::uint64_t seed,
                                            RankMethod method = RankMethod::modular);

/// Random invertible matrices with entries in [-3,3], one per side.
Sandwich random_sandwich(std::mt19937_64& rng, const MatMulFormat& format);
TermScale random_term_scale(std::mt19937_64& rng, int r);
TermPermutation random_term_permutation(std::mt19937_64& rng, int r);

/// JSON text with a variant tag; matrices, scalars, and permutations are
/// carried as rational strings and 1-based index arrays.
std::string group_element_to_json(const GroupElement& g);
GroupElement group_element_from_json(const std::string& text);

}  // namespace brent

#endif
