#ifndef BRENT_RANK_HPP
#define BRENT_RANK_HPP

#include "brent/brent_system.hpp"
#include "brent/types.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace brent {

enum class RankMethod { exact, modular, numeric };

std::string to_string(RankMethod m);
RankMethod rank_method_from_string(const std::string& name);

/// Pivot columns of the row echelon form, equivalently the greedy leftmost
/// maximal independent column subset.
struct ExactCertificate {
    std::vector<Index> pivot_columns;
};

struct ModularCertificate {
    std::vector<std::uint64_t> primes;
    std::vector<Index> per_prime_ranks;
};

struct NumericCertificate {
    std::vector<double> spectrum;
    double tolerance = 0.0;
    /// sigma_rank / sigma_{rank+1}; infinity when nothing falls below the cut.
    double gap_ratio = 0.0;
};

struct RankResult {
    Index rank = 0;
    RankMethod method = RankMethod::exact;
    std::variant<ExactCertificate, ModularCertificate, NumericCertificate> certificate;
};

struct TolerancePolicy {
    enum class Mode { automatic, fixed };
    Mode mode = Mode::automatic;
    double fixed_value = 0.0;

    static TolerancePolicy automatic() { return {}; }
    static TolerancePolicy fixed(double value) { return {Mode::fixed, value}; }
};

/// Fraction-free elimination over the integers after clearing denominators
/// row by row. Exact for any rational matrix.
RankResult rank_exact(const SparseRationalMatrix& a);
RankResult rank_exact(const RationalMatrix& a);

/// Rank modulo prime_count random word-size primes, reported as the maximum.
/// Primes dividing a denominator are resampled; DenominatorClash if none of
/// the attempts avoid every denominator.
RankResult rank_modular(const SparseRationalMatrix& a, int prime_count,
                        std::uint64_t seed);
RankResult rank_modular(const RationalMatrix& a, int prime_count, std::uint64_t seed);

/// Singular values above the tolerance, computed in double precision.
RankResult rank_numeric(const SparseRationalMatrix& a,
                        TolerancePolicy tol = TolerancePolicy::automatic());
RankResult rank_numeric(const Eigen::MatrixXd& a,
                        TolerancePolicy tol = TolerancePolicy::automatic());

/// Greedy leftmost maximal independent column subset; size equals the rank.
std::vector<Index> column_basis(const SparseRationalMatrix& a);
std::vector<Index> column_basis(const RationalMatrix& a);

}  // namespace brent

#endif
