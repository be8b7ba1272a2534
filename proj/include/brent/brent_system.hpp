#ifndef BRENT_BRENT_SYSTEM_HPP
#define BRENT_BRENT_SYSTEM_HPP

#include "brent/types.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace brent {

/// Triplet-form sparse matrix over the rationals. Triplets are kept sorted
/// row-major with no duplicates and no explicit zeros.
class SparseRationalMatrix {
public:
    struct Triplet {
        Index row;
        Index col;
        Rational value;
    };

    SparseRationalMatrix() = default;
    SparseRationalMatrix(Index rows, Index cols) : rows_(rows), cols_(cols) {}

    /// Sorts row-major, sums duplicates, drops zeros, checks index ranges.
    static SparseRationalMatrix from_triplets(Index rows, Index cols,
                                              std::vector<Triplet> triplets);

    static SparseRationalMatrix from_dense(const RationalMatrix& dense);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    const std::vector<Triplet>& triplets() const { return triplets_; }
    std::size_t nonzero_count() const { return triplets_.size(); }

    RationalMatrix to_dense() const;
    Eigen::MatrixXd to_double() const;

    friend bool operator==(const SparseRationalMatrix& a, const SparseRationalMatrix& b);

private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<Triplet> triplets_;
};

inline bool operator==(const SparseRationalMatrix::Triplet& a,
                       const SparseRationalMatrix::Triplet& b) {
    return a.row == b.row && a.col == b.col && a.value == b.value;
}

/// MatrixMarket coordinate text with 1-based indices and entries written as
/// "num/den" (or "num" for integers).
std::string to_matrix_market(const SparseRationalMatrix& a);

using ResidualVector = RationalVector;

/// Index maps for the (mnp)^2 Brent equations in (mn+np+pm)r variables.
///
/// Equations are ranked lexicographically over (i1,i2,j1,j2,k1,k2) with
/// ranges (m,n,n,p,p,m), last coordinate fastest. Variables come in three
/// blocks - all u entries first, then v, then w - each block term-major with
/// entries row-major.
class BrentSystem {
public:
    BrentSystem(const MatMulFormat& format, int r);

    const MatMulFormat& format() const { return format_; }
    int r() const { return r_; }

    Index equation_count() const { return equation_count_; }
    Index variable_count() const { return variable_count_; }

    /// All coordinates 0-based.
    Index equation_index(int i1, int i2, int j1, int j2, int k1, int k2) const;
    std::array<int, 6> equation_tuple(Index e) const;

    Index variable_index(FactorRole role, int term, int row, int col) const;
    struct VariableKey {
        FactorRole role;
        int term;
        int row;
        int col;
    };
    VariableKey variable_key(Index v) const;

    /// Kronecker-delta right-hand side of the equation.
    Rational rhs(Index e) const;

    ResidualVector residual(const Algorithm& q) const;
    SparseRationalMatrix jacobian(const Algorithm& q) const;

private:
    void check_conforms(const Algorithm& q) const;

    MatMulFormat format_;
    int r_;
    Index equation_count_;
    Index variable_count_;
};

inline BrentSystem build_system(const MatMulFormat& format, int r) {
    return BrentSystem(format, r);
}

/// Residual of q under the Brent system implied by its format and length.
ResidualVector residual(const Algorithm& q);

/// Exact test: true iff the residual vanishes identically.
bool is_solution(const Algorithm& q);

/// Exact sparse Jacobian of the Brent system at q.
SparseRationalMatrix jacobian(const Algorithm& q);

}  // namespace brent

#endif
