#ifndef BRENT_LINALG_HPP
#define BRENT_LINALG_HPP

#include "brent/errors.hpp"
#include "brent/types.hpp"

#include <Eigen/Dense>

namespace brent {

/// Flattens a matrix row by row into a column vector; coordinate
/// (i-1)*cols + j holds entry (i,j) in 1-based terms.
template <typename Derived>
RationalVector vectorize_rowwise(const Eigen::MatrixBase<Derived>& x) {
    RationalVector out(x.rows() * x.cols());
    Index k = 0;
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = 0; j < x.cols(); ++j) out(k++) = x(i, j);
    return out;
}

/// Inverse of vectorize_rowwise for the given shape.
inline RationalMatrix unvectorize_rowwise(const RationalVector& v, Index rows, Index cols) {
    if (v.size() != rows * cols)
        throw DimensionMismatch("unvectorize_rowwise: size does not match shape");
    RationalMatrix out(rows, cols);
    Index k = 0;
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) out(i, j) = v(k++);
    return out;
}

/// Block matrix (a_ij * b). Defined for any rectangular operands; the square
/// case is the one the group actions use.
template <typename DerivedA, typename DerivedB>
RationalMatrix kron_product(const Eigen::MatrixBase<DerivedA>& a,
                            const Eigen::MatrixBase<DerivedB>& b) {
    RationalMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            for (Index k = 0; k < b.rows(); ++k)
                for (Index l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

inline RationalMatrix rational_identity(Index n) {
    RationalMatrix out = RationalMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) out(i, i) = Rational(1);
    return out;
}

/// Exact inverse by Gauss-Jordan elimination over the rationals.
/// Throws SingularMatrix when elimination finds rank < size.
RationalMatrix invert_exact(const RationalMatrix& a);

/// True iff the matrix has exactly one nonzero entry in every row and every
/// column (a permutation matrix times a nonsingular diagonal).
bool is_generalized_permutation(const RationalMatrix& a);

/// Exact rank of a dense rational matrix by ordinary Gaussian elimination.
/// Intended for the small matrices inside basis selection and property
/// checks; the rank engine has the heavy-duty paths.
Index dense_rank(RationalMatrix a);

}  // namespace brent

#endif
