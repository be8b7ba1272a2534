#include "brent/linalg.hpp"

namespace brent {

RationalMatrix invert_exact(const RationalMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("invert_exact: matrix not square");
    const Index n = a.rows();
    RationalMatrix work = a;
    RationalMatrix inv = rational_identity(n);

    for (Index col = 0; col < n; ++col) {
        Index pivot = -1;
        for (Index r = col; r < n; ++r) {
            if (!work(r, col).is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) throw SingularMatrix("invert_exact: rank < size");
        if (pivot != col) {
            work.row(pivot).swap(work.row(col));
            inv.row(pivot).swap(inv.row(col));
        }
        const Rational scale = work(col, col).inverse();
        for (Index j = 0; j < n; ++j) {
            work(col, j) *= scale;
            inv(col, j) *= scale;
        }
        for (Index r = 0; r < n; ++r) {
            if (r == col || work(r, col).is_zero()) continue;
            const Rational f = work(r, col);
            for (Index j = 0; j < n; ++j) {
                work(r, j) -= f * work(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

bool is_generalized_permutation(const RationalMatrix& a) {
    if (a.rows() != a.cols()) return false;
    const Index n = a.rows();
    std::vector<bool> col_hit(static_cast<std::size_t>(n), false);
    for (Index i = 0; i < n; ++i) {
        Index nonzero = -1;
        for (Index j = 0; j < n; ++j) {
            if (a(i, j).is_zero()) continue;
            if (nonzero >= 0) return false;
            nonzero = j;
        }
        if (nonzero < 0) return false;
        if (col_hit[static_cast<std::size_t>(nonzero)]) return false;
        col_hit[static_cast<std::size_t>(nonzero)] = true;
    }
    return true;
}

Index dense_rank(RationalMatrix a) {
    const Index rows = a.rows();
    const Index cols = a.cols();
    Index rank = 0;
    for (Index col = 0; col < cols && rank < rows; ++col) {
        Index pivot = -1;
        for (Index r = rank; r < rows; ++r) {
            if (!a(r, col).is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        if (pivot != rank) a.row(pivot).swap(a.row(rank));
        const Rational inv = a(rank, col).inverse();
        for (Index r = rank + 1; r < rows; ++r) {
            if (a(r, col).is_zero()) continue;
            const Rational f = a(r, col) * inv;
            for (Index j = col; j < cols; ++j) a(r, j) -= f * a(rank, j);
        }
        ++rank;
    }
    return rank;
}

}  // namespace brent
