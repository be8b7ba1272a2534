#include "brent/algorithms.hpp"

#include <array>

namespace brent {

namespace {

RationalMatrix unit_matrix(Index rows, Index cols, Index i, Index j) {
    RationalMatrix e = RationalMatrix::Zero(rows, cols);
    e(i, j) = Rational(1);
    return e;
}

RationalMatrix from_ints(std::array<std::array<int, 2>, 2> rows) {
    RationalMatrix out(2, 2);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j) out(i, j) = Rational(rows[i][j]);
    return out;
}

}  // namespace

Algorithm natural_algorithm(const MatMulFormat& format) {
    std::vector<TriadTerm> terms;
    terms.reserve(static_cast<std::size_t>(format.m) * format.n * format.p);
    for (int i = 0; i < format.m; ++i)
        for (int j = 0; j < format.n; ++j)
            for (int k = 0; k < format.p; ++k)
                terms.push_back({unit_matrix(format.m, format.n, i, j),
                                 unit_matrix(format.n, format.p, j, k),
                                 unit_matrix(format.p, format.m, k, i)});
    return Algorithm(format, std::move(terms));
}

Algorithm builtin_strassen() {
    // Classical seven products. u holds the left-operand coefficients, v the
    // right-operand coefficients, and w(k,i) the coefficient of the product
    // in result entry (i,k).
    std::vector<TriadTerm> terms;
    // (A11+A22)(B11+B22) -> C11, C22
    terms.push_back({from_ints({{{1, 0}, {0, 1}}}), from_ints({{{1, 0}, {0, 1}}}),
                     from_ints({{{1, 0}, {0, 1}}})});
    // (A21+A22)B11 -> C21, -C22
    terms.push_back({from_ints({{{0, 0}, {1, 1}}}), from_ints({{{1, 0}, {0, 0}}}),
                     from_ints({{{0, 1}, {0, -1}}})});
    // A11(B12-B22) -> C12, C22
    terms.push_back({from_ints({{{1, 0}, {0, 0}}}), from_ints({{{0, 1}, {0, -1}}}),
                     from_ints({{{0, 0}, {1, 1}}})});
    // A22(B21-B11) -> C11, C21
    terms.push_back({from_ints({{{0, 0}, {0, 1}}}), from_ints({{{-1, 0}, {1, 0}}}),
                     from_ints({{{1, 1}, {0, 0}}})});
    // (A11+A12)B22 -> -C11, C12
    terms.push_back({from_ints({{{1, 1}, {0, 0}}}), from_ints({{{0, 0}, {0, 1}}}),
                     from_ints({{{-1, 0}, {1, 0}}})});
    // (A21-A11)(B11+B12) -> C22
    terms.push_back({from_ints({{{-1, 0}, {1, 0}}}), from_ints({{{1, 1}, {0, 0}}}),
                     from_ints({{{0, 0}, {0, 1}}})});
    // (A12-A22)(B21+B22) -> C11
    terms.push_back({from_ints({{{0, 1}, {0, -1}}}), from_ints({{{0, 0}, {1, 1}}}),
                     from_ints({{{1, 0}, {0, 0}}})});
    return Algorithm(MatMulFormat(2, 2, 2), std::move(terms));
}

}  // namespace brent
