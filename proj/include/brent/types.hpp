#ifndef BRENT_TYPES_HPP
#define BRENT_TYPES_HPP

#include "brent/errors.hpp"
#include "brent/rational.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace brent {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

inline bool matrices_equal(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

inline bool matrix_is_zero(const RationalMatrix& a) {
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) return false;
    return true;
}

/// Which factor of a triad term: U multiplies the left operand, V the right,
/// W collects the products into the result.
enum class FactorRole { U, V, W };

inline const char* to_string(FactorRole role) {
    switch (role) {
        case FactorRole::U: return "U";
        case FactorRole::V: return "V";
        default: return "W";
    }
}

/// The shape triple (m,n,p) of the product (m x n) * (n x p).
struct MatMulFormat {
    int m = 1;
    int n = 1;
    int p = 1;

    MatMulFormat() = default;
    MatMulFormat(int m, int n, int p) : m(m), n(n), p(p) {
        if (m < 1 || n < 1 || p < 1)
            throw ShapeError("MatMulFormat: dimensions must be positive");
    }

    Index rows(FactorRole role) const {
        switch (role) {
            case FactorRole::U: return m;
            case FactorRole::V: return n;
            default: return p;
        }
    }
    Index cols(FactorRole role) const {
        switch (role) {
            case FactorRole::U: return n;
            case FactorRole::V: return p;
            default: return m;
        }
    }

    friend bool operator==(const MatMulFormat& a, const MatMulFormat& b) {
        return a.m == b.m && a.n == b.n && a.p == b.p;
    }
    friend bool operator!=(const MatMulFormat& a, const MatMulFormat& b) { return !(a == b); }

    std::string str() const {
        return "(" + std::to_string(m) + "," + std::to_string(n) + "," + std::to_string(p) + ")";
    }
};

/// One decomposable term u (x) v (x) w.
struct TriadTerm {
    RationalMatrix u;
    RationalMatrix v;
    RationalMatrix w;

    const RationalMatrix& factor(FactorRole role) const {
        switch (role) {
            case FactorRole::U: return u;
            case FactorRole::V: return v;
            default: return w;
        }
    }
    RationalMatrix& factor(FactorRole role) {
        switch (role) {
            case FactorRole::U: return u;
            case FactorRole::V: return v;
            default: return w;
        }
    }

    bool conforms(const MatMulFormat& f) const {
        return u.rows() == f.m && u.cols() == f.n && v.rows() == f.n && v.cols() == f.p &&
               w.rows() == f.p && w.cols() == f.m;
    }

    friend bool operator==(const TriadTerm& a, const TriadTerm& b) {
        return matrices_equal(a.u, b.u) && matrices_equal(a.v, b.v) && matrices_equal(a.w, b.w);
    }
};

/// A candidate decomposition of the matrix multiplication tensor: a format
/// plus r triad terms. Whether the terms actually sum to the tensor is
/// decided by the residual of the Brent system, not here.
struct Algorithm {
    MatMulFormat format;
    std::vector<TriadTerm> terms;

    Algorithm() = default;
    Algorithm(MatMulFormat format, std::vector<TriadTerm> terms)
        : format(format), terms(std::move(terms)) {
        if (this->terms.empty())
            throw ValueError("Algorithm: at least one term required");
        for (const TriadTerm& t : this->terms)
            if (!t.conforms(this->format))
                throw ShapeError("Algorithm: term shape does not match format " +
                                        this->format.str());
    }

    int length() const { return static_cast<int>(terms.size()); }

    friend bool operator==(const Algorithm& a, const Algorithm& b) {
        return a.format == b.format && a.terms == b.terms;
    }
};

}  // namespace brent

#endif
