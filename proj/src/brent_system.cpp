#include "brent/brent_system.hpp"

#include "brent/errors.hpp"

#include <algorithm>
#include <sstream>

namespace brent {

SparseRationalMatrix SparseRationalMatrix::from_triplets(Index rows, Index cols,
                                                         std::vector<Triplet> triplets) {
    for (const Triplet& t : triplets)
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
            throw ShapeError("SparseRationalMatrix: triplet index out of range");
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseRationalMatrix out(rows, cols);
    out.triplets_.reserve(triplets.size());
    for (Triplet& t : triplets) {
        if (!out.triplets_.empty() && out.triplets_.back().row == t.row &&
            out.triplets_.back().col == t.col) {
            out.triplets_.back().value += t.value;
            if (out.triplets_.back().value.is_zero()) out.triplets_.pop_back();
        } else if (!t.value.is_zero()) {
            out.triplets_.push_back(std::move(t));
        }
    }
    // A merge can zero an entry that a later duplicate then re-extends; the
    // single pass above already handles that because duplicates are adjacent
    // after the sort.
    return out;
}

SparseRationalMatrix SparseRationalMatrix::from_dense(const RationalMatrix& dense) {
    SparseRationalMatrix out(dense.rows(), dense.cols());
    for (Index i = 0; i < dense.rows(); ++i)
        for (Index j = 0; j < dense.cols(); ++j)
            if (!dense(i, j).is_zero()) out.triplets_.push_back({i, j, dense(i, j)});
    return out;
}

RationalMatrix SparseRationalMatrix::to_dense() const {
    RationalMatrix out = RationalMatrix::Zero(rows_, cols_);
    for (const Triplet& t : triplets_) out(t.row, t.col) = t.value;
    return out;
}

Eigen::MatrixXd SparseRationalMatrix::to_double() const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows_, cols_);
    for (const Triplet& t : triplets_) out(t.row, t.col) = t.value.to_double();
    return out;
}

bool operator==(const SparseRationalMatrix& a, const SparseRationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.triplets_ == b.triplets_;
}

std::string to_matrix_market(const SparseRationalMatrix& a) {
    std::ostringstream os;
    os << "%%MatrixMarket matrix coordinate rational general\n";
    os << a.rows() << " " << a.cols() << " " << a.nonzero_count() << "\n";
    for (const auto& t : a.triplets())
        os << (t.row + 1) << " " << (t.col + 1) << " " << t.value.str() << "\n";
    return os.str();
}

BrentSystem::BrentSystem(const MatMulFormat& format, int r) : format_(format), r_(r) {
    if (r < 1) throw ValueError("BrentSystem: r must be positive");
    const Index mnp = Index(format.m) * format.n * format.p;
    equation_count_ = mnp * mnp;
    variable_count_ =
        Index(format.m * format.n + format.n * format.p + format.p * format.m) * r;
}

Index BrentSystem::equation_index(int i1, int i2, int j1, int j2, int k1, int k2) const {
    const int m = format_.m, n = format_.n, p = format_.p;
    return ((((Index(i1) * n + i2) * n + j1) * p + j2) * p + k1) * m + k2;
}

std::array<int, 6> BrentSystem::equation_tuple(Index e) const {
    const int m = format_.m, n = format_.n, p = format_.p;
    std::array<int, 6> t;
    t[5] = static_cast<int>(e % m);
    e /= m;
    t[4] = static_cast<int>(e % p);
    e /= p;
    t[3] = static_cast<int>(e % p);
    e /= p;
    t[2] = static_cast<int>(e % n);
    e /= n;
    t[1] = static_cast<int>(e % n);
    e /= n;
    t[0] = static_cast<int>(e);
    return t;
}

Index BrentSystem::variable_index(FactorRole role, int term, int row, int col) const {
    const Index mn = Index(format_.m) * format_.n;
    const Index np = Index(format_.n) * format_.p;
    const Index pm = Index(format_.p) * format_.m;
    switch (role) {
        case FactorRole::U:
            return Index(term) * mn + Index(row) * format_.n + col;
        case FactorRole::V:
            return r_ * mn + Index(term) * np + Index(row) * format_.p + col;
        default:
            return r_ * (mn + np) + Index(term) * pm + Index(row) * format_.m + col;
    }
}

BrentSystem::VariableKey BrentSystem::variable_key(Index v) const {
    const Index mn = Index(format_.m) * format_.n;
    const Index np = Index(format_.n) * format_.p;
    const Index pm = Index(format_.p) * format_.m;
    if (v < r_ * mn) {
        return {FactorRole::U, static_cast<int>(v / mn), static_cast<int>((v % mn) / format_.n),
                static_cast<int>((v % mn) % format_.n)};
    }
    v -= r_ * mn;
    if (v < r_ * np) {
        return {FactorRole::V, static_cast<int>(v / np), static_cast<int>((v % np) / format_.p),
                static_cast<int>((v % np) % format_.p)};
    }
    v -= r_ * np;
    return {FactorRole::W, static_cast<int>(v / pm), static_cast<int>((v % pm) / format_.m),
            static_cast<int>((v % pm) % format_.m)};
}

Rational BrentSystem::rhs(Index e) const {
    const auto [i1, i2, j1, j2, k1, k2] = equation_tuple(e);
    return (i2 == j1 && j2 == k1 && k2 == i1) ? Rational(1) : Rational(0);
}

void BrentSystem::check_conforms(const Algorithm& q) const {
    if (q.format != format_ || q.length() != r_)
        throw DimensionMismatch("BrentSystem: algorithm does not match system shape");
}

ResidualVector BrentSystem::residual(const Algorithm& q) const {
    check_conforms(q);
    ResidualVector out = ResidualVector::Zero(equation_count_);
    const int m = format_.m, n = format_.n, p = format_.p;
    for (const TriadTerm& t : q.terms) {
        for (int i1 = 0; i1 < m; ++i1)
            for (int i2 = 0; i2 < n; ++i2) {
                const Rational& u = t.u(i1, i2);
                if (u.is_zero()) continue;
                for (int j1 = 0; j1 < n; ++j1)
                    for (int j2 = 0; j2 < p; ++j2) {
                        const Rational& v = t.v(j1, j2);
                        if (v.is_zero()) continue;
                        const Rational uv = u * v;
                        for (int k1 = 0; k1 < p; ++k1)
                            for (int k2 = 0; k2 < m; ++k2) {
                                const Rational& w = t.w(k1, k2);
                                if (w.is_zero()) continue;
                                out(equation_index(i1, i2, j1, j2, k1, k2)) += uv * w;
                            }
                    }
            }
    }
    for (int i1 = 0; i1 < m; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
            for (int j2 = 0; j2 < p; ++j2)
                out(equation_index(i1, i2, i2, j2, j2, i1)) -= Rational(1);
    return out;
}

SparseRationalMatrix BrentSystem::jacobian(const Algorithm& q) const {
    check_conforms(q);
    std::vector<SparseRationalMatrix::Triplet> triplets;
    for (Index e = 0; e < equation_count_; ++e) {
        const auto [i1, i2, j1, j2, k1, k2] = equation_tuple(e);
        for (int l = 0; l < r_; ++l) {
            const TriadTerm& t = q.terms[static_cast<std::size_t>(l)];
            const Rational& u = t.u(i1, i2);
            const Rational& v = t.v(j1, j2);
            const Rational& w = t.w(k1, k2);
            if (!v.is_zero() && !w.is_zero())
                triplets.push_back({e, variable_index(FactorRole::U, l, i1, i2), v * w});
            if (!u.is_zero() && !w.is_zero())
                triplets.push_back({e, variable_index(FactorRole::V, l, j1, j2), u * w});
            if (!u.is_zero() && !v.is_zero())
                triplets.push_back({e, variable_index(FactorRole::W, l, k1, k2), u * v});
        }
    }
    return SparseRationalMatrix::from_triplets(equation_count_, variable_count_,
                                               std::move(triplets));
}

ResidualVector residual(const Algorithm& q) {
    return BrentSystem(q.format, q.length()).residual(q);
}

bool is_solution(const Algorithm& q) {
    const ResidualVector res = residual(q);
    for (Index i = 0; i < res.size(); ++i)
        if (!res(i).is_zero()) return false;
    return true;
}

SparseRationalMatrix jacobian(const Algorithm& q) {
    return BrentSystem(q.format, q.length()).jacobian(q);
}

}  // namespace brent
