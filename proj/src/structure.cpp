#include "brent/structure.hpp"

#include "brent/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

namespace brent {

namespace {

RationalMatrix stacked_factors(const Algorithm& q, FactorRole role) {
    const Index rows = q.format.rows(role) * q.format.cols(role);
    RationalMatrix f(rows, q.length());
    for (int t = 0; t < q.length(); ++t) f.col(t) = vectorize_rowwise(q.terms[t].factor(role));
    return f;
}

RationalMatrix unit_matrix(Index rows, Index cols, Index i, Index j) {
    RationalMatrix e(rows, cols);
    e.setZero();
    e(i, j) = Rational(1);
    return e;
}

/// Scalar c with f == c * e_ij, or zero when f is not such a multiple.
Rational scaled_unit_at(const RationalMatrix& f, Index i, Index j) {
    if (f(i, j).is_zero()) return Rational(0);
    for (Index r = 0; r < f.rows(); ++r)
        for (Index c = 0; c < f.cols(); ++c)
            if (!(r == i && c == j) && !f(r, c).is_zero()) return Rational(0);
    return f(i, j);
}

using SupportKey = std::pair<std::vector<Index>, std::vector<Index>>;

std::vector<Index> sorted_columns(const RationalMatrix& mat,
                                  const std::function<SupportKey(Index)>& key) {
    std::vector<Index> order(static_cast<std::size_t>(mat.cols()));
    std::iota(order.begin(), order.end(), Index(0));
    std::vector<SupportKey> keys;
    keys.reserve(order.size());
    for (Index c = 0; c < mat.cols(); ++c) keys.push_back(key(c));
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
        return keys[static_cast<std::size_t>(x)] < keys[static_cast<std::size_t>(y)];
    });
    return order;
}

/// Column orderings worth trying before giving up on a Kronecker split:
/// as selected, by vectorized support, and by factor support rows/columns.
std::vector<std::vector<Index>> candidate_orderings(const RationalMatrix& mat, Index factor_cols) {
    std::vector<std::vector<Index>> out;
    std::vector<Index> identity(static_cast<std::size_t>(mat.cols()));
    std::iota(identity.begin(), identity.end(), Index(0));
    out.push_back(identity);

    auto support = [&](Index c) {
        std::vector<Index> s;
        for (Index r = 0; r < mat.rows(); ++r)
            if (!mat(r, c).is_zero()) s.push_back(r);
        return s;
    };
    auto vec_key = [&](Index c) { return SupportKey{support(c), {}}; };
    auto row_col_key = [&](Index c) {
        std::vector<Index> rows, cols;
        for (Index coord : support(c)) {
            rows.push_back(coord / factor_cols);
            cols.push_back(coord % factor_cols);
        }
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        return std::make_pair(rows, cols);
    };
    auto col_row_key = [&](Index c) {
        SupportKey k = row_col_key(c);
        return SupportKey{k.second, k.first};
    };

    out.push_back(sorted_columns(mat, vec_key));
    out.push_back(sorted_columns(mat, row_col_key));
    out.push_back(sorted_columns(mat, col_row_key));
    std::sort(out.begin() + 1, out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

nlohmann::json matrix_to_json(const RationalMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

BasisMatrix basis_matrix(const Algorithm& q, FactorRole role) {
    const RationalMatrix f = stacked_factors(q, role);
    std::vector<Index> picked = column_basis(f);
    if (static_cast<Index>(picked.size()) != f.rows())
        throw DeficientSpan("basis_matrix: role " + std::string(to_string(role)) +
                            " factors span " + std::to_string(picked.size()) + " of " +
                            std::to_string(f.rows()) + " dimensions");
    BasisMatrix out;
    out.role = role;
    out.matrix.resize(f.rows(), f.rows());
    for (std::size_t c = 0; c < picked.size(); ++c)
        out.matrix.col(static_cast<Index>(c)) = f.col(picked[c]);
    out.source_terms = std::move(picked);
    return out;
}

std::optional<std::pair<RationalMatrix, RationalMatrix>> kron_factorize(const RationalMatrix& a,
                                                                        int m, int n) {
    if (m < 1 || n < 1) throw ShapeError("kron_factorize: block sizes must be positive");
    const Index side = static_cast<Index>(m) * n;
    if (a.rows() != side || a.cols() != side)
        throw ShapeError("kron_factorize: matrix side must equal m*n");

    RationalMatrix blocks(static_cast<Index>(m) * m, static_cast<Index>(n) * n);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            for (Index s = 0; s < n; ++s)
                for (Index t = 0; t < n; ++t) blocks(i * m + j, s * n + t) = a(i * n + s, j * n + t);
    if (dense_rank(blocks) != 1) return std::nullopt;

    Index anchor_row = -1, anchor_col = -1;
    for (Index i = 0; i < blocks.rows() && anchor_row < 0; ++i)
        for (Index j = 0; j < blocks.cols(); ++j)
            if (!blocks(i, j).is_zero()) {
                anchor_row = i;
                anchor_col = j;
                break;
            }

    RationalMatrix un(n, n);
    for (Index s = 0; s < n; ++s)
        for (Index t = 0; t < n; ++t) un(s, t) = blocks(anchor_row, s * n + t);
    const Rational pivot = blocks(anchor_row, anchor_col);
    RationalMatrix um(m, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) um(i, j) = blocks(i * m + j, anchor_col) / pivot;

    if (!matrices_equal(kron_product(um, un), a)) return std::nullopt;
    return std::make_pair(std::move(um), std::move(un));
}

bool unit_basis_containment(const Algorithm& q, FactorRole role, ContainmentMode mode) {
    const Index rows = q.format.rows(role);
    const Index cols = q.format.cols(role);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            bool found = false;
            for (const TriadTerm& term : q.terms) {
                const Rational c = scaled_unit_at(term.factor(role), i, j);
                if (c.is_zero()) continue;
                if (mode == ContainmentMode::up_to_scalar || c == Rational(1)) {
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
    }
    return true;
}

std::string to_string(DPropertyStatus s) {
    switch (s) {
        case DPropertyStatus::proven_yes: return "proven_yes";
        case DPropertyStatus::proven_no_for_canonical_basis:
            return "proven_no_for_canonical_basis";
        default: return "unknown";
    }
}

bool verify_d_witness(const Algorithm& q, FactorRole role, const RationalMatrix& a,
                      const RationalMatrix& b) {
    const Index rows = q.format.rows(role);
    const Index cols = q.format.cols(role);
    if (a.rows() != rows || a.cols() != rows || b.rows() != cols || b.cols() != cols)
        throw DimensionMismatch("verify_d_witness: witness shapes must match the role");
    const RationalMatrix b_inv = invert_exact(b);
    std::vector<RationalMatrix> transformed;
    transformed.reserve(q.terms.size());
    for (const TriadTerm& term : q.terms) transformed.push_back(a * term.factor(role) * b_inv);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            const RationalMatrix target = unit_matrix(rows, cols, i, j);
            bool found = false;
            for (const RationalMatrix& t : transformed)
                if (matrices_equal(t, target)) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
    return true;
}

DPropertyVerdict d_property_check(const Algorithm& q, FactorRole role) {
    const Index rows = q.format.rows(role);
    const Index cols = q.format.cols(role);

    bool scaled_containment = true;
    RationalMatrix scales(rows, cols);
    scales.setZero();
    for (Index i = 0; i < rows && scaled_containment; ++i)
        for (Index j = 0; j < cols; ++j) {
            Rational c(0);
            for (const TriadTerm& term : q.terms) {
                c = scaled_unit_at(term.factor(role), i, j);
                if (!c.is_zero()) break;
            }
            if (c.is_zero()) {
                scaled_containment = false;
                break;
            }
            scales(i, j) = c;
        }
    if (scaled_containment && dense_rank(scales) == 1) {
        RationalMatrix a(rows, rows), b(cols, cols);
        a.setZero();
        b.setZero();
        for (Index i = 0; i < rows; ++i) a(i, i) = Rational(1) / scales(i, 0);
        for (Index j = 0; j < cols; ++j) b(j, j) = scales(0, j) / scales(0, 0);
        if (verify_d_witness(q, role, a, b))
            return {DPropertyStatus::proven_yes, DPropertyWitness{std::move(a), std::move(b)}};
    }

    const BasisMatrix basis = basis_matrix(q, role);
    bool every_ordering_rank_exceeds_one = true;
    for (const std::vector<Index>& order : candidate_orderings(basis.matrix, cols)) {
        RationalMatrix reordered(basis.matrix.rows(), basis.matrix.cols());
        for (std::size_t c = 0; c < order.size(); ++c)
            reordered.col(static_cast<Index>(c)) = basis.matrix.col(order[c]);
        auto split = kron_factorize(reordered, static_cast<int>(rows), static_cast<int>(cols));
        if (!split) continue;
        every_ordering_rank_exceeds_one = false;
        RationalMatrix a = invert_exact(split->first);
        RationalMatrix b = split->second.transpose();
        if (verify_d_witness(q, role, a, b))
            return {DPropertyStatus::proven_yes, DPropertyWitness{std::move(a), std::move(b)}};
    }

    return {every_ordering_rank_exceeds_one ? DPropertyStatus::proven_no_for_canonical_basis
                                            : DPropertyStatus::unknown,
            std::nullopt};
}

DPropertyVerdict d_property_check(const Algorithm& q) {
    int yes = 0, no = 0;
    for (FactorRole role : {FactorRole::U, FactorRole::V, FactorRole::W}) {
        DPropertyStatus status;
        try {
            status = d_property_check(q, role).status;
        } catch (const DeficientSpan&) {
            status = DPropertyStatus::proven_no_for_canonical_basis;
        }
        if (status == DPropertyStatus::proven_yes)
            ++yes;
        else if (status == DPropertyStatus::proven_no_for_canonical_basis)
            ++no;
    }
    if (yes >= 2) return {DPropertyStatus::proven_yes, std::nullopt};
    if (no >= 2) return {DPropertyStatus::proven_no_for_canonical_basis, std::nullopt};
    return {DPropertyStatus::unknown, std::nullopt};
}

bool weak_d_check(const Algorithm& q, FactorRole role) {
    const Index rows = q.format.rows(role);
    const Index cols = q.format.cols(role);
    const Index dim = rows * cols;

    std::vector<Index> head_terms, tail_terms;
    for (int t = 0; t < q.length(); ++t) {
        const RationalMatrix& f = q.terms[static_cast<std::size_t>(t)].factor(role);
        bool first_row_only = !matrix_is_zero(f);
        bool first_row_zero = true;
        for (Index j = 0; j < cols && first_row_only; ++j)
            for (Index i = 1; i < rows; ++i)
                if (!f(i, j).is_zero()) {
                    first_row_only = false;
                    break;
                }
        for (Index j = 0; j < cols && first_row_zero; ++j)
            if (!f(0, j).is_zero()) first_row_zero = false;
        if (first_row_only)
            head_terms.push_back(t);
        else if (first_row_zero)
            tail_terms.push_back(t);
    }

    auto span_rank = [&](const std::vector<Index>& terms) -> Index {
        if (terms.empty()) return 0;
        RationalMatrix mat(dim, static_cast<Index>(terms.size()));
        for (std::size_t c = 0; c < terms.size(); ++c)
            mat.col(static_cast<Index>(c)) =
                vectorize_rowwise(q.terms[static_cast<std::size_t>(terms[c])].factor(role));
        return dense_rank(mat);
    };

    return span_rank(head_terms) == cols && span_rank(tail_terms) == dim - cols;
}

bool weak_d_check(const Algorithm& q) {
    return weak_d_check(q, FactorRole::U) && weak_d_check(q, FactorRole::V) &&
           weak_d_check(q, FactorRole::W);
}

BoundReport bound_report(const Algorithm& q, const RankResult& rank) {
    const Index m = q.format.m, n = q.format.n, p = q.format.p;
    const Index r = q.length();

    BoundReport rep;
    rep.format = q.format;
    rep.r = q.length();
    rep.k = (m * n + n * p + p * m) * r;
    rep.rank = rank.rank;
    rep.rank_method = rank.method;
    rep.u = rep.k - rep.rank;
    rep.l = m * m + n * n + p * p - m - n - p - 3;
    rep.l_prime = rep.l + 2 * r;
    rep.l_dprime = m * m + n * n + p * p + 2 * r - 3;
    rep.g = rep.u - rep.l;
    rep.g_prime = rep.u - rep.l_prime;
    rep.g_dprime = rep.u - rep.l_dprime;
    rep.d_property = d_property_check(q).status;
    rep.weak_d = weak_d_check(q);
    rep.lower_bounds_valid = rep.d_property == DPropertyStatus::proven_yes || rep.weak_d;
    rep.anomaly = rep.u < rep.l_dprime;
    return rep;
}

std::string bound_report_to_json(const BoundReport& report) {
    nlohmann::ordered_json j;
    j["format"] = {report.format.m, report.format.n, report.format.p};
    j["r"] = report.r;
    j["k"] = report.k;
    j["rank"] = report.rank;
    j["rank_method"] = to_string(report.rank_method);
    j["u"] = report.u;
    j["l"] = report.l;
    j["l_prime"] = report.l_prime;
    j["l_dprime"] = report.l_dprime;
    j["l_dprime_conditional"] = true;
    j["g"] = report.g;
    j["g_prime"] = report.g_prime;
    j["g_dprime"] = report.g_dprime;
    j["d_property"] = to_string(report.d_property);
    j["weak_d"] = report.weak_d;
    j["lower_bounds_valid"] = report.lower_bounds_valid;
    j["anomaly"] = report.anomaly;
    return j.dump(2);
}

std::string d_property_verdict_to_json(const DPropertyVerdict& verdict) {
    nlohmann::ordered_json j;
    j["status"] = to_string(verdict.status);
    if (verdict.witness) {
        j["witness"]["a"] = matrix_to_json(verdict.witness->a);
        j["witness"]["b"] = matrix_to_json(verdict.witness->b);
    } else {
        j["witness"] = nullptr;
    }
    return j.dump(2);
}

}  // namespace brent
