#include "brent/rank.hpp"

#include "brent/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace brent {

std::string to_string(RankMethod m) {
    switch (m) {
        case RankMethod::exact: return "exact";
        case RankMethod::modular: return "modular";
        case RankMethod::numeric: return "numeric";
    }
    return "?";
}

RankMethod rank_method_from_string(const std::string& name) {
    if (name == "exact") return RankMethod::exact;
    if (name == "modular") return RankMethod::modular;
    if (name == "numeric") return RankMethod::numeric;
    throw ValueError("unknown rank method: " + name);
}

namespace {

// ---------------------------------------------------------------- exact ----

/// Clears denominators per row, giving integer rows that span the same row
/// space.
std::vector<std::vector<Int>> integer_rows(const RationalMatrix& a) {
    std::vector<std::vector<Int>> rows(static_cast<std::size_t>(a.rows()),
                                       std::vector<Int>(static_cast<std::size_t>(a.cols())));
    for (Index i = 0; i < a.rows(); ++i) {
        Int l = 1;
        for (Index j = 0; j < a.cols(); ++j)
            l = boost::multiprecision::lcm(l, a(i, j).denominator());
        for (Index j = 0; j < a.cols(); ++j) {
            const Rational& x = a(i, j);
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                x.numerator() * (l / x.denominator());
        }
    }
    return rows;
}

/// Bareiss elimination with row pivoting and column skipping. Entries stay
/// minors of the input, so every division is exact.
Index bareiss(std::vector<std::vector<Int>>& a, std::vector<Index>& pivot_columns) {
    const Index rows = static_cast<Index>(a.size());
    const Index cols = rows > 0 ? static_cast<Index>(a[0].size()) : 0;
    Int prev = 1;
    Index pr = 0;
    for (Index pc = 0; pc < cols && pr < rows; ++pc) {
        Index sel = -1;
        for (Index i = pr; i < rows; ++i)
            if (a[static_cast<std::size_t>(i)][static_cast<std::size_t>(pc)] != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != pr) std::swap(a[static_cast<std::size_t>(sel)], a[static_cast<std::size_t>(pr)]);
        auto& prow = a[static_cast<std::size_t>(pr)];
        for (Index i = pr + 1; i < rows; ++i) {
            auto& row = a[static_cast<std::size_t>(i)];
            const Int head = row[static_cast<std::size_t>(pc)];
            for (Index k = pc + 1; k < cols; ++k) {
                Int& x = row[static_cast<std::size_t>(k)];
                x = (x * prow[static_cast<std::size_t>(pc)] -
                     head * prow[static_cast<std::size_t>(k)]) /
                    prev;
            }
            row[static_cast<std::size_t>(pc)] = 0;
        }
        prev = prow[static_cast<std::size_t>(pc)];
        pivot_columns.push_back(pc);
        ++pr;
    }
    return pr;
}

// -------------------------------------------------------------- modular ----

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a * b % p;  // p < 2^31 keeps the product below 2^62
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t out = 1;
    a %= p;
    while (e > 0) {
        if (e & 1u) out = mulmod(out, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return out;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull}) {
        if (n == d) return true;
        if (n % d == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1u) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic for n < 3.2e18 with these bases.
    for (std::uint64_t base : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                               23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(base, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::uint64_t sample_prime(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> dist(1u << 30, (1u << 31) - 1);
    for (;;) {
        const std::uint64_t c = dist(rng) | 1u;
        if (is_prime_u64(c)) return c;
    }
}

std::uint64_t residue(const Int& value, std::uint64_t p) {
    Int r = value % Int(p);
    if (r < 0) r += Int(p);
    return r.convert_to<std::uint64_t>();
}

/// Maps every stored entry to its residue; false when a denominator is
/// divisible by p.
bool project_mod_p(const SparseRationalMatrix& a, std::uint64_t p,
                   std::vector<std::uint64_t>& dense) {
    dense.assign(static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(a.cols()),
                 0);
    for (const auto& t : a.triplets()) {
        const std::uint64_t den = residue(t.value.denominator(), p);
        if (den == 0) return false;
        const std::uint64_t num = residue(t.value.numerator(), p);
        dense[static_cast<std::size_t>(t.row) * static_cast<std::size_t>(a.cols()) +
              static_cast<std::size_t>(t.col)] = mulmod(num, powmod(den, p - 2, p), p);
    }
    return true;
}

Index rank_mod_p(std::vector<std::uint64_t>& m, Index rows, Index cols,
                 std::uint64_t p) {
    const auto at = [&](Index i, Index j) -> std::uint64_t& {
        return m[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                 static_cast<std::size_t>(j)];
    };
    Index pr = 0;
    for (Index pc = 0; pc < cols && pr < rows; ++pc) {
        Index sel = -1;
        for (Index i = pr; i < rows; ++i)
            if (at(i, pc) != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != pr)
            for (Index j = pc; j < cols; ++j) std::swap(at(sel, j), at(pr, j));
        const std::uint64_t inv = powmod(at(pr, pc), p - 2, p);
        for (Index i = pr + 1; i < rows; ++i) {
            const std::uint64_t head = at(i, pc);
            if (head == 0) continue;
            const std::uint64_t f = p - mulmod(head, inv, p);
            for (Index j = pc; j < cols; ++j)
                at(i, j) = (at(i, j) + mulmod(f, at(pr, j), p)) % p;
        }
        ++pr;
    }
    return pr;
}

}  // namespace

RankResult rank_exact(const RationalMatrix& a) {
    auto rows = integer_rows(a);
    ExactCertificate cert;
    const Index r = bareiss(rows, cert.pivot_columns);
    return RankResult{r, RankMethod::exact, std::move(cert)};
}

RankResult rank_exact(const SparseRationalMatrix& a) { return rank_exact(a.to_dense()); }

RankResult rank_modular(const SparseRationalMatrix& a, int prime_count,
                        std::uint64_t seed) {
    if (prime_count < 1) throw ValueError("rank_modular: prime_count must be positive");
    std::mt19937_64 rng(seed);
    ModularCertificate cert;
    Index best = 0;
    std::vector<std::uint64_t> dense;
    for (int s = 0; s < prime_count; ++s) {
        bool projected = false;
        for (int attempt = 0; attempt < 200 && !projected; ++attempt) {
            const std::uint64_t p = sample_prime(rng);
            if (!project_mod_p(a, p, dense)) continue;
            const Index r = rank_mod_p(dense, a.rows(), a.cols(), p);
            cert.primes.push_back(p);
            cert.per_prime_ranks.push_back(r);
            best = std::max(best, r);
            projected = true;
        }
        if (!projected)
            throw DenominatorClash("rank_modular: every sampled prime divides a denominator");
    }
    return RankResult{best, RankMethod::modular, std::move(cert)};
}

RankResult rank_modular(const RationalMatrix& a, int prime_count, std::uint64_t seed) {
    return rank_modular(SparseRationalMatrix::from_dense(a), prime_count, seed);
}

RankResult rank_numeric(const Eigen::MatrixXd& a, TolerancePolicy tol) {
    NumericCertificate cert;
    if (a.rows() == 0 || a.cols() == 0) {
        cert.tolerance = tol.mode == TolerancePolicy::Mode::fixed ? tol.fixed_value : 0.0;
        cert.gap_ratio = std::numeric_limits<double>::infinity();
        return RankResult{0, RankMethod::numeric, std::move(cert)};
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
    const Eigen::VectorXd& sv = svd.singularValues();
    cert.spectrum.assign(sv.data(), sv.data() + sv.size());
    const double sigma_max = cert.spectrum.empty() ? 0.0 : cert.spectrum.front();
    cert.tolerance = tol.mode == TolerancePolicy::Mode::fixed
                         ? tol.fixed_value
                         : sigma_max * static_cast<double>(std::max(a.rows(), a.cols())) *
                               std::numeric_limits<double>::epsilon();
    Index r = 0;
    while (r < sv.size() && sv(r) > cert.tolerance) ++r;
    if (r == 0)
        cert.gap_ratio = 0.0;
    else if (r == sv.size() || sv(r) == 0.0)
        cert.gap_ratio = std::numeric_limits<double>::infinity();
    else
        cert.gap_ratio = sv(r - 1) / sv(r);
    return RankResult{r, RankMethod::numeric, std::move(cert)};
}

RankResult rank_numeric(const SparseRationalMatrix& a, TolerancePolicy tol) {
    return rank_numeric(a.to_double(), tol);
}

std::vector<Index> column_basis(const RationalMatrix& a) {
    return std::get<ExactCertificate>(rank_exact(a).certificate).pivot_columns;
}

std::vector<Index> column_basis(const SparseRationalMatrix& a) {
    return column_basis(a.to_dense());
}

}  // namespace brent
