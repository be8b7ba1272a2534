#include "brent/symmetry.hpp"

#include "brent/brent_system.hpp"
#include "brent/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <numeric>

namespace brent {

namespace {

// ---------------------------------------------------------------- triad ----

/// Output slot s takes input factor src[s], transposed iff tr.
struct SlotMap {
    std::array<int, 3> src;
    bool tr;
};

constexpr std::array<SlotMap, 6> kSlotMaps = {{
    {{0, 1, 2}, false},  // identity
    {{1, 2, 0}, false},  // cyclic
    {{2, 0, 1}, false},  // cyclic_sq
    {{1, 0, 2}, true},   // transpose
    {{2, 1, 0}, true},   // transpose_cyclic
    {{0, 2, 1}, true},   // transpose_cyclic_sq
}};

const SlotMap& slot_map(TriadSymmetry::Kind k) {
    return kSlotMaps[static_cast<std::size_t>(k)];
}

TriadSymmetry::Kind kind_of(const SlotMap& m) {
    for (std::size_t i = 0; i < kSlotMaps.size(); ++i)
        if (kSlotMaps[i].src == m.src && kSlotMaps[i].tr == m.tr)
            return static_cast<TriadSymmetry::Kind>(i);
    throw ValueError("TriadSymmetry: slot map is not a triad element");
}

constexpr std::array<FactorRole, 3> kRoles = {FactorRole::U, FactorRole::V,
                                              FactorRole::W};

Algorithm apply_triad(TriadSymmetry g, const Algorithm& q) {
    const SlotMap& map = slot_map(g.kind);
    std::vector<TriadTerm> terms;
    terms.reserve(q.terms.size());
    for (const TriadTerm& t : q.terms) {
        std::array<RationalMatrix, 3> out;
        for (int s = 0; s < 3; ++s) {
            const RationalMatrix& f = t.factor(kRoles[static_cast<std::size_t>(map.src[static_cast<std::size_t>(s)])]);
            RationalMatrix& dst = out[static_cast<std::size_t>(s)];
            if (map.tr)
                dst = f.transpose();
            else
                dst = f;
        }
        terms.push_back({std::move(out[0]), std::move(out[1]), std::move(out[2])});
    }
    const MatMulFormat fmt(static_cast<int>(terms[0].u.rows()),
                           static_cast<int>(terms[0].u.cols()),
                           static_cast<int>(terms[0].v.cols()));
    return Algorithm(fmt, std::move(terms));
}

// ------------------------------------------------------------- variants ----

Algorithm apply_sandwich(const Sandwich& g, const Algorithm& q) {
    const MatMulFormat& f = q.format;
    if (g.a.rows() != f.m || g.b.rows() != f.n || g.c.rows() != f.p)
        throw DimensionMismatch("apply_element: sandwich does not conform to format " +
                                f.str());
    const RationalMatrix a_inv = invert_exact(g.a);
    const RationalMatrix b_inv = invert_exact(g.b);
    const RationalMatrix c_inv = invert_exact(g.c);
    std::vector<TriadTerm> terms;
    terms.reserve(q.terms.size());
    for (const TriadTerm& t : q.terms)
        terms.push_back({(g.a * t.u * b_inv).eval(), (g.b * t.v * c_inv).eval(),
                         (g.c * t.w * a_inv).eval()});
    return Algorithm(f, std::move(terms));
}

Algorithm apply_scale(const TermScale& g, const Algorithm& q) {
    if (g.scales.size() != q.terms.size())
        throw DimensionMismatch("apply_element: scale count differs from term count");
    std::vector<TriadTerm> terms;
    terms.reserve(q.terms.size());
    for (std::size_t i = 0; i < q.terms.size(); ++i) {
        const auto& [lambda, mu] = g.scales[i];
        terms.push_back({(q.terms[i].u * lambda).eval(), (q.terms[i].v * mu).eval(),
                         (q.terms[i].w * (lambda * mu).inverse()).eval()});
    }
    return Algorithm(q.format, std::move(terms));
}

Algorithm apply_permutation(const TermPermutation& g, const Algorithm& q) {
    if (g.sigma.size() != q.terms.size())
        throw DimensionMismatch("apply_element: permutation size differs from term count");
    std::vector<TriadTerm> terms;
    terms.reserve(q.terms.size());
    for (const int s : g.sigma) terms.push_back(q.terms[static_cast<std::size_t>(s)]);
    return Algorithm(q.format, std::move(terms));
}

// ----------------------------------------------------------- comparison ----

/// Scales a term triple to a canonical representative of its decomposable
/// tensor: leading entries of u and v become 1, w absorbs the product.
TriadTerm tensor_canonical(const TriadTerm& t) {
    if (matrix_is_zero(t.u) || matrix_is_zero(t.v) || matrix_is_zero(t.w)) {
        return {RationalMatrix::Constant(t.u.rows(), t.u.cols(), Rational(0)),
                RationalMatrix::Constant(t.v.rows(), t.v.cols(), Rational(0)),
                RationalMatrix::Constant(t.w.rows(), t.w.cols(), Rational(0))};
    }
    const auto leading = [](const RationalMatrix& m) {
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
                if (!m(i, j).is_zero()) return m(i, j);
        return Rational(0);
    };
    const Rational alpha = leading(t.u);
    const Rational beta = leading(t.v);
    return {(t.u / alpha).eval(), (t.v / beta).eval(), (t.w * (alpha * beta)).eval()};
}

bool terms_match(const TriadTerm& a, const TriadTerm& b, TermEquality mode) {
    if (mode == TermEquality::raw) return a == b;
    return tensor_canonical(a) == tensor_canonical(b);
}

// ------------------------------------------------------------- sampling ----

RationalMatrix random_invertible_small(std::mt19937_64& rng, Index n) {
    std::uniform_int_distribution<int> dist(-3, 3);
    for (;;) {
        RationalMatrix a(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) a(i, j) = Rational(dist(rng));
        if (dense_rank(a) == n) return a;
    }
}

// ----------------------------------------------------------------- json ----

nlohmann::json matrix_to_json(const RationalMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

RationalMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw ValueError("group element: matrix must be a nonempty array");
    const Index rows = static_cast<Index>(j.size());
    const Index cols = static_cast<Index>(j.at(0).size());
    RationalMatrix out(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (static_cast<Index>(row.size()) != cols)
            throw ValueError("group element: ragged matrix rows");
        for (Index c = 0; c < cols; ++c)
            out(i, c) = Rational::parse(row.at(static_cast<std::size_t>(c)).get<std::string>());
    }
    return out;
}

}  // namespace

// ----------------------------------------------------------------- ctors ----

Sandwich::Sandwich(RationalMatrix a_in, RationalMatrix b_in, RationalMatrix c_in)
    : a(std::move(a_in)), b(std::move(b_in)), c(std::move(c_in)) {
    invert_exact(a);
    invert_exact(b);
    invert_exact(c);
}

TermScale::TermScale(std::vector<std::pair<Rational, Rational>> scales_in)
    : scales(std::move(scales_in)) {
    for (const auto& [lambda, mu] : scales)
        if (lambda.is_zero() || mu.is_zero())
            throw ValueError("TermScale: scalars must be nonzero");
}

TermPermutation::TermPermutation(std::vector<int> sigma_in) : sigma(std::move(sigma_in)) {
    std::vector<bool> seen(sigma.size(), false);
    for (const int s : sigma) {
        if (s < 0 || static_cast<std::size_t>(s) >= sigma.size() ||
            seen[static_cast<std::size_t>(s)])
            throw ValueError("TermPermutation: not a permutation");
        seen[static_cast<std::size_t>(s)] = true;
    }
}

std::string to_string(TriadSymmetry::Kind k) {
    switch (k) {
        case TriadSymmetry::Kind::identity: return "identity";
        case TriadSymmetry::Kind::cyclic: return "cyclic";
        case TriadSymmetry::Kind::cyclic_sq: return "cyclic_sq";
        case TriadSymmetry::Kind::transpose: return "transpose";
        case TriadSymmetry::Kind::transpose_cyclic: return "transpose_cyclic";
        case TriadSymmetry::Kind::transpose_cyclic_sq: return "transpose_cyclic_sq";
    }
    return "?";
}

TriadSymmetry::Kind triad_kind_from_string(const std::string& name) {
    for (int k = 0; k < 6; ++k)
        if (to_string(static_cast<TriadSymmetry::Kind>(k)) == name)
            return static_cast<TriadSymmetry::Kind>(k);
    throw ValueError("TriadSymmetry: unknown kind '" + name + "'");
}

// --------------------------------------------------------------- actions ----

Algorithm apply_element(const GroupElement& g, const Algorithm& q) {
    return std::visit(
        [&](const auto& el) -> Algorithm {
            using T = std::decay_t<decltype(el)>;
            if constexpr (std::is_same_v<T, Sandwich>) return apply_sandwich(el, q);
            else if constexpr (std::is_same_v<T, TermScale>) return apply_scale(el, q);
            else if constexpr (std::is_same_v<T, TermPermutation>)
                return apply_permutation(el, q);
            else return apply_triad(el, q);
        },
        g);
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
    if (g.index() != h.index())
        throw VariantMismatch("compose: mixed variants; apply sequentially instead");
    if (const auto* gs = std::get_if<Sandwich>(&g)) {
        const auto& hs = std::get<Sandwich>(h);
        if (gs->a.rows() != hs.a.rows() || gs->b.rows() != hs.b.rows() ||
            gs->c.rows() != hs.c.rows())
            throw DimensionMismatch("compose: sandwich sizes differ");
        return Sandwich((gs->a * hs.a).eval(), (gs->b * hs.b).eval(),
                        (gs->c * hs.c).eval());
    }
    if (const auto* gt = std::get_if<TermScale>(&g)) {
        const auto& ht = std::get<TermScale>(h);
        if (gt->scales.size() != ht.scales.size())
            throw DimensionMismatch("compose: scale lengths differ");
        std::vector<std::pair<Rational, Rational>> scales;
        scales.reserve(gt->scales.size());
        for (std::size_t i = 0; i < gt->scales.size(); ++i)
            scales.emplace_back(gt->scales[i].first * ht.scales[i].first,
                                gt->scales[i].second * ht.scales[i].second);
        return TermScale(std::move(scales));
    }
    if (const auto* gp = std::get_if<TermPermutation>(&g)) {
        const auto& hp = std::get<TermPermutation>(h);
        if (gp->sigma.size() != hp.sigma.size())
            throw DimensionMismatch("compose: permutation sizes differ");
        std::vector<int> sigma(gp->sigma.size());
        for (std::size_t i = 0; i < sigma.size(); ++i)
            sigma[i] = hp.sigma[static_cast<std::size_t>(gp->sigma[i])];
        return TermPermutation(std::move(sigma));
    }
    const auto& gq = std::get<TriadSymmetry>(g);
    const auto& hq = std::get<TriadSymmetry>(h);
    const SlotMap& gm = slot_map(gq.kind);
    const SlotMap& hm = slot_map(hq.kind);
    SlotMap comp{{}, gm.tr != hm.tr};
    for (int s = 0; s < 3; ++s)
        comp.src[static_cast<std::size_t>(s)] =
            hm.src[static_cast<std::size_t>(gm.src[static_cast<std::size_t>(s)])];
    return TriadSymmetry{kind_of(comp)};
}

GroupElement invert(const GroupElement& g) {
    if (const auto* gs = std::get_if<Sandwich>(&g))
        return Sandwich(invert_exact(gs->a), invert_exact(gs->b), invert_exact(gs->c));
    if (const auto* gt = std::get_if<TermScale>(&g)) {
        std::vector<std::pair<Rational, Rational>> scales;
        scales.reserve(gt->scales.size());
        for (const auto& [lambda, mu] : gt->scales)
            scales.emplace_back(lambda.inverse(), mu.inverse());
        return TermScale(std::move(scales));
    }
    if (const auto* gp = std::get_if<TermPermutation>(&g)) {
        std::vector<int> inv(gp->sigma.size());
        for (std::size_t i = 0; i < inv.size(); ++i)
            inv[static_cast<std::size_t>(gp->sigma[i])] = static_cast<int>(i);
        return TermPermutation(std::move(inv));
    }
    for (int k = 0; k < 6; ++k) {
        const TriadSymmetry cand{static_cast<TriadSymmetry::Kind>(k)};
        const auto composed = std::get<TriadSymmetry>(compose(g, cand));
        if (composed.kind == TriadSymmetry::Kind::identity) return cand;
    }
    throw ValueError("invert: triad element without inverse");
}

bool fixes_algorithm(const GroupElement& g, const Algorithm& q, TermEquality mode) {
    const Algorithm image = apply_element(g, q);
    if (!(image.format == q.format)) return false;
    std::vector<bool> used(q.terms.size(), false);
    for (const TriadTerm& t : image.terms) {
        bool found = false;
        for (std::size_t i = 0; i < q.terms.size(); ++i) {
            if (used[i] || !terms_match(t, q.terms[i], mode)) continue;
            used[i] = true;
            found = true;
            break;
        }
        if (!found) return false;
    }
    return true;
}

OrbitExperimentReport orbit_rank_experiment(const Algorithm& q, int samples,
                                            std::uint64_t seed, RankMethod method) {
    if (samples < 0) throw ValueError("orbit_rank_experiment: samples must be >= 0");
    if (!is_solution(q))
        throw NotASolution("orbit_rank_experiment: point is not on the variety");

    std::mt19937_64 rng(seed);
    const auto rank_of = [&](const Algorithm& alg) -> Index {
        const SparseRationalMatrix j = jacobian(alg);
        switch (method) {
            case RankMethod::exact: return rank_exact(j).rank;
            case RankMethod::modular: return rank_modular(j, 3, rng()).rank;
            case RankMethod::numeric: return rank_numeric(j).rank;
        }
        return 0;
    };

    OrbitExperimentReport report;
    report.base_rank = rank_of(q);
    for (int s = 0; s < samples; ++s) {
        const Sandwich g = random_sandwich(rng, q.format);
        const Index rank = rank_of(apply_element(g, q));
        report.samples.push_back({group_element_to_json(g), rank});
        if (rank != report.base_rank) report.all_equal = false;
    }
    return report;
}

Sandwich random_sandwich(std::mt19937_64& rng, const MatMulFormat& format) {
    return Sandwich(random_invertible_small(rng, format.m),
                    random_invertible_small(rng, format.n),
                    random_invertible_small(rng, format.p));
}

TermScale random_term_scale(std::mt19937_64& rng, int r) {
    std::uniform_int_distribution<int> num(1, 3);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> sign(0, 1);
    std::vector<std::pair<Rational, Rational>> scales;
    scales.reserve(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        Rational lambda(Int((sign(rng) ? 1 : -1) * num(rng)), Int(den(rng)));
        Rational mu(Int((sign(rng) ? 1 : -1) * num(rng)), Int(den(rng)));
        scales.emplace_back(std::move(lambda), std::move(mu));
    }
    return TermScale(std::move(scales));
}

TermPermutation random_term_permutation(std::mt19937_64& rng, int r) {
    std::vector<int> sigma(static_cast<std::size_t>(r));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    return TermPermutation(std::move(sigma));
}

// ------------------------------------------------------------------ json ----

std::string group_element_to_json(const GroupElement& g) {
    nlohmann::json j;
    if (const auto* gs = std::get_if<Sandwich>(&g)) {
        j["kind"] = "sandwich";
        j["a"] = matrix_to_json(gs->a);
        j["b"] = matrix_to_json(gs->b);
        j["c"] = matrix_to_json(gs->c);
    } else if (const auto* gt = std::get_if<TermScale>(&g)) {
        j["kind"] = "term_scale";
        nlohmann::json scales = nlohmann::json::array();
        for (const auto& [lambda, mu] : gt->scales)
            scales.push_back({lambda.str(), mu.str()});
        j["scales"] = std::move(scales);
    } else if (const auto* gp = std::get_if<TermPermutation>(&g)) {
        j["kind"] = "term_permutation";
        nlohmann::json sigma = nlohmann::json::array();
        for (const int s : gp->sigma) sigma.push_back(s + 1);
        j["sigma"] = std::move(sigma);
    } else {
        j["kind"] = "triad";
        j["symmetry"] = to_string(std::get<TriadSymmetry>(g).kind);
    }
    return j.dump();
}

GroupElement group_element_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValueError(std::string("group element: invalid JSON: ") + e.what());
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sandwich")
        return Sandwich(matrix_from_json(j.at("a")), matrix_from_json(j.at("b")),
                        matrix_from_json(j.at("c")));
    if (kind == "term_scale") {
        std::vector<std::pair<Rational, Rational>> scales;
        for (const auto& pair : j.at("scales"))
            scales.emplace_back(Rational::parse(pair.at(0).get<std::string>()),
                                Rational::parse(pair.at(1).get<std::string>()));
        return TermScale(std::move(scales));
    }
    if (kind == "term_permutation") {
        std::vector<int> sigma;
        for (const auto& s : j.at("sigma")) sigma.push_back(s.get<int>() - 1);
        return TermPermutation(std::move(sigma));
    }
    if (kind == "triad")
        return TriadSymmetry{triad_kind_from_string(j.at("symmetry").get<std::string>())};
    throw ValueError("group element: unknown kind '" + kind + "'");
}

}  // namespace brent
