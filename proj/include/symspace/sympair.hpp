#pragma once

#include "matlie.hpp"
#include "report.hpp"

#include <string>
#include <vector>

namespace symspace {

enum class Field { R, C, H };

inline const char* to_string(Field f) {
    switch (f) {
        case Field::R: return "R";
        case Field::C: return "C";
        case Field::H: return "H";
    }
    return "?";
}

struct Family {
    Field field = Field::R;
    int p = 0;
    int q = 0;

    int n() const { return p + q; }
    // Side length of the matrices carrying the algebra.
    Index matrix_size() const { return field == Field::H ? 2 * n() : n(); }
    std::string label() const { return std::string(to_string(field)) + "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }
    friend bool operator==(const Family&, const Family&) = default;
};

enum class Variant { standard, canonical_T };

struct SymmetricPair {
    Family family;
    Variant variant = Variant::standard;
    CMat hermitian;  // n x n form defining h and m
    CMat form_matrix;  // same form on the carrier space (diag(M, M) for H)
    RealSubspace g;
    RealSubspace h;
    RealSubspace m;
    RealSubspace h_compact;  // h ∩ {theta = id}
    BilinForm form;

    Index size() const { return family.matrix_size(); }
    CMat involution(const CMat& x) const { return -x.adjoint(); }
    double K(const CMat& a, const CMat& b) const { return form(a, b); }
};

inline CMat involution(const SymmetricPair&, const CMat& x) { return -x.adjoint(); }

namespace detail {

inline CMat unit(Index n, Index i, Index j, cplx v = 1.0) {
    CMat e = CMat::Zero(n, n);
    e(i, j) = v;
    return e;
}

// Quaternion a + b i + c j + d k as U + V j with U = a + b i, V = c + d i.
inline CMat quat_unit(Index n, Index i, Index j, double a, double b, double c, double d) {
    return quat_embed({unit(n, i, j, cplx(a, b)), unit(n, i, j, cplx(c, d))});
}

// Real spanning set of sl_n K: diagonal generators first, then off-diagonal entries.
inline std::vector<CMat> sl_generators(Field field, Index n) {
    std::vector<CMat> gens;
    auto hdiag = [n](Index i) { return CMat(unit(n, i, i) - unit(n, i + 1, i + 1)); };
    switch (field) {
        case Field::R:
            for (Index i = 0; i + 1 < n; ++i) gens.push_back(hdiag(i));
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < n; ++j)
                    if (i != j) gens.push_back(unit(n, i, j));
            break;
        case Field::C:
            for (Index i = 0; i + 1 < n; ++i) {
                gens.push_back(hdiag(i));
                gens.push_back(I_unit * hdiag(i));
            }
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < n; ++j)
                    if (i != j) {
                        gens.push_back(unit(n, i, j));
                        gens.push_back(unit(n, i, j, I_unit));
                    }
            break;
        case Field::H:
            for (Index i = 0; i + 1 < n; ++i) gens.push_back(quat_embed({hdiag(i), CMat::Zero(n, n)}));
            for (Index i = 0; i < n; ++i) {
                gens.push_back(quat_unit(n, i, i, 0, 1, 0, 0));
                gens.push_back(quat_unit(n, i, i, 0, 0, 1, 0));
                gens.push_back(quat_unit(n, i, i, 0, 0, 0, 1));
            }
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < n; ++j)
                    if (i != j) {
                        gens.push_back(quat_unit(n, i, j, 1, 0, 0, 0));
                        gens.push_back(quat_unit(n, i, j, 0, 1, 0, 0));
                        gens.push_back(quat_unit(n, i, j, 0, 0, 1, 0));
                        gens.push_back(quat_unit(n, i, j, 0, 0, 0, 1));
                    }
            break;
    }
    return gens;
}

inline CMat unit_max_entry(const CMat& x) {
    const double mx = x.cwiseAbs().maxCoeff();
    return mx > 0 ? CMat(x / mx) : x;
}

}  // namespace detail

// g = sl_n K, h = fixed points of sigma(X) = -M^{-1} X^* M, m = its (-1)-eigenspace.
inline SymmetricPair build_pair(const Family& fam, Variant variant = Variant::standard, const Tolerance& tol = {}) {
    if (fam.p < 0 || fam.q < 0 || fam.n() < 2) throw std::invalid_argument("build_pair: need p, q >= 0 and p + q >= 2");
    const Index n = fam.n();
    SymmetricPair pair;
    pair.family = fam;
    pair.variant = variant;
    if (variant == Variant::canonical_T) {
        if (fam.p != 2 || fam.q != 1) throw std::invalid_argument("build_pair: canonical-T variant exists only for (p,q) = (2,1)");
        pair.hermitian = antidiag_ones(3);
    } else {
        pair.hermitian = ipq(fam.p, fam.q);
    }
    pair.form_matrix = fam.field == Field::H ? quat_embed({pair.hermitian, CMat::Zero(n, n)}) : pair.hermitian;
    pair.form = fam.field == Field::H ? half_trace_form() : trace_form();

    const Index sz = fam.matrix_size();
    const CMat& M = pair.form_matrix;
    const CMat Minv = M.inverse();
    auto sigma = [&](const CMat& x) { return CMat(-Minv * x.adjoint() * M); };

    const std::vector<CMat> gens = detail::sl_generators(fam.field, n);
    std::vector<CMat> hs, ms, ks;
    for (const CMat& x : gens) {
        const CMat sx = sigma(x);
        hs.push_back(detail::unit_max_entry(0.5 * (x + sx)));
        ms.push_back(detail::unit_max_entry(0.5 * (x - sx)));
    }
    pair.g = RealSubspace::greedy(sz, sz, gens, tol);
    pair.h = RealSubspace::greedy(sz, sz, hs, tol);
    pair.m = RealSubspace::greedy(sz, sz, ms, tol);
    for (const CMat& x : pair.h.basis()) ks.push_back(detail::unit_max_entry(0.5 * (x - x.adjoint())));
    pair.h_compact = RealSubspace::greedy(sz, sz, ks, tol);
    if (pair.h.dim() + pair.m.dim() != pair.g.dim()) throw std::logic_error("build_pair: h + m does not fill g");
    return pair;
}

struct TableRow {
    Family family;
    Index dim_h = 0;
    Index dim_m = 0;
    Signature sig_m;
};

// Closed formulas for dim h, dim m and the signature of K on m.
inline TableRow expected_row(const Family& fam) {
    const int p = fam.p, q = fam.q, n = fam.n();
    TableRow r;
    r.family = fam;
    switch (fam.field) {
        case Field::R:
            r.dim_h = n * (n - 1) / 2;
            r.dim_m = (n - 1) * (n + 2) / 2;
            r.sig_m = {(p * (p + 1) + q * (q + 1) - 2) / 2, p * q, 0};
            break;
        case Field::C:
            r.dim_h = n * n - 1;
            r.dim_m = n * n - 1;
            r.sig_m = {p * p + q * q - 1, 2 * p * q, 0};
            break;
        case Field::H:
            r.dim_h = (2 * n + 1) * n;
            r.dim_m = (2 * n + 1) * (n - 1);
            r.sig_m = {p * (2 * p - 1) + q * (2 * q - 1) - 1, 4 * p * q, 0};
            break;
    }
    return r;
}

inline TableRow table_row(const SymmetricPair& pair, const Tolerance& tol = {}) {
    return {pair.family, pair.h.dim(), pair.m.dim(), gram_signature(pair.form, pair.m, tol).sig};
}

inline std::vector<TableRow> dimension_table(const std::vector<Family>& families, const Tolerance& tol = {}) {
    std::vector<TableRow> rows;
    rows.reserve(families.size());
    for (const Family& f : families) rows.push_back(table_row(build_pair(f, Variant::standard, tol), tol));
    return rows;
}

// Matrix of ad X on m-coordinates.
inline RMat isotropy_matrix(const SymmetricPair& pair, const CMat& x, const Tolerance& tol = {}) {
    if (pair.h.residual(x) > tol.abs * std::max(1.0, x.norm())) throw std::invalid_argument("isotropy_matrix: X is not in h");
    RMat a(pair.m.dim(), pair.m.dim());
    for (Index j = 0; j < pair.m.dim(); ++j) a.col(j) = pair.m.coords(bracket(x, pair.m[j]));
    return a;
}

namespace detail {

inline double bracket_residual(const RealSubspace& a, const RealSubspace& b, const RealSubspace& target) {
    double r = 0.0;
    for (const CMat& x : a.basis())
        for (const CMat& y : b.basis()) r = std::max(r, target.residual(bracket(x, y)));
    return r;
}

}  // namespace detail

inline Report check_symmetric_axioms(const SymmetricPair& pair, const Tolerance& tol = {}, std::uint64_t seed = 0) {
    Report rep("axioms");
    const std::string tag = pair.family.label();
    rep.equal<Index>(tag + ".dim_sum", pair.h.dim() + pair.m.dim(), pair.g.dim(), "g = h + m as vector spaces");
    rep.residual(tag + ".bracket_hh_in_h", detail::bracket_residual(pair.h, pair.h, pair.h), tol.abs, "h is a subalgebra");
    rep.residual(tag + ".bracket_hm_in_m", detail::bracket_residual(pair.h, pair.m, pair.m), tol.abs, "m is an h-module");
    rep.residual(tag + ".bracket_mm_in_h", detail::bracket_residual(pair.m, pair.m, pair.h), tol.abs, "symmetric pair relation [m,m] in h");

    double cross = 0.0;
    for (const CMat& x : pair.h.basis())
        for (const CMat& y : pair.m.basis()) cross = std::max(cross, std::abs(pair.K(x, y)));
    rep.residual(tag + ".form_h_perp_m", cross, tol.abs, "h and m are K-orthogonal");

    Rng rng(seed);
    double invariance = 0.0, automorphism = 0.0;
    for (int t = 0; t < 50; ++t) {
        const CMat x = random_element(pair.g, rng), y = random_element(pair.g, rng), z = random_element(pair.g, rng);
        invariance = std::max(invariance, std::abs(pair.K(bracket(z, x), y) + pair.K(x, bracket(z, y))));
        automorphism = std::max(automorphism,
                                (pair.involution(bracket(x, y)) - bracket(pair.involution(x), pair.involution(y))).norm());
    }
    rep.residual(tag + ".form_ad_invariant", invariance, tol.abs, "K is ad-invariant");
    rep.residual(tag + ".theta_automorphism", automorphism, tol.abs, "theta is a Lie algebra automorphism");

    double preserve = 0.0;
    for (const CMat& x : pair.h.basis()) preserve = std::max(preserve, pair.h.residual(pair.involution(x)));
    for (const CMat& x : pair.m.basis()) preserve = std::max(preserve, pair.m.residual(pair.involution(x)));
    rep.residual(tag + ".theta_preserves_h_and_m", preserve, tol.abs, "theta commutes with the symmetric involution");

    // theta = +1 part of g is compact (K negative definite), theta = -1 part is K-positive.
    std::vector<CMat> plus, minus;
    for (const CMat& x : pair.g.basis()) {
        plus.push_back(detail::unit_max_entry(0.5 * (x + pair.involution(x))));
        minus.push_back(detail::unit_max_entry(0.5 * (x - pair.involution(x))));
    }
    const Index sz = pair.size();
    const Signature sp = gram_signature(pair.form, RealSubspace::greedy(sz, sz, plus, tol), tol).sig;
    const Signature sm = gram_signature(pair.form, RealSubspace::greedy(sz, sz, minus, tol), tol).sig;
    rep.truth(tag + ".theta_cartan", sp.plus == 0 && sp.zero == 0 && sm.minus == 0 && sm.zero == 0,
              "K is negative definite on theta = +1 and positive definite on theta = -1");
    return rep;
}

}  // namespace symspace
