#pragma once

#include "matlie.hpp"
#include "nullorbit.hpp"
#include "reductive.hpp"
#include "report.hpp"
#include "sympair.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace symspace {

// ---------------------------------------------------------------------------
// su(2,1) with Hermitian form adiag(1,1,1) and the trace form.
// ---------------------------------------------------------------------------

inline CMat su21_vplus(cplx x, double delta) {
    CMat v = CMat::Zero(3, 3);
    v(0, 2) = I_unit * delta;
    v(1, 0) = x;
    v(2, 1) = -std::conj(x);
    return v;
}

inline CMat su21_vminus(cplx y, double gamma) {
    CMat v = CMat::Zero(3, 3);
    v(0, 1) = y;
    v(1, 2) = -std::conj(y);
    v(2, 0) = I_unit * gamma;
    return v;
}

inline CMat su21_v(cplx x, cplx y, double gamma, double delta) { return su21_vplus(x, delta) + su21_vminus(y, gamma); }

struct SU21Coords {
    cplx x, y;
    double gamma = 0.0, delta = 0.0;
};

inline SU21Coords su21_coords(const CMat& v) { return {v(1, 0), v(0, 1), v(2, 0).imag(), v(0, 2).imag()}; }

// +1 on n_plus, -1 on n_minus.
inline CMat su21_J(const CMat& v) {
    const SU21Coords c = su21_coords(v);
    return su21_vplus(c.x, c.delta) - su21_vminus(c.y, c.gamma);
}

// diag(r e^{i phi}, e^{-2 i phi}, r^{-1} e^{i phi})
inline CMat su21_b(double phi, double r) {
    CMat b = CMat::Zero(3, 3);
    b(0, 0) = r * std::polar(1.0, phi);
    b(1, 1) = std::polar(1.0, -2.0 * phi);
    b(2, 2) = std::polar(1.0, phi) / r;
    return b;
}

struct SU21Data {
    double a = 1.0;
    CMat T;
    cplx mu;
    CMat S;
    CMat S_hat;  // S^* scaled so that K(S, S_hat) = 1
    SymmetricPair pair;
    RealSubspace b, n, n_plus, n_minus;
    ReductiveSplit split;
};

inline SU21Data su21_build(double a = 1.0, const Tolerance& tol = {}) {
    if (a == 0.0) throw std::invalid_argument("su21_build: a must be nonzero");
    SU21Data d;
    d.a = a;
    d.T = antidiag_ones(3);
    d.mu = cplx(a, a * std::sqrt(3.0));
    d.pair = build_pair({Field::C, 2, 1}, Variant::canonical_T, tol);
    d.S = CMat::Zero(3, 3);
    d.S.diagonal() << d.mu, -2.0 * a, std::conj(d.mu);
    d.S_hat = d.S.adjoint() / d.pair.K(d.S, d.S.adjoint());
    CMat b1 = CMat::Zero(3, 3), b2 = CMat::Zero(3, 3);
    b1.diagonal() << 1.0, 0.0, -1.0;
    b2.diagonal() << I_unit, -2.0 * I_unit, I_unit;
    d.b = RealSubspace(3, 3, {b1, b2}, tol);
    d.n_plus = RealSubspace(3, 3, {su21_vplus(1.0, 0.0), su21_vplus(I_unit, 0.0), su21_vplus(0.0, 1.0)}, tol);
    d.n_minus = RealSubspace(3, 3, {su21_vminus(1.0, 0.0), su21_vminus(I_unit, 0.0), su21_vminus(0.0, 1.0)}, tol);
    std::vector<CMat> nb = d.n_plus.basis();
    nb.insert(nb.end(), d.n_minus.basis().begin(), d.n_minus.basis().end());
    d.n = RealSubspace(3, 3, nb, tol);
    d.split = reductive_split(d.pair, d.b, tol);
    return d;
}

inline CMat su21_random_n(Rng& rng) { return su21_v(rng.cnormal(), rng.cnormal(), rng.normal(), rng.normal()); }

// Bracket relations among n_plus and n_minus, with the closed forms evaluated on random arguments.
inline Report su21_bracket_table(const SU21Data& d, int trials, std::uint64_t seed, const Tolerance& tol = {}) {
    Report rep("su21");
    Rng rng(seed);
    double pm = 0.0, pp = 0.0, mm = 0.0, pm_in_b = 0.0;
    for (int t = 0; t < trials; ++t) {
        const cplx x = rng.cnormal(), y = rng.cnormal();
        const double g = rng.normal(), dl = rng.normal();
        const CMat c1 = bracket(su21_vplus(x, dl), su21_vminus(y, g));
        CMat e1 = CMat::Zero(3, 3);
        e1.diagonal() << -g * dl - x * y, x * y - std::conj(x * y), g * dl + std::conj(x * y);
        pm = std::max(pm, (c1 - e1).norm());
        pm_in_b = std::max(pm_in_b, d.b.residual(c1));

        const cplx lin = I_unit * (dl * std::conj(x) - g * std::conj(y));
        const double im2 = 2.0 * (x * std::conj(y)).imag();
        pp = std::max(pp, (bracket(su21_vplus(x, g), su21_vplus(y, dl)) - su21_vminus(lin, im2)).norm());
        mm = std::max(mm, (bracket(su21_vminus(x, g), su21_vminus(y, dl)) - su21_vplus(-lin, -im2)).norm());
    }
    rep.residual("bracket_plus_minus", pm, tol.abs, "[n+, n-] lies in b with diagonal closed form");
    rep.residual("bracket_plus_minus_in_b", pm_in_b, tol.abs, "[n+, n-] lies in b");
    rep.residual("bracket_plus_plus", pp, tol.abs, "[n+, n+] lies in n- with closed form");
    rep.residual("bracket_minus_minus", mm, tol.abs, "[n-, n-] lies in n+ with closed form");
    return rep;
}

inline Report su21_ad_action(double phi, double r, std::uint64_t seed = 0, const Tolerance& tol = {}) {
    if (r == 0.0) throw std::invalid_argument("su21_ad_action: r must be nonzero");
    Report rep("su21");
    const SU21Data d = su21_build(1.0, tol);
    const CMat b = su21_b(phi, r);
    const CMat binv = b.inverse();
    rep.residual("ad_action.in_group", (b.adjoint() * d.T * b - d.T).norm() + std::abs(b.determinant() - 1.0), tol.abs,
                 "b preserves the form and has determinant one");
    rep.residual("ad_action.fixes_S", (b * d.S * binv - d.S).norm(), tol.abs, "b fixes S");
    Rng rng(seed);
    double act = 0.0, law = 0.0;
    const cplx ph3 = std::polar(1.0, 3.0 * phi);
    for (int t = 0; t < 20; ++t) {
        const cplx x = rng.cnormal(), y = rng.cnormal();
        const double g = rng.normal(), dl = rng.normal();
        const CMat lhs = b * su21_v(x, y, g, dl) * binv;
        const CMat rhs = su21_v(std::conj(ph3) * x / r, ph3 * r * y, g / (r * r), r * r * dl);
        act = std::max(act, (lhs - rhs).norm());
        const double phi2 = rng.normal(), r2 = rng.uniform(0.5, 2.0);
        law = std::max(law, (b * su21_b(phi2, r2) - su21_b(phi + phi2, r * r2)).norm());
    }
    rep.residual("ad_action.formula", act, tol.abs, "Ad(b) rescales the coordinates x, y, gamma, delta");
    rep.residual("ad_action.group_law", law, tol.abs, "parameters compose additively in phi and multiplicatively in r");
    return rep;
}

// (nabla_X J) Y = 1/2 (J T(X,Y) - T(X, J Y))
inline CMat su21_nabla_J(const SU21Data& d, const CMat& x, const CMat& y) {
    return 0.5 * (su21_J(d.split.torsion(x, y)) - d.split.torsion(x, su21_J(y)));
}

struct ConstantType {
    double lambda = 0.0;
    double max_rel_residual = 0.0;
    double max_nabla_xx = 0.0;
};

inline ConstantType su21_constant_type(const SU21Data& d, int trials, std::uint64_t seed) {
    Rng rng(seed);
    double num = 0.0, den = 0.0;
    std::vector<std::pair<double, double>> pts;
    ConstantType ct;
    for (int t = 0; t < trials; ++t) {
        const CMat x = su21_random_n(rng), y = su21_random_n(rng);
        const CMat nj = su21_nabla_J(d, x, y);
        const double lhs = d.pair.K(nj, nj);
        const double kxy = d.pair.K(x, y), kjxy = d.pair.K(su21_J(x), y);
        const double rhs = d.pair.K(x, x) * d.pair.K(y, y) - kxy * kxy + kjxy * kjxy;
        pts.emplace_back(lhs, rhs);
        num += lhs * rhs;
        den += rhs * rhs;
        ct.max_nabla_xx = std::max(ct.max_nabla_xx, su21_nabla_J(d, x, x).norm());
    }
    ct.lambda = num / den;
    for (const auto& [l, r] : pts)
        ct.max_rel_residual = std::max(ct.max_rel_residual, std::abs(l - ct.lambda * r) / std::max(1.0, std::abs(r)));
    return ct;
}

inline EinsteinFit su21_einstein(const SU21Data& d) { return einstein_fit(ricci_levi_civita(d.split), gram_eps(d.split)); }

// Invariants of the split, J, the nearly para-Kaehler condition and the two constants.
inline Report su21_structure_report(const SU21Data& d, int trials, std::uint64_t seed, const Tolerance& tol = {}) {
    Report rep("su21");
    rep.equal<Index>("dim_b", d.b.dim(), 2, "b is the diagonal part of su(2,1)");
    rep.equal<Index>("dim_n", d.n.dim(), 6, "n is the K-complement of b in h");
    rep.equal<std::string>("signature_n", to_string(gram_signature(d.pair.form, d.n, tol).sig), "(3,3,0)", "K restricted to n is split");
    rep.residual("split_matches_n", span_distance(d.split.n, d.n), tol.abs, "K-complement of b equals the explicit n");
    rep.residual("stabilizer_matches_b", span_distance(stabilizer_of_ray(d.pair, d.S, tol).b, d.b), tol.abs,
                 "stabilizer of the ray of S is b");
    rep.residual("S_null", std::abs(d.pair.K(d.S, d.S)), tol.abs, "S is K-null");
    rep.near("S_pairing", d.pair.K(d.S, d.S_hat), 1.0, tol.abs, "K(S, S^) = 1");

    double null = 0.0;
    for (const RealSubspace* sub : {&d.n_plus, &d.n_minus})
        for (const CMat& x : sub->basis())
            for (const CMat& y : sub->basis()) null = std::max(null, std::abs(d.pair.K(x, y)));
    rep.residual("n_pm_totally_null", null, tol.abs, "n+ and n- are totally null");

    Rng rng(seed);
    double jj = 0.0, anti = 0.0, nxx = 0.0, pure = 0.0, jcomm = 0.0;
    for (int t = 0; t < trials; ++t) {
        const CMat x = su21_random_n(rng), y = su21_random_n(rng);
        jj = std::max(jj, (su21_J(su21_J(x)) - x).norm());
        anti = std::max(anti, std::abs(d.pair.K(su21_J(x), su21_J(y)) + d.pair.K(x, y)));
        nxx = std::max(nxx, su21_nabla_J(d, x, x).norm());
        jcomm = std::max(jcomm, (su21_nabla_J(d, x, su21_J(y)) + su21_J(su21_nabla_J(d, x, y))).norm());
        const CMat xp = su21_vplus(rng.cnormal(), rng.normal()), yp = su21_vplus(rng.cnormal(), rng.normal());
        pure = std::max(pure, (su21_nabla_J(d, xp, yp) + d.split.torsion(xp, yp)).norm());
    }
    rep.residual("J_squared", jj, tol.abs, "J^2 = Id");
    rep.residual("J_anti_isometry", anti, tol.abs, "K(JX, JY) = -K(X, Y)");
    rep.residual("nabla_J_XX", nxx, tol.abs, "(nabla_X J) X = 0");
    rep.residual("nabla_J_anticommutes", jcomm, tol.abs, "(nabla_X J)(JY) = -J (nabla_X J) Y");
    rep.residual("nabla_J_pure_plus", pure, tol.abs, "(nabla_X J) Y = -T(X, Y) for X, Y in n+");

    const ConstantType ct = su21_constant_type(d, trials, seed + 1);
    rep.near("constant_type", ct.lambda, 0.5, 1e-8, "nearly para-Kaehler of constant type 1/2");
    rep.residual("constant_type_fit", ct.max_rel_residual, 1e-8, "norm identity holds with a single constant");
    {
        const CMat x = su21_vplus(1.0, 0.0) + su21_vminus(1.0, 0.0), y = su21_vplus(0.0, 1.0) + su21_vminus(0.0, 1.0);
        const CMat nj = su21_nabla_J(d, x, y);
        const double kxy = d.pair.K(x, y), kjxy = d.pair.K(su21_J(x), y);
        const double rhs = d.pair.K(x, x) * d.pair.K(y, y) - kxy * kxy + kjxy * kjxy;
        rep.near("constant_type_spot", d.pair.K(nj, nj), 0.5 * rhs, tol.abs, "norm identity on simple vectors");
    }
    const EinsteinFit fit = su21_einstein(d);
    rep.near("einstein", fit.lambda, 2.5, 1e-7, "Levi-Civita Ricci is 5/2 times the metric");
    rep.residual("einstein_fit", fit.residual, 1e-7, "Ricci is a multiple of the metric");
    rep.near("einstein_is_5_lambda", fit.lambda, 5.0 * ct.lambda, 1e-7, "Einstein constant equals 5 times the type constant");
    rep.residual("torsion_skew", torsion_skew_residual(d.split, torsion(d.split)), tol.abs, "torsion is totally skew");
    rep.residual("torsion_derivation", torsion_derivation_residual(d.split), tol.abs, "b acts by derivations of the torsion");
    const MultipleOfIdentity wz = wang_ziller_check(d.split, tol);
    rep.truth("casimir_is_multiple", wz.is_multiple, "Casimir of b on n is a multiple of the identity");
    rep.info("casimir_multiple", wz.multiple, "recorded Casimir multiple");
    return rep;
}

// ---------------------------------------------------------------------------
// sp(2,1) inside su*(6), Hermitian form adiag(1,1,1), half-trace form.
// ---------------------------------------------------------------------------

inline CMat sp21_block(const CMat& x, const CMat& y) { return quat_embed({x, y}); }

// X = diag(z, i x, -conj z), Y = adiag(y1, y2, y3)
inline CMat sp21_B(cplx z, double x, cplx y1, cplx y2, cplx y3) {
    CMat X = CMat::Zero(3, 3), Y = CMat::Zero(3, 3);
    X.diagonal() << z, I_unit * x, -std::conj(z);
    Y(0, 2) = y1;
    Y(1, 1) = y2;
    Y(2, 0) = y3;
    return sp21_block(X, Y);
}

inline CMat sp21_B1(double x, cplx y) { return sp21_B(0.0, x, 0.0, y, 0.0); }
inline CMat sp21_B2(cplx z, cplx y, cplx w) { return sp21_B(z, 0.0, y, 0.0, w); }

struct SP21NCoords {
    cplx z1, z2;
    double x1 = 0.0, x2 = 0.0;
    cplx y1, y2, y3;
};

inline CMat sp21_N(const SP21NCoords& c) {
    CMat X(3, 3), Y(3, 3);
    X << 0.0, c.z1, I_unit * c.x1, c.z2, 0.0, -std::conj(c.z1), I_unit * c.x2, -std::conj(c.z2), 0.0;
    Y << c.y1, c.y2, 0.0, c.y3, 0.0, c.y2, 0.0, c.y3, c.y1;
    return sp21_block(X, Y);
}

inline SP21NCoords sp21_n_coords(const CMat& m) {
    const QMat q = quat_blocks(m);
    return {q.U(0, 1), q.U(1, 0), q.U(0, 2).imag(), q.U(2, 0).imag(), q.V(0, 0), q.V(0, 1), q.V(1, 0)};
}

// n -> n^: (x1, x2, i a1, i a2) -> (x1, x2, a1, -a2) on X, sign-flipped Y pattern.
inline CMat sp21_hatn_map(const CMat& m) {
    const SP21NCoords c = sp21_n_coords(m);
    CMat X(3, 3), Y(3, 3);
    X << 0.0, c.z1, c.x1, c.z2, 0.0, std::conj(c.z1), -c.x2, std::conj(c.z2), 0.0;
    Y << c.y1, c.y2, 0.0, c.y3, 0.0, -c.y2, 0.0, -c.y3, -c.y1;
    return sp21_block(X, Y);
}

struct Grading {
    std::vector<CMat> frame;  // S, e^_1..e^_12, -S^ (normalized K(S,S^) = -1)
    RMat gram;                // K on the frame
    RMat so;                  // columns: basis of so(m), vec of 14x14 matrices
    RMat p_minus, p_zero, p_plus, p, p_hat;  // orthonormal columns
};

struct SP21Data {
    double a = 1.0;
    CMat T;
    cplx mu;
    CMat S, S_hat;            // S = diag(S0, conj S0), S_hat = -S^*
    CMat S_unit, S_hat_unit;  // rescaled so that K(S_unit, S_hat_unit) = -1
    SymmetricPair pair;
    RealSubspace b, b1, b2, n, n1, n2;
    std::vector<CMat> A;  // A_1..A_9
    EpsBasis A_basis;
    ReductiveSplit split;
};

inline SP21Data sp21_build(double a = 1.0, const Tolerance& tol = {}) {
    if (a == 0.0) throw std::invalid_argument("sp21_build: a must be nonzero");
    SP21Data d;
    d.a = a;
    d.T = antidiag_ones(3);
    d.mu = cplx(a, a * std::sqrt(3.0));
    d.pair = build_pair({Field::H, 2, 1}, Variant::canonical_T, tol);
    CMat s0 = CMat::Zero(3, 3);
    s0.diagonal() << d.mu, -2.0 * a, std::conj(d.mu);
    d.S = sp21_block(s0, CMat::Zero(3, 3));
    d.S_hat = d.pair.involution(d.S);
    const double k = d.pair.K(d.S, d.S_hat);
    d.S_unit = d.S / std::sqrt(-k);
    d.S_hat_unit = d.S_hat / std::sqrt(-k);

    const double r2 = 1.0 / std::sqrt(2.0);
    d.b1 = RealSubspace(6, 6, {sp21_B1(1, 0), sp21_B1(0, 1), sp21_B1(0, I_unit)}, tol);
    d.b2 = RealSubspace(6, 6,
                        {sp21_B2(I_unit, 0, 0), sp21_B2(0, 1, 1), sp21_B2(0, I_unit, I_unit), sp21_B2(1, 0, 0),
                         sp21_B2(0, 1, -1), sp21_B2(0, I_unit, -I_unit)},
                        tol);
    d.A = {sp21_B1(1, 0),
           sp21_B1(0, 1),
           sp21_B1(0, I_unit),
           r2 * sp21_B2(I_unit, 0, 0),
           r2 * sp21_B2(0, 1, 1),
           r2 * sp21_B2(0, I_unit, I_unit),
           r2 * sp21_B2(1, 0, 0),
           r2 * sp21_B2(0, 1, -1),
           r2 * sp21_B2(0, I_unit, -I_unit)};
    d.A_basis.e = d.A;
    for (const CMat& x : d.A) d.A_basis.eps.push_back(d.pair.K(x, x) > 0 ? 1 : -1);
    d.b = RealSubspace(6, 6, d.A, tol);

    std::vector<CMat> n1, n2;
    for (const cplx u : {cplx(1.0), I_unit}) {
        n1.push_back(sp21_N({u, 0, 0, 0, 0, 0, 0}));
        n1.push_back(sp21_N({0, u, 0, 0, 0, 0, 0}));
        n1.push_back(sp21_N({0, 0, 0, 0, 0, u, 0}));
        n1.push_back(sp21_N({0, 0, 0, 0, 0, 0, u}));
        n2.push_back(sp21_N({0, 0, 0, 0, u, 0, 0}));
    }
    n2.push_back(sp21_N({0, 0, 1, 0, 0, 0, 0}));
    n2.push_back(sp21_N({0, 0, 0, 1, 0, 0, 0}));
    d.n1 = RealSubspace(6, 6, n1, tol);
    d.n2 = RealSubspace(6, 6, n2, tol);
    std::vector<CMat> nb = n1;
    nb.insert(nb.end(), n2.begin(), n2.end());
    d.n = RealSubspace(6, 6, nb, tol);
    d.split = reductive_split(d.pair, d.b, tol);
    return d;
}

inline SP21NCoords sp21_random_ncoords(Rng& rng) {
    return {rng.cnormal(), rng.cnormal(), rng.normal(), rng.normal(), rng.cnormal(), rng.cnormal(), rng.cnormal()};
}

inline Report sp21_action_formulas(const SP21Data& d, int trials, std::uint64_t seed, const Tolerance& tol = {}) {
    Report rep("sp21");
    Rng rng(seed);
    double r1 = 0.0, r2 = 0.0, r3 = 0.0, triv = 0.0;
    auto cj = [](cplx z) { return std::conj(z); };
    for (int t = 0; t < trials; ++t) {
        const SP21NCoords c = sp21_random_ncoords(rng);
        const SP21NCoords c1{c.z1, c.z2, 0, 0, 0, c.y2, c.y3};
        const SP21NCoords c2{0, 0, c.x1, c.x2, c.y1, 0, 0};
        const CMat n1 = sp21_N(c1), n2 = sp21_N(c2);

        const double x = rng.normal();
        const cplx y = rng.cnormal();
        SP21NCoords e1{-I_unit * x * c.z1 + cj(y) * c.y2, I_unit * x * c.z2 - y * cj(c.y3), 0, 0, 0,
                       I_unit * x * c.y2 - y * c.z1, I_unit * x * c.y3 + y * cj(c.z2)};
        r1 = std::max(r1, (bracket(sp21_B1(x, y), n1) - sp21_N(e1)).norm());
        triv = std::max(triv, bracket(sp21_B1(x, y), n2).norm());

        const cplx z = rng.cnormal(), yy = rng.cnormal(), w = rng.cnormal();
        const SP21NCoords e2{z * c.z1 - yy * cj(c.y3), -z * c.z2 + cj(w) * c.y2, 0, 0, 0, z * c.y2 - yy * c.z2,
                             -cj(z) * c.y3 + w * cj(c.z1)};
        r2 = std::max(r2, (bracket(sp21_B2(z, yy, w), n1) - sp21_N(e2)).norm());

        // (i x1, i x2, y1) -> (2i(Re z x1 + Im(conj y y1)), -2i(Re z x2 - Im(conj w y1)), 2i Im z y1 - w i x1 - y i x2)
        const SP21NCoords e3{0,
                             0,
                             2.0 * (z.real() * c.x1 + (cj(yy) * c.y1).imag()),
                             -2.0 * (z.real() * c.x2 - (cj(w) * c.y1).imag()),
                             2.0 * I_unit * z.imag() * c.y1 - w * I_unit * c.x1 - yy * I_unit * c.x2,
                             0,
                             0};
        r3 = std::max(r3, (bracket(sp21_B2(z, yy, w), n2) - sp21_N(e3)).norm());
    }
    rep.residual("action.b1_on_n1", r1, tol.abs, "closed form of ad(b1) on n1");
    rep.residual("action.b2_on_n1", r2, tol.abs, "closed form of ad(b2) on n1");
    rep.residual("action.b2_on_n2", r3, tol.abs, "closed form of ad(b2) on n2");
    rep.residual("action.b1_trivial_on_n2", triv, tol.abs, "b1 acts trivially on n2");

    double perp = 0.0, comm = 0.0;
    for (const CMat& u : d.b1.basis())
        for (const CMat& v : d.b2.basis()) {
            perp = std::max(perp, std::abs(d.pair.K(u, v)));
            comm = std::max(comm, bracket(u, v).norm());
        }
    rep.residual("action.b1_perp_b2", perp, tol.abs, "b1 and b2 are K-orthogonal");
    rep.residual("action.b1_commutes_b2", comm, tol.abs, "b1 and b2 commute");
    return rep;
}

inline RMat sp21_casimir(const SP21Data& d) { return casimir(d.split, d.A_basis); }

inline Report sp21_structure_report(const SP21Data& d, std::uint64_t seed, const Tolerance& tol = {}) {
    Report rep("sp21");
    rep.equal<Index>("dim_b", d.b.dim(), 9, "b = b1 + b2");
    rep.equal<Index>("dim_n", d.n.dim(), 12, "n is the K-complement of b in h");
    rep.residual("split_matches_n", span_distance(d.split.n, d.n), tol.abs, "K-complement of b equals the explicit n");
    rep.residual("stabilizer_matches_b", span_distance(stabilizer_of_ray(d.pair, d.S, tol).b, d.b), tol.abs,
                 "stabilizer of the ray of S is b");
    rep.residual("S_null", std::abs(d.pair.K(d.S, d.S)), tol.abs, "S is K-null");
    rep.near("S_unit_pairing", d.pair.K(d.S_unit, d.S_hat_unit), -1.0, tol.abs, "K(S, S^) = -1 after scaling");

    RMat gram(9, 9);
    for (Index i = 0; i < 9; ++i)
        for (Index j = 0; j < 9; ++j) gram(i, j) = d.pair.K(d.A[i], d.A[j]);
    RMat expected = RMat::Identity(9, 9);
    expected.diagonal().head(6).setConstant(-1.0);
    rep.residual("A_orthonormal", (gram - expected).cwiseAbs().maxCoeff(), tol.abs, "K(A_i, A_j) = eps_i delta_ij");
    rep.equal<std::vector<int>>("A_eps_pattern", d.A_basis.eps, {-1, -1, -1, -1, -1, -1, 1, 1, 1}, "six negative then three positive");

    const AlgebraProfile p1 = algebra_profile(d.b1, tol), p2 = algebra_profile(d.b2, tol);
    rep.equal<std::string>("b1_profile", to_string(p1.killing), "(0,3,0)", "b1 is compact of rank one");
    rep.equal<std::string>("b2_profile", to_string(p2.killing), "(3,3,0)", "b2 has the Killing signature of sl2C");
    rep.equal<std::string>("signature_n", to_string(gram_signature(d.pair.form, d.n, tol).sig), "(5,7,0)", "K restricted to n");

    const RMat chi = sp21_casimir(d);
    rep.residual("casimir_entrywise", (chi - 6.0 * RMat::Identity(chi.rows(), chi.cols())).cwiseAbs().maxCoeff(), 1e-8,
                 "Casimir of the A basis is 6 Id");
    rep.residual("casimir_basis_independent", (casimir(d.split) - chi).cwiseAbs().maxCoeff(), 1e-8,
                 "Casimir agrees on the split's own basis");
    rep.residual("casimir_rerandomized", (casimir_rerandomized(d.split, seed, tol) - chi).cwiseAbs().maxCoeff(), 1e-8,
                 "Casimir agrees on a rerandomized orthonormal basis");
    const MultipleOfIdentity wz = wang_ziller_check(d.split, tol);
    rep.truth("casimir_is_multiple", wz.is_multiple, "Casimir is a multiple of the identity");
    rep.near("casimir_multiple", wz.multiple, 6.0, 1e-8, "Casimir multiple");
    const EinsteinFit fit = einstein_fit(ricci_levi_civita(d.split), gram_eps(d.split));
    rep.residual("einstein_fit", fit.residual, 1e-7, "Levi-Civita Ricci is a multiple of the metric");
    rep.info("einstein", fit.lambda, "recorded Einstein constant");
    rep.residual("torsion_skew", torsion_skew_residual(d.split, torsion(d.split)), tol.abs, "torsion is totally skew");
    rep.residual("torsion_derivation", torsion_derivation_residual(d.split), tol.abs, "b acts by derivations of the torsion");
    return rep;
}

namespace detail {

inline RMat orthonormal_columns(const RMat& m, const Tolerance& tol) {
    if (m.cols() == 0) return m;
    Eigen::JacobiSVD<RMat> svd(m, Eigen::ComputeThinU);
    const RVec& s = svd.singularValues();
    const Index rank = s(0) > 0 ? static_cast<Index>((s.array() > tol.rank_rel * s(0)).count()) : 0;
    return svd.matrixU().leftCols(rank);
}

inline double col_residual(const RMat& q, const RVec& v) { return (v - q * (q.transpose() * v)).norm(); }

inline RMat unvec(const RVec& v, Index n) { return v.reshaped(n, n); }
inline RVec vec(const RMat& m) { return m.reshaped(); }

// Elements of span(basis) trace-orthogonal to span(other): the nilradical when basis = other = a parabolic.
inline RMat trace_orthogonal(const RMat& basis, const RMat& other, Index n, const Tolerance& tol) {
    RMat rows(other.cols(), basis.cols());
    for (Index c = 0; c < basis.cols(); ++c) {
        const RMat z = unvec(basis.col(c), n);
        for (Index l = 0; l < other.cols(); ++l) rows(l, c) = (z * unvec(other.col(l), n)).trace();
    }
    return orthonormal_columns(basis * solve_real_kernel(rows, basis.cols(), tol), tol);
}

inline RMat entries_zero(const RMat& basis, const std::vector<std::pair<Index, Index>>& mask, Index n, const Tolerance& tol) {
    RMat rows(static_cast<Index>(mask.size()), basis.cols());
    for (Index c = 0; c < basis.cols(); ++c) {
        const RMat z = unvec(basis.col(c), n);
        for (std::size_t r = 0; r < mask.size(); ++r) rows(static_cast<Index>(r), c) = z(mask[r].first, mask[r].second);
    }
    return orthonormal_columns(basis * solve_real_kernel(rows, basis.cols(), tol), tol);
}

}  // namespace detail

// |1|-grading of so(m) defined by the null lines through S and S^.
inline Grading sp21_grading(const SP21Data& d, const Tolerance& tol = {}) {
    Grading g;
    const RealSubspace nh = hat_n(d.pair, d.S, d.S_hat, tol);
    const EpsBasis ehat = eps_orthonormalize(d.pair.form, nh, tol);
    g.frame.push_back(d.S_unit);
    g.frame.insert(g.frame.end(), ehat.e.begin(), ehat.e.end());
    g.frame.push_back(-d.S_hat_unit);
    const Index m = static_cast<Index>(g.frame.size());
    g.gram.resize(m, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) g.gram(i, j) = d.pair.K(g.frame[i], g.frame[j]);

    // so(m) = {A : A^T G + G A = 0}
    RMat rows(m * m, m * m);
    for (Index c = 0; c < m * m; ++c) {
        RMat e = RMat::Zero(m, m);
        e(c % m, c / m) = 1.0;
        rows.col(c) = detail::vec(e.transpose() * g.gram + g.gram * e);
    }
    g.so = solve_real_kernel(rows, m * m, tol);

    std::vector<std::pair<Index, Index>> col_first, col_last;
    for (Index k = 1; k < m; ++k) col_first.emplace_back(k, 0);
    for (Index k = 0; k + 1 < m; ++k) col_last.emplace_back(k, m - 1);
    g.p = detail::entries_zero(g.so, col_first, m, tol);
    g.p_hat = detail::entries_zero(g.so, col_last, m, tol);
    std::vector<std::pair<Index, Index>> both = col_first;
    both.insert(both.end(), col_last.begin(), col_last.end());
    g.p_zero = detail::entries_zero(g.so, both, m, tol);
    g.p_plus = detail::trace_orthogonal(g.p, g.p, m, tol);
    g.p_minus = detail::trace_orthogonal(g.p_hat, g.p_hat, m, tol);
    return g;
}

// Matrix of ad(x) on the grading frame.
inline RMat sp21_rho(const SP21Data& d, const Grading& g, const CMat& x) {
    const Index m = static_cast<Index>(g.frame.size());
    const Eigen::PartialPivLU<RMat> gram(g.gram);
    RMat r(m, m);
    for (Index j = 0; j < m; ++j) {
        const CMat y = bracket(x, g.frame[j]);
        RVec rhs(m);
        for (Index i = 0; i < m; ++i) rhs(i) = d.pair.K(g.frame[i], y);
        r.col(j) = gram.solve(rhs);
    }
    return r;
}

struct GradedParts {
    RMat minus, zero, plus;
};

inline GradedParts sp21_graded_parts(const Grading& g, const RMat& a) {
    const Index m = g.gram.rows();
    RMat all(m * m, g.p_minus.cols() + g.p_zero.cols() + g.p_plus.cols());
    all << g.p_minus, g.p_zero, g.p_plus;
    const RVec c = all.colPivHouseholderQr().solve(detail::vec(a));
    const Index km = g.p_minus.cols(), kz = g.p_zero.cols();
    return {detail::unvec(g.p_minus * c.head(km), m), detail::unvec(g.p_zero * c.segment(km, kz), m),
            detail::unvec(g.p_plus * c.tail(g.p_plus.cols()), m)};
}

inline double k_so(const RMat& x, const RMat& y) { return 0.5 * (x * y).trace(); }

inline Report sp21_grading_report(const SP21Data& d, const Grading& g, const Tolerance& tol = {}) {
    Report rep("sp21");
    const Index m = g.gram.rows();
    rep.equal<Index>("grading.dim_so", g.so.cols(), m * (m - 1) / 2, "so(m) of the 14-dim space");
    rep.equal<Index>("grading.dim_p_minus", g.p_minus.cols(), 12, "p- is abelian of dimension 12");
    rep.equal<Index>("grading.dim_p_zero", g.p_zero.cols(), 67, "p0 = co(n^)");
    rep.equal<Index>("grading.dim_p_plus", g.p_plus.cols(), 12, "p+ is abelian of dimension 12");

    auto bracket_res = [&](const RMat& x, const RMat& y, const RMat* target) {
        double r = 0.0;
        for (Index i = 0; i < x.cols(); ++i)
            for (Index j = 0; j < y.cols(); ++j) {
                const RMat a = detail::unvec(x.col(i), m), b = detail::unvec(y.col(j), m);
                const RVec br = detail::vec(a * b - b * a);
                r = std::max(r, target ? detail::col_residual(*target, br) : br.norm());
            }
        return r;
    };
    rep.residual("grading.bracket_minus_plus", bracket_res(g.p_minus, g.p_plus, &g.p_zero), tol.abs, "[p-, p+] in p0");
    rep.residual("grading.bracket_zero_plus", bracket_res(g.p_zero, g.p_plus, &g.p_plus), tol.abs, "[p0, p+] in p+");
    rep.residual("grading.bracket_zero_minus", bracket_res(g.p_zero, g.p_minus, &g.p_minus), tol.abs, "[p0, p-] in p-");
    rep.residual("grading.bracket_plus_plus", bracket_res(g.p_plus, g.p_plus, nullptr), tol.abs, "p+ is abelian");
    rep.residual("grading.bracket_minus_minus", bracket_res(g.p_minus, g.p_minus, nullptr), tol.abs, "p- is abelian");

    // Block shapes: p- lives in column 0 and row m-1, p+ in row 0 and column m-1.
    double shape = 0.0;
    for (Index c = 0; c < g.p_minus.cols(); ++c) {
        RMat a = detail::unvec(g.p_minus.col(c), m);
        a.col(0).setZero();
        a.row(m - 1).setZero();
        shape = std::max(shape, a.norm());
    }
    for (Index c = 0; c < g.p_plus.cols(); ++c) {
        RMat a = detail::unvec(g.p_plus.col(c), m);
        a.row(0).setZero();
        a.col(m - 1).setZero();
        shape = std::max(shape, a.norm());
    }
    rep.residual("grading.block_shape", shape, tol.abs, "p- and p+ have the standard block shape");

    double b_in_p0 = 0.0;
    for (const CMat& x : d.b.basis()) b_in_p0 = std::max(b_in_p0, detail::col_residual(g.p_zero, detail::vec(sp21_rho(d, g, x))));
    rep.residual("grading.b_in_p0", b_in_p0, tol.abs, "the stabilizer b maps into p0");

    RMat joint(m * m, d.n.dim() + g.p_hat.cols());
    for (Index k = 0; k < d.n.dim(); ++k) joint.col(k) = detail::vec(sp21_rho(d, g, d.n[k]));
    joint.rightCols(g.p_hat.cols()) = g.p_hat;
    rep.equal<Index>("grading.n_meet_p_hat", d.n.dim() + g.p_hat.cols() - numerical_rank(joint, tol), 0, "n meets p^ trivially");
    return rep;
}

inline Report sp21_duality_identity(const SP21Data& d, const Grading& g, int trials, std::uint64_t seed, const Tolerance& tol = {}) {
    Report rep("sp21");
    Rng rng(seed);
    const double c2 = 12.0 * d.a * d.a;
    const std::string a_tag = "a=" + std::to_string(static_cast<int>(d.a));
    double rel = 0.0, obs = 0.0;
    for (int t = 0; t < trials; ++t) {
        const CMat x = d.n.combine(rng.normal_vec(d.n.dim())), y = d.n.combine(rng.normal_vec(d.n.dim()));
        const double lhs = c2 * d.pair.K(x, y);
        const double rhs = d.pair.K(bracket(x, d.S), bracket(y, d.S_hat));
        rel = std::max(rel, std::abs(lhs - rhs) / (c2 * x.norm() * y.norm()));
        if (t < 50) {
            const double kso = k_so(sp21_graded_parts(g, sp21_rho(d, g, x)).minus, sp21_graded_parts(g, sp21_rho(d, g, y)).plus);
            const double kg = d.pair.K(bracket(x, d.S_unit), bracket(y, d.S_hat_unit));
            obs = std::max(obs, std::abs(kso - kg) / (x.norm() * y.norm()));
        }
    }
    rep.residual("duality.identity_rel." + a_tag, rel, 1e-8, "12 a^2 K(A,B) = K([A,S],[B,S^]) on n");
    rep.residual("duality.kso_matches_kg." + a_tag, obs, 1e-8, "K_so(rho-(A), rho+(B)) = K([A,S],[B,S^]) for K(S,S^) = -1");
    rep.near("duality_constant." + a_tag, -d.pair.K(d.S, d.S_hat), c2, 1e-9 * c2, "pairing constant 12 a^2");

    // Dual bases E_i = rho-(e_i)/c and E^i = eps_i rho+(e_i)/c pair to the identity; c = 1 for the normalized pair.
    const EpsBasis& e = d.split.nb;
    const double c = std::sqrt(c2 / -d.pair.K(d.S, d.S_hat));
    std::vector<RMat> lower, upper;
    for (Index i = 0; i < e.dim(); ++i) {
        const GradedParts parts = sp21_graded_parts(g, sp21_rho(d, g, e.e[i]));
        lower.push_back(parts.minus / c);
        upper.push_back(e.eps[i] * parts.plus / c);
    }
    RMat pairing(e.dim(), e.dim());
    for (Index i = 0; i < e.dim(); ++i)
        for (Index j = 0; j < e.dim(); ++j) pairing(i, j) = k_so(lower[i], upper[j]);
    rep.residual("duality.dual_basis_pairing." + a_tag, (pairing - RMat::Identity(e.dim(), e.dim())).cwiseAbs().maxCoeff(), 1e-8,
                 "dual bases of p- and p+ pair to the identity");
    return rep;
}

inline Report sp21_hatn_isometry(const SP21Data& d, const Tolerance& tol = {}) {
    Report rep("sp21");
    const HomothetyResult h = homothety_check(d.split, d.S, d.S_hat, sp21_hatn_map, tol);
    rep.truth("hatn.homothetic", h.ok, "n and n^ are homothetic");
    rep.residual("hatn.isometry", h.map_residual.value_or(INFINITY), tol.abs, "explicit map n -> n^ is an isometry");
    rep.info("hatn.signature_n", to_string(h.sig_n), "signature of K on n");
    return rep;
}

// Unit quaternion u + v j -> U = diag(1,u,1), V = diag(0,v,0).
inline CMat sp21_embed_sp1(cplx u, cplx v) {
    CMat U = CMat::Identity(3, 3), V = CMat::Zero(3, 3);
    U(1, 1) = u;
    V(1, 1) = v;
    return sp21_block(U, V);
}

// [[a,b],[c,d]] in SL2C -> A = diag(conj a, 1, d), C = conj(b) E13 - c E31.
inline CMat sp21_embed_sl2(const Eigen::Matrix2cd& g) {
    CMat A = CMat::Zero(3, 3), C = CMat::Zero(3, 3);
    A(0, 0) = std::conj(g(0, 0));
    A(1, 1) = 1.0;
    A(2, 2) = g(1, 1);
    C(0, 2) = std::conj(g(0, 1));
    C(2, 0) = -g(1, 0);
    return sp21_block(A, C);
}

// Residual of the defining relations of the group: conj(A)^T T A + B^T T conj(B) = T, B^T T conj(A) = conj(A)^T T B.
inline double sp21_group_residual(const CMat& m, const CMat& t) {
    const QMat q = quat_blocks(m);
    const CMat& A = q.U;
    const CMat& B = q.V;
    return (A.adjoint() * t * A + B.transpose() * t * B.conjugate() - t).norm() +
           (B.transpose() * t * A.conjugate() - A.adjoint() * t * B).norm() + (m - quat_embed(q)).norm();
}

inline Report sp21_embedding_check(const SP21Data& d, int trials, std::uint64_t seed, const Tolerance& tol = {}) {
    Report rep("sp21");
    Rng rng(seed);
    double member = 0.0, fix = 0.0, hom = 0.0;
    auto ray = [&](const CMat& g) {
        const CMat s = g * d.S * g.inverse();
        const cplx c = (d.S.adjoint() * s).trace() / d.S.squaredNorm();
        return (s - c * d.S).norm();
    };
    auto unit_quat = [&] {
        Eigen::Vector4d q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
        q.normalize();
        return std::pair<cplx, cplx>{cplx(q(0), q(1)), cplx(q(2), q(3))};
    };
    auto sl2 = [&] {
        Eigen::Matrix2cd g;
        g(0, 0) = rng.cnormal() + 2.0;
        g(0, 1) = rng.cnormal();
        g(1, 0) = rng.cnormal();
        g(1, 1) = (1.0 + g(0, 1) * g(1, 0)) / g(0, 0);
        return g;
    };
    for (int t = 0; t < trials; ++t) {
        const auto [u, v] = unit_quat();
        const auto [u2, v2] = unit_quat();
        const CMat q1 = sp21_embed_sp1(u, v), q2 = sp21_embed_sp1(u2, v2);
        const Eigen::Matrix2cd g1 = sl2(), g2 = sl2();
        const CMat s1 = sp21_embed_sl2(g1), s2 = sp21_embed_sl2(g2);
        member = std::max({member, sp21_group_residual(q1, d.T), sp21_group_residual(s1, d.T)});
        fix = std::max({fix, ray(q1), ray(s1)});
        // (u + v j)(u2 + v2 j) = (u u2 - v conj v2) + (u v2 + v conj u2) j
        hom = std::max({hom, (q1 * q2 - sp21_embed_sp1(u * u2 - v * std::conj(v2), u * v2 + v * std::conj(u2))).norm(),
                        (s1 * s2 - sp21_embed_sl2(g1 * g2)).norm(), (q1 * s1 - s1 * q1).norm()});
    }
    rep.residual("embedding.identity", (sp21_embed_sp1(1.0, 0.0) - CMat::Identity(6, 6)).norm() +
                                           (sp21_embed_sl2(Eigen::Matrix2cd::Identity()) - CMat::Identity(6, 6)).norm(),
                 tol.abs, "identity maps to identity");
    rep.residual("embedding.membership", member, tol.abs, "Sp(1) x SL2C lands in the isometry group");
    rep.residual("embedding.fixes_ray", fix, tol.abs, "the image fixes the null ray of S");
    rep.residual("embedding.homomorphism", hom, 1e3 * tol.abs, "the embedding is multiplicative and the factors commute");

    // Both maps are affine in the matrix entries, so differences at the identity give exact derivatives.
    std::vector<CMat> tangent;
    for (const cplx& dir : {I_unit}) tangent.push_back(sp21_embed_sp1(1.0 + dir, 0.0) - sp21_embed_sp1(1.0, 0.0));
    for (const cplx& dir : {cplx(1.0), I_unit}) tangent.push_back(sp21_embed_sp1(1.0, dir) - sp21_embed_sp1(1.0, 0.0));
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (const cplx& dir : {cplx(1.0), I_unit}) {
        Eigen::Matrix2cd h = Eigen::Matrix2cd::Zero();
        h(0, 0) = dir;
        h(1, 1) = -dir;
        tangent.push_back(sp21_embed_sl2(id + h) - sp21_embed_sl2(id));
        Eigen::Matrix2cd e = Eigen::Matrix2cd::Zero(), f = Eigen::Matrix2cd::Zero();
        e(0, 1) = dir;
        f(1, 0) = dir;
        tangent.push_back(sp21_embed_sl2(id + e) - sp21_embed_sl2(id));
        tangent.push_back(sp21_embed_sl2(id + f) - sp21_embed_sl2(id));
    }
    const RealSubspace deriv(6, 6, tangent, tol);
    rep.residual("embedding.derivative_span", span_distance(deriv, d.b), tol.abs, "the derivative algebra of the image is b");
    return rep;
}

}  // namespace symspace
