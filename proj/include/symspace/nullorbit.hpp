#pragma once

#include "matlie.hpp"
#include "sympair.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

namespace symspace {

struct NullVector {
    CMat S;
    std::vector<cplx> eigenvalues;  // generalized (one per 2-dim block) for H
    bool generic = false;
    double nullity_residual = 0.0;  // |K(S,S)| / |S|^2
    double min_gap = 0.0;
};

struct StabilizerResult {
    RealSubspace b;
    Index dim = 0;
    RVec c_functional;  // [X_k, S] = c_k S
};

enum class Conjugation {
    compact,  // by exp of theta-fixed elements of h; keeps ray stabilizers theta-invariant
    full,     // by exp of arbitrary elements of h
};

namespace detail {

inline double gap_threshold(const Tolerance& tol) { return 1e3 * tol.abs; }

// Eigenvalues of S; for H, the 2n eigenvalues of iota(W) collapse in pairs to n generalized ones.
inline std::vector<cplx> null_eigenvalues(const SymmetricPair& pair, const CMat& s) {
    Eigen::ComplexEigenSolver<CMat> es(s, false);
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    auto lex = [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); };
    if (pair.family.field != Field::H) {
        std::sort(ev.begin(), ev.end(), lex);
        return ev;
    }
    std::vector<bool> used(ev.size(), false);
    std::vector<cplx> out;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        std::size_t best = i;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ev.size(); ++j)
            if (!used[j] && std::abs(ev[j] - ev[i]) < bd) {
                bd = std::abs(ev[j] - ev[i]);
                best = j;
            }
        if (best != i) used[best] = true;
        out.push_back(0.5 * (ev[i] + ev[best]));
    }
    std::sort(out.begin(), out.end(), lex);
    return out;
}

inline double min_pairwise_gap(const std::vector<cplx>& ev) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ev.size(); ++i)
        for (std::size_t j = i + 1; j < ev.size(); ++j) g = std::min(g, std::abs(ev[i] - ev[j]));
    return g;
}

// Unitary P whose columns form a frame where the Hermitian form reads T_{p,q,r}:
// positions i and n-1-i (i < r) hold (e_i + f_i)/sqrt2 and (e_i - f_i)/sqrt2; the middle holds
// the remaining positive then negative vectors.
inline CMat null_frame(const CMat& herm, int p, int q, int r) {
    Eigen::SelfAdjointEigenSolver<CMat> es(herm);
    const Index n = herm.rows();
    std::vector<Eigen::VectorXcd> pos, neg;
    for (Index k = 0; k < n; ++k) (es.eigenvalues()(k) > 0 ? pos : neg).push_back(es.eigenvectors().col(k));
    if (static_cast<int>(pos.size()) != p || static_cast<int>(neg.size()) != q)
        throw std::logic_error("null_frame: form has unexpected signature");
    CMat frame(n, n);
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < r; ++i) {
        frame.col(i) = s * (pos[i] + neg[i]);
        frame.col(n - 1 - i) = s * (pos[i] - neg[i]);
    }
    Index c = r;
    for (int i = r; i < p; ++i) frame.col(c++) = pos[i];
    for (int i = r; i < q; ++i) frame.col(c++) = neg[i];
    return frame;
}

// Real orthogonal frame (e_0, f_0, ..., e_{r-1}, f_{r-1}, remaining e, remaining f); the form is diag(+,-,...).
inline RMat real_block_frame(const CMat& herm, int p, int q, int r) {
    Eigen::SelfAdjointEigenSolver<RMat> es(herm.real());
    const Index n = herm.rows();
    std::vector<RVec> pos, neg;
    for (Index k = 0; k < n; ++k) (es.eigenvalues()(k) > 0 ? pos : neg).push_back(es.eigenvectors().col(k));
    RMat frame(n, n);
    Index c = 0;
    for (int i = 0; i < r; ++i) {
        frame.col(c++) = pos[i];
        frame.col(c++) = neg[i];
    }
    for (int i = r; i < p; ++i) frame.col(c++) = pos[i];
    for (int i = r; i < q; ++i) frame.col(c++) = neg[i];
    return frame;
}

struct NullSpectrum {
    std::vector<cplx> pairs;  // r complex values with positive imaginary part
    std::vector<double> reals;  // n - 2r real values
};

// Solves tr = 0 and tr(square) = 0 for r conjugate pairs and n - 2r reals.
inline std::optional<NullSpectrum> draw_null_spectrum(int n, int r, Rng& rng) {
    NullSpectrum sp;
    const int nreal = n - 2 * r;
    for (int k = 0; k < nreal; ++k) sp.reals.push_back(rng.normal());
    std::vector<double> a(r), b(r);
    for (int j = 1; j < r; ++j) {
        a[j] = rng.normal();
        b[j] = 0.5 * rng.normal();
    }
    double sum_real = 0.0, sum_sq = 0.0;
    for (double x : sp.reals) {
        sum_real += x;
        sum_sq += x * x;
    }
    double sum_a = 0.0;
    for (int j = 1; j < r; ++j) sum_a += a[j];
    a[0] = -(2.0 * sum_a + sum_real) / 2.0;
    double b0sq = 0.5 * sum_sq;
    for (int j = 0; j < r; ++j) b0sq += a[j] * a[j];
    for (int j = 1; j < r; ++j) b0sq -= b[j] * b[j];
    if (b0sq < 0.05) return std::nullopt;
    b[0] = std::sqrt(b0sq);
    for (int j = 0; j < r; ++j) sp.pairs.emplace_back(a[j], std::abs(b[j]));
    return sp;
}

inline CMat conjugator(const SymmetricPair& pair, Conjugation mode, Rng& rng) {
    const RealSubspace& src = mode == Conjugation::compact ? pair.h_compact : pair.h;
    return matrix_exp(random_element(src, rng, 1.0));
}

}  // namespace detail

inline NullVector make_null_vector(const SymmetricPair& pair, const CMat& s, const Tolerance& tol = {}) {
    NullVector nv;
    nv.S = s;
    nv.eigenvalues = detail::null_eigenvalues(pair, s);
    const double ns = s.squaredNorm();
    nv.nullity_residual = ns > 0 ? std::abs(pair.K(s, s)) / ns : 0.0;
    nv.min_gap = detail::min_pairwise_gap(nv.eigenvalues);
    nv.generic = nv.min_gap > detail::gap_threshold(tol);
    return nv;
}

// Generic null element of m with a random number r of conjugate eigenvalue pairs.
inline NullVector sample_null_generic(const SymmetricPair& pair, std::uint64_t seed, Conjugation mode = Conjugation::compact,
                                      const Tolerance& tol = {}) {
    const Family& fam = pair.family;
    if (fam.p < 1 || fam.q < 1) throw std::invalid_argument("sample_null_generic: need p, q >= 1");
    const int n = fam.n();
    std::vector<int> feasible;
    for (int r = 1; r <= std::min(fam.p, fam.q); ++r)
        if (n - 2 * r >= 1 || r >= 2) feasible.push_back(r);
    if (feasible.empty()) throw std::invalid_argument("sample_null_generic: no generic null elements for this family");

    Rng rng(seed);
    for (int attempt = 0; attempt < 200; ++attempt) {
        const int r = feasible[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(feasible.size()) - 1))];
        const auto spectrum = detail::draw_null_spectrum(n, r, rng);
        if (!spectrum) continue;
        CMat s;
        if (fam.field == Field::R) {
            RMat d = RMat::Zero(n, n);
            for (int j = 0; j < r; ++j) {
                const double a = spectrum->pairs[j].real(), b = spectrum->pairs[j].imag();
                d.block(2 * j, 2 * j, 2, 2) << a, b, -b, a;
            }
            for (int k = 0; k < n - 2 * r; ++k) d(2 * r + k, 2 * r + k) = spectrum->reals[k];
            const RMat frame = detail::real_block_frame(pair.hermitian, fam.p, fam.q, r);
            s = (frame * d * frame.transpose()).cast<cplx>();
        } else {
            Eigen::VectorXcd diag(n);
            for (int j = 0; j < r; ++j) {
                diag(j) = spectrum->pairs[j];
                diag(n - 1 - j) = std::conj(spectrum->pairs[j]);
            }
            for (int k = 0; k < n - 2 * r; ++k) diag(r + k) = spectrum->reals[k];
            const CMat frame = detail::null_frame(pair.hermitian, fam.p, fam.q, r);
            const CMat x = frame * diag.asDiagonal() * frame.adjoint();
            s = fam.field == Field::H ? quat_embed({x, CMat::Zero(n, n)}) : x;
        }
        const CMat g = detail::conjugator(pair, mode, rng);
        s = g * s * g.inverse();
        if (fam.field == Field::R) s = s.real().cast<cplx>();
        NullVector nv = make_null_vector(pair, s, tol);
        if (nv.generic && nv.nullity_residual < tol.abs && pair.m.residual(s) < tol.abs * std::max(1.0, s.norm())) return nv;
    }
    throw std::runtime_error("sample_null_generic: could not draw a generic null element");
}

// b = {X in h : [X,S] = c S}, from the kernel of (X, c) -> [X,S] - c S.
inline StabilizerResult stabilizer_of_ray(const SymmetricPair& pair, const CMat& s, const Tolerance& tol = {}) {
    const double ns = s.norm();
    if (ns == 0.0) throw std::invalid_argument("stabilizer_of_ray: S = 0");
    const CMat su = s / ns;
    const Index dh = pair.h.dim();
    const RVec fs = flatten(su);
    RMat sys(fs.size(), dh + 1);
    for (Index k = 0; k < dh; ++k) sys.col(k) = flatten(bracket(pair.h[k], su));
    sys.col(dh) = -fs;
    const RMat ker = solve_real_kernel(sys, dh + 1, tol);
    StabilizerResult res;
    if (ker.cols() == 0) {
        res.b = RealSubspace(pair.size(), pair.size());
        res.c_functional = RVec(0);
        return res;
    }
    // The X-block is injective on the kernel (c S = 0 forces c = 0); orthonormalize it.
    Eigen::HouseholderQR<RMat> qr(ker.topRows(dh));
    const RMat xs = qr.householderQ() * RMat::Identity(dh, ker.cols());
    res.b = RealSubspace::from_combinations(pair.size(), pair.size(), pair.h.basis(), xs, tol);
    res.dim = res.b.dim();
    res.c_functional.resize(res.dim);
    for (Index k = 0; k < res.dim; ++k) res.c_functional(k) = flatten(bracket(res.b[k], su)).dot(fs);
    return res;
}

inline StabilizerResult stabilizer_of_ray(const SymmetricPair& pair, const NullVector& s, const Tolerance& tol = {}) {
    return stabilizer_of_ray(pair, s.S, tol);
}

struct Partner {
    NullVector hat;
    double pairing = 0.0;  // K(S, S^)
};

inline Partner partner_null(const SymmetricPair& pair, const NullVector& s, const Tolerance& tol = {}) {
    const CMat hat = pair.involution(s.S);
    return {make_null_vector(pair, hat, tol), pair.K(s.S, hat)};
}

// [[0,0,R_r],[0,I_{p-r,q-r},0],[R_r,0,0]] with R_r the r x r antidiagonal.
inline CMat t_pqr(int p, int q, int r) {
    const int n = p + q;
    CMat t = CMat::Zero(n, n);
    for (int i = 0; i < r; ++i) {
        t(i, n - 1 - i) = 1.0;
        t(n - 1 - i, i) = 1.0;
    }
    for (int k = r; k < p; ++k) t(k, k) = 1.0;
    for (int k = p; k < n - r; ++k) t(k, k) = -1.0;
    return t;
}

namespace detail {

// Right singular vectors for the `dim` smallest singular values of S - lambda.
inline CMat eigenspace(const CMat& s, cplx lambda, Index dim) {
    const CMat a = s - lambda * CMat::Identity(s.rows(), s.cols());
    Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullV);
    return svd.matrixV().rightCols(dim);
}

struct OrderedSpectrum {
    std::vector<cplx> values;  // values[n-1-i] = conj(values[i]) for i < r
    int r = 0;
};

inline OrderedSpectrum order_spectrum(const std::vector<cplx>& ev, double gap) {
    std::vector<cplx> upper, reals;
    for (const cplx& z : ev) {
        if (z.imag() > gap) upper.push_back(z);
        else if (std::abs(z.imag()) <= gap) reals.emplace_back(z.real(), 0.0);
    }
    OrderedSpectrum out;
    out.r = static_cast<int>(upper.size());
    const std::size_t n = ev.size();
    if (2 * upper.size() + reals.size() != n) throw std::runtime_error("spectrum is not closed under conjugation");
    out.values.assign(n, 0.0);
    for (std::size_t i = 0; i < upper.size(); ++i) {
        out.values[i] = upper[i];
        out.values[n - 1 - i] = std::conj(upper[i]);
    }
    for (std::size_t k = 0; k < reals.size(); ++k) out.values[upper.size() + k] = reals[k];
    return out;
}

}  // namespace detail

struct UnitaryFrame {
    CMat basis;  // columns; basis^* M basis = T_{p,q,r}, basis^{-1} S basis diagonal
    int r = 0;
    std::vector<cplx> diagonal;
};

inline UnitaryFrame canonicalize_unitary(const SymmetricPair& pair, const NullVector& s, const Tolerance& tol = {}) {
    if (pair.family.field != Field::C) throw std::invalid_argument("canonicalize_unitary: needs a complex family");
    if (!s.generic) throw std::invalid_argument("canonicalize_unitary: S is not generic");
    const Index n = pair.family.n();
    const CMat& M = pair.hermitian;
    const auto spectrum = detail::order_spectrum(s.eigenvalues, detail::gap_threshold(tol));
    const int r = spectrum.r;
    std::vector<Eigen::VectorXcd> vecs;
    for (const cplx& z : spectrum.values) vecs.push_back(detail::eigenspace(s.S, z, 1).col(0));

    struct Real {
        Eigen::VectorXcd v;
        double norm2;
        double value;
    };
    std::vector<Real> pos, neg;
    for (Index k = r; k < n - r; ++k) {
        const double g = (vecs[k].adjoint() * M * vecs[k])(0, 0).real();
        (g > 0 ? pos : neg).push_back({vecs[k], g, spectrum.values[k].real()});
    }
    auto by_value = [](const Real& a, const Real& b) { return a.value < b.value; };
    std::sort(pos.begin(), pos.end(), by_value);
    std::sort(neg.begin(), neg.end(), by_value);
    if (static_cast<int>(pos.size()) != pair.family.p - r || static_cast<int>(neg.size()) != pair.family.q - r)
        throw std::runtime_error("canonicalize_unitary: real eigenvectors have unexpected signs");

    UnitaryFrame out;
    out.r = r;
    out.basis.resize(n, n);
    out.diagonal.assign(n, 0.0);
    for (int i = 0; i < r; ++i) {
        const Eigen::VectorXcd u = vecs[i];
        Eigen::VectorXcd w = vecs[n - 1 - i];
        const cplx g = (u.adjoint() * M * w)(0, 0);
        w /= g;
        out.basis.col(i) = u;
        out.basis.col(n - 1 - i) = w;
        out.diagonal[i] = spectrum.values[i];
        out.diagonal[n - 1 - i] = spectrum.values[n - 1 - i];
    }
    Index c = r;
    for (const auto* group : {&pos, &neg})
        for (const Real& x : *group) {
            out.basis.col(c) = x.v / std::sqrt(std::abs(x.norm2));
            out.diagonal[c] = x.value;
            ++c;
        }
    return out;
}

struct SymplecticFrame {
    CMat basis;  // (v_1..v_n, w_1..w_n) as columns
    int r = 0;
    std::vector<cplx> eigenvalues;  // v_i has eigenvalue values[i], w_i its conjugate
};

// Pattern matrix T_{n-r,r,r} of the symplectic form in the returned frame.
inline CMat symplectic_pattern(int n, int r) { return t_pqr(n - r, r, r); }

inline SymplecticFrame canonicalize_symplectic(const SymmetricPair& pair, const NullVector& s, const Tolerance& tol = {}) {
    if (pair.family.field != Field::H) throw std::invalid_argument("canonicalize_symplectic: needs a quaternionic family");
    if (!s.generic) throw std::invalid_argument("canonicalize_symplectic: S is not generic");
    const Index n = pair.family.n();
    const CMat& M = pair.hermitian;
    const CMat herm = pair.form_matrix;
    CMat omega = CMat::Zero(2 * n, 2 * n);
    omega.topRightCorner(n, n) = M;
    omega.bottomLeftCorner(n, n) = -M;
    auto om = [&](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) { return (x.transpose() * omega * y)(0, 0); };
    auto hf = [&](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) { return (x.adjoint() * herm * y)(0, 0); };

    const auto spectrum = detail::order_spectrum(s.eigenvalues, detail::gap_threshold(tol));
    const int r = spectrum.r;
    SymplecticFrame out;
    out.r = r;
    out.eigenvalues = spectrum.values;
    out.basis.resize(2 * n, 2 * n);
    auto V = [&](Index i) { return out.basis.col(i); };
    auto W = [&](Index i) { return out.basis.col(n + i); };

    for (int i = 0; i < r; ++i) {
        const CMat ea = detail::eigenspace(s.S, spectrum.values[i], 2);
        const CMat eb = detail::eigenspace(s.S, spectrum.values[n - 1 - i], 2);
        Eigen::VectorXcd a1 = ea.col(0), a2 = ea.col(1), b1 = eb.col(0), b2 = eb.col(1);
        a2 /= om(a1, a2);
        b2 /= om(b1, b2);
        Eigen::Matrix2cd h;
        h << hf(a1, b1), hf(a1, b2), hf(a2, b1), hf(a2, b2);
        // B = sqrt(det H) H^{-1} has determinant one and makes the cross Gram diagonal.
        const Eigen::Matrix2cd bm = std::sqrt(h.determinant()) * h.inverse();
        const Eigen::VectorXcd nb1 = bm(0, 0) * b1 + bm(1, 0) * b2;
        const Eigen::VectorXcd nb2 = bm(0, 1) * b1 + bm(1, 1) * b2;
        V(i) = a1;
        W(n - 1 - i) = a2;
        V(n - 1 - i) = nb1;
        W(i) = nb2;
    }
    for (Index k = r; k < n - r; ++k) {
        const CMat e = detail::eigenspace(s.S, spectrum.values[k], 2);
        Eigen::Matrix2cd g;
        g << hf(e.col(0), e.col(0)), hf(e.col(0), e.col(1)), hf(e.col(1), e.col(0)), hf(e.col(1), e.col(1));
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(g);
        const Index top = std::abs(es.eigenvalues()(0)) > std::abs(es.eigenvalues()(1)) ? 0 : 1;
        const Eigen::VectorXcd v = e * es.eigenvectors().col(top);
        const Eigen::RowVectorXcd row = v.adjoint() * herm * e;
        Eigen::VectorXcd w = e * Eigen::Vector2cd(row(1), -row(0));
        w /= om(v, w);
        V(k) = v;
        W(k) = w;
    }
    return out;
}

enum class OrbitClass { open, two_step_nilpotent, one_step_nilpotent };

inline const char* to_string(OrbitClass c) {
    switch (c) {
        case OrbitClass::open: return "open";
        case OrbitClass::two_step_nilpotent: return "two-step-nilpotent";
        case OrbitClass::one_step_nilpotent: return "one-step-nilpotent";
    }
    return "?";
}

// For null S in m^{so(2,1)}: det S = 0 forces nilpotency, so the powers decide the stratum.
inline OrbitClass so21_orbit_class(const CMat& s, const Tolerance& tol = {}) {
    if (s.rows() != 3 || s.cols() != 3) throw std::invalid_argument("so21_orbit_class: expects a 3x3 matrix");
    const double ns = s.norm();
    if (ns == 0.0) throw std::invalid_argument("so21_orbit_class: S = 0");
    const CMat s2 = s * s;
    if (s2.norm() < tol.abs * ns * ns) return OrbitClass::one_step_nilpotent;
    if ((s2 * s).norm() < tol.abs * ns * ns * ns) return OrbitClass::two_step_nilpotent;
    return OrbitClass::open;
}

// Random representative of an SO(2,1) stratum in the real (2,1) pair.
inline CMat so21_stratum_sample(const SymmetricPair& pair, OrbitClass cls, Rng& rng, const Tolerance& tol = {}) {
    if (pair.family.field != Field::R || pair.family.p != 2 || pair.family.q != 1)
        throw std::invalid_argument("so21_stratum_sample: needs the real (2,1) pair");
    if (cls == OrbitClass::open) {
        const auto seed = static_cast<std::uint64_t>(rng.uniform_int(0, 1 << 30));
        return sample_null_generic(pair, seed, Conjugation::full, tol).S;
    }
    // Nilpotents self-adjoint for adiag(1,1,1): the full Jordan block and E_13.
    CMat nil = CMat::Zero(3, 3);
    if (cls == OrbitClass::two_step_nilpotent) {
        nil(0, 1) = 1.0;
        nil(1, 2) = 1.0;
    } else {
        nil(0, 2) = 1.0;
    }
    const CMat frame = detail::null_frame(pair.hermitian, 2, 1, 1);
    const CMat g = detail::conjugator(pair, Conjugation::full, rng);
    const CMat s = g * frame * nil * frame.adjoint() * g.inverse();
    return s.real().cast<cplx>() * rng.uniform(0.5, 2.0);
}

// (dim m - 2) - dim(H-orbit of the ray) on the Moebius sphere.
inline Index orbit_codimension(const SymmetricPair& pair, const CMat& s, const Tolerance& tol = {}) {
    const Index stab = stabilizer_of_ray(pair, s, tol).dim;
    return (pair.m.dim() - 2) - (pair.h.dim() - stab);
}

}  // namespace symspace
