#pragma once

#include "matlie.hpp"
#include "report.hpp"
#include "sympair.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace symspace {

struct DegenerateForm : std::domain_error {
    using std::domain_error::domain_error;
};

// K-orthonormal basis: K(e_i, e_j) = eps_i delta_ij.
struct EpsBasis {
    std::vector<CMat> e;
    std::vector<int> eps;

    Index dim() const { return static_cast<Index>(e.size()); }
};

// Orthonormalizes through the eigenvectors of the Gram matrix, which never meets a null pivot.
inline EpsBasis eps_orthonormalize(const BilinForm& f, const RealSubspace& v, const Tolerance& tol = {}) {
    const auto gs = gram_signature(f, v, tol);
    if (gs.sig.zero > 0) throw DegenerateForm("form is degenerate on the subspace");
    EpsBasis out;
    if (v.dim() == 0) return out;
    Eigen::SelfAdjointEigenSolver<RMat> es(gs.gram);
    for (Index i = 0; i < v.dim(); ++i) {
        const double lam = es.eigenvalues()(i);
        out.e.push_back(v.combine(es.eigenvectors().col(i)) / std::sqrt(std::abs(lam)));
        out.eps.push_back(lam > 0 ? 1 : -1);
    }
    return out;
}

struct ReductiveSplit {
    SymmetricPair pair;
    RealSubspace b;
    RealSubspace n;
    EpsBasis nb;  // eps basis of n
    EpsBasis bb;  // eps basis of b
    double invariance_residual = 0.0;  // max residual of [b, n] against n

    Index dim() const { return nb.dim(); }
    double K(const CMat& x, const CMat& y) const { return pair.form(x, y); }

    RVec coords_n(const CMat& x) const {
        RVec c(nb.dim());
        for (Index k = 0; k < nb.dim(); ++k) c(k) = nb.eps[k] * K(x, nb.e[k]);
        return c;
    }
    CMat from_coords_n(const RVec& c) const {
        CMat x = CMat::Zero(pair.size(), pair.size());
        for (Index k = 0; k < nb.dim(); ++k) x += c(k) * nb.e[k];
        return x;
    }
    CMat project_n(const CMat& x) const { return from_coords_n(coords_n(x)); }
    CMat project_b(const CMat& x) const {
        CMat y = CMat::Zero(pair.size(), pair.size());
        for (Index k = 0; k < bb.dim(); ++k) y += bb.eps[k] * K(x, bb.e[k]) * bb.e[k];
        return y;
    }
    // T(u,v) = -[u,v]_n
    CMat torsion(const CMat& u, const CMat& v) const { return -project_n(bracket(u, v)); }
};

inline ReductiveSplit reductive_split(const SymmetricPair& pair, const RealSubspace& b, const Tolerance& tol = {}) {
    ReductiveSplit s;
    s.pair = pair;
    s.b = b;
    s.bb = eps_orthonormalize(pair.form, b, tol);
    s.n = orth_complement(b, pair.h, pair.form, tol).space;
    s.nb = eps_orthonormalize(pair.form, s.n, tol);
    for (const CMat& x : b.basis())
        for (const CMat& y : s.n.basis()) s.invariance_residual = std::max(s.invariance_residual, s.n.residual(bracket(x, y)));
    return s;
}

// t(i,j,k) = T_{ij}^k with T(e_i,e_j) = sum_k T_{ij}^k e_k.
class Tensor3 {
public:
    explicit Tensor3(Index d = 0) : d_(d), data_(static_cast<std::size_t>(d * d * d), 0.0) {}
    Index dim() const { return d_; }
    double& operator()(Index i, Index j, Index k) { return data_[static_cast<std::size_t>((i * d_ + j) * d_ + k)]; }
    double operator()(Index i, Index j, Index k) const { return data_[static_cast<std::size_t>((i * d_ + j) * d_ + k)]; }
    double max_abs() const {
        double m = 0.0;
        for (double x : data_) m = std::max(m, std::abs(x));
        return m;
    }

private:
    Index d_;
    std::vector<double> data_;
};

inline Tensor3 torsion(const ReductiveSplit& s) {
    const Index d = s.dim();
    Tensor3 t(d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
            const RVec c = s.coords_n(bracket(s.nb.e[i], s.nb.e[j]));
            for (Index k = 0; k < d; ++k) t(i, j, k) = -c(k);
        }
    return t;
}

// Largest deviation of K(T(e_i,e_j), e_k) from total antisymmetry.
inline double torsion_skew_residual(const ReductiveSplit& s, const Tensor3& t) {
    const Index d = t.dim();
    auto low = [&](Index i, Index j, Index k) { return t(i, j, k) * s.nb.eps[k]; };
    double r = 0.0;
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            for (Index k = 0; k < d; ++k) {
                const double x = low(i, j, k);
                r = std::max({r, std::abs(x + low(j, i, k)), std::abs(x + low(i, k, j)), std::abs(x + low(k, j, i)),
                              std::abs(x - low(j, k, i)), std::abs(x - low(k, i, j))});
            }
    return r;
}

inline double torsion_derivation_residual(const ReductiveSplit& s) {
    double r = 0.0;
    const Index d = s.dim();
    for (const CMat& b : s.b.basis())
        for (Index i = 0; i < d; ++i)
            for (Index j = i + 1; j < d; ++j) {
                const CMat& u = s.nb.e[i];
                const CMat& v = s.nb.e[j];
                const CMat lhs = bracket(b, s.torsion(u, v));
                const CMat rhs = s.torsion(s.project_n(bracket(b, u)), v) + s.torsion(u, s.project_n(bracket(b, v)));
                r = std::max(r, (lhs - rhs).norm() / std::max(1.0, b.norm()));
            }
    return r;
}

inline Report torsion_derivation_check(const ReductiveSplit& s, const Tolerance& tol = {}) {
    Report rep("torsion");
    rep.residual("torsion_derivation", torsion_derivation_residual(s), tol.abs, "ad(b) acts on the torsion by derivations");
    return rep;
}

// Matrix on n-coordinates of w -> -[[u,v]_b, w].
inline RMat canonical_curvature(const ReductiveSplit& s, const CMat& u, const CMat& v) {
    const CMat ub = s.project_b(bracket(u, v));
    RMat r(s.dim(), s.dim());
    for (Index j = 0; j < s.dim(); ++j) r.col(j) = s.coords_n(-bracket(ub, s.nb.e[j]));
    return r;
}

inline RMat gram_eps(const ReductiveSplit& s) {
    RMat g = RMat::Zero(s.dim(), s.dim());
    for (Index i = 0; i < s.dim(); ++i) g(i, i) = s.nb.eps[i];
    return g;
}

// Ric(X,Y) = sum_i eps_i K(R(e_i,X) e_i, Y). This contraction is the negative of
// sum_i eps_i K(R(e_i,X)Y, e_i); with it the torsion correction below enters with -1/4.
inline RMat ricci_canonical(const ReductiveSplit& s) {
    const Index d = s.dim();
    RMat ric = RMat::Zero(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index x = 0; x < d; ++x) {
            const RMat r = canonical_curvature(s, s.nb.e[i], s.nb.e[x]);
            // (R(e_i,e_x) e_i) has coordinates r.col(i); pair with e_y.
            for (Index y = 0; y < d; ++y) ric(x, y) += s.nb.eps[i] * r(y, i) * s.nb.eps[y];
        }
    return ric;
}

inline RMat torsion_square(const ReductiveSplit& s) {
    const Index d = s.dim();
    RMat q = RMat::Zero(d, d);
    std::vector<std::vector<RVec>> tc(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i)
        for (Index x = 0; x < d; ++x) tc[static_cast<std::size_t>(i)].push_back(s.coords_n(s.torsion(s.nb.e[i], s.nb.e[x])));
    const RVec eps = Eigen::Map<const Eigen::VectorXi>(s.nb.eps.data(), d).cast<double>();
    for (Index i = 0; i < d; ++i)
        for (Index x = 0; x < d; ++x)
            for (Index y = 0; y < d; ++y)
                q(x, y) += s.nb.eps[i] * (tc[i][x].array() * tc[i][y].array() * eps.array()).sum();
    return q;
}

inline RMat ricci_levi_civita(const ReductiveSplit& s) { return ricci_canonical(s) - 0.25 * torsion_square(s); }

struct EinsteinFit {
    double lambda = 0.0;
    double residual = 0.0;  // max entry of Ric - lambda * Gram
};

inline EinsteinFit einstein_fit(const RMat& ric, const RMat& gram) {
    EinsteinFit f;
    const double gg = gram.squaredNorm();
    f.lambda = gg > 0 ? (ric.array() * gram.array()).sum() / gg : 0.0;
    f.residual = ric.size() ? (ric - f.lambda * gram).cwiseAbs().maxCoeff() : 0.0;
    return f;
}

// Matrix on n-coordinates of ad(x).
inline RMat rho(const ReductiveSplit& s, const CMat& x) {
    RMat r(s.dim(), s.dim());
    for (Index j = 0; j < s.dim(); ++j) r.col(j) = s.coords_n(bracket(x, s.nb.e[j]));
    return r;
}

inline RMat casimir(const ReductiveSplit& s, const EpsBasis& basis) {
    RMat c = RMat::Zero(s.dim(), s.dim());
    for (Index a = 0; a < basis.dim(); ++a) {
        const RMat r = rho(s, basis.e[a]);
        c += basis.eps[a] * r * r;
    }
    return c;
}

inline RMat casimir(const ReductiveSplit& s) { return casimir(s, s.bb); }

// Casimir on an eps basis of b obtained from a random basis change.
inline RMat casimir_rerandomized(const ReductiveSplit& s, std::uint64_t seed, const Tolerance& tol = {}) {
    Rng rng(seed);
    const Index d = s.b.dim();
    std::vector<CMat> mixed;
    RMat mix = RMat::Identity(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) mix(i, j) += 0.5 * rng.normal();
    const RealSubspace shuffled = RealSubspace::from_combinations(s.pair.size(), s.pair.size(), s.b.basis(), mix, tol);
    return casimir(s, eps_orthonormalize(s.pair.form, shuffled, tol));
}

struct MultipleOfIdentity {
    bool is_multiple = false;
    double multiple = 0.0;
    double residual = 0.0;
};

inline MultipleOfIdentity wang_ziller_check(const ReductiveSplit& s, const Tolerance& tol = {}) {
    const RMat c = casimir(s);
    MultipleOfIdentity out;
    if (c.rows() == 0) return {true, 0.0, 0.0};
    out.multiple = c.trace() / static_cast<double>(c.rows());
    out.residual = (c - out.multiple * RMat::Identity(c.rows(), c.cols())).cwiseAbs().maxCoeff();
    out.is_multiple = out.residual <= tol.abs * std::max(1.0, std::abs(out.multiple)) * 10.0;
    return out;
}

struct HomothetyResult {
    bool ok = false;
    Index dim_n = 0;
    Index dim_nhat = 0;
    Signature sig_n;
    Signature sig_nhat;
    std::optional<double> map_residual;  // Gram residual of an explicit map, when supplied
    std::string note;
};

inline RealSubspace hat_n(const SymmetricPair& pair, const CMat& s, const CMat& shat, const Tolerance& tol = {}) {
    const RealSubspace span(pair.size(), pair.size(), {s, shat}, tol);
    return orth_complement(span, pair.m, pair.form, tol).space;
}

// Equal dimension and signatures equal up to an overall sign; optionally checks an explicit isometry n -> n^.
inline HomothetyResult homothety_check(const ReductiveSplit& split, const CMat& s, const CMat& shat,
                                       const std::function<CMat(const CMat&)>& map = {}, const Tolerance& tol = {}) {
    HomothetyResult r;
    const RealSubspace nh = hat_n(split.pair, s, shat, tol);
    r.dim_n = split.n.dim();
    r.dim_nhat = nh.dim();
    r.sig_n = gram_signature(split.pair.form, split.n, tol).sig;
    r.sig_nhat = gram_signature(split.pair.form, nh, tol).sig;
    const Signature flipped{r.sig_nhat.minus, r.sig_nhat.plus, r.sig_nhat.zero};
    r.ok = r.dim_n == r.dim_nhat && (r.sig_n == r.sig_nhat || r.sig_n == flipped);
    r.note = "sig(n)=" + to_string(r.sig_n) + " sig(n^)=" + to_string(r.sig_nhat);
    if (map) {
        double res = 0.0, membership = 0.0;
        std::vector<CMat> img;
        for (const CMat& x : split.n.basis()) {
            img.push_back(map(x));
            membership = std::max(membership, nh.residual(img.back()));
        }
        for (std::size_t i = 0; i < img.size(); ++i)
            for (std::size_t j = 0; j < img.size(); ++j)
                res = std::max(res, std::abs(split.K(img[i], img[j]) - split.K(split.n.basis()[i], split.n.basis()[j])));
        r.map_residual = std::max(res, membership);
        r.ok = r.ok && *r.map_residual <= tol.abs;
    }
    return r;
}

}  // namespace symspace
