#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace symspace {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr cplx I_unit{0.0, 1.0};

struct Tolerance {
    double abs = 1e-9;
    double rank_rel = 1e-8;
};

// W = U + V j, with j z = conj(z) j for complex z.
struct QMat {
    CMat U;
    CMat V;
};

// B(X,Y) = scale * Re tr(XY).
struct BilinForm {
    double scale = 1.0;

    double operator()(const CMat& a, const CMat& b) const {
        if (a.cols() != b.rows() || a.rows() != b.cols())
            throw std::invalid_argument("form: size mismatch");
        // Re tr(AB) without forming the product.
        return scale * (a.array() * b.transpose().array()).real().sum();
    }
};

inline BilinForm trace_form() { return BilinForm{1.0}; }
inline BilinForm half_trace_form() { return BilinForm{0.5}; }

inline double form_eval(const BilinForm& f, const CMat& a, const CMat& b) { return f(a, b); }

inline CMat bracket(const CMat& a, const CMat& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("bracket: operands must be square of equal size");
    return a * b - b * a;
}

// iota(U + V j) = [[U, -V], [conj V, conj U]]; multiplicative and *-compatible.
inline CMat quat_embed(const QMat& w) {
    const Index n = w.U.rows();
    if (w.U.cols() != n || w.V.rows() != n || w.V.cols() != n)
        throw std::invalid_argument("quat_embed: U and V must be square of equal size");
    CMat out(2 * n, 2 * n);
    out << w.U, -w.V, w.V.conjugate(), w.U.conjugate();
    return out;
}

// Inverse of quat_embed on its image; the residual to the image is not checked here.
inline QMat quat_blocks(const CMat& m) {
    const Index n = m.rows() / 2;
    return QMat{m.topLeftCorner(n, n), -m.topRightCorner(n, n)};
}

inline CMat adjoint(const CMat& a) { return a.adjoint(); }

inline CMat antidiag_ones(Index n) { return RMat::Identity(n, n).rowwise().reverse().cast<cplx>(); }

inline CMat ipq(Index p, Index q) {
    CMat m = CMat::Identity(p + q, p + q);
    for (Index k = p; k < p + q; ++k) m(k, k) = -1.0;
    return m;
}

// Real coordinates of a complex matrix: row-major real parts, then row-major imaginary parts.
inline RVec flatten(const CMat& a) {
    const Index r = a.rows(), c = a.cols();
    RVec v(2 * r * c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j) {
            v(i * c + j) = a(i, j).real();
            v(r * c + i * c + j) = a(i, j).imag();
        }
    return v;
}

inline CMat unflatten(const RVec& v, Index rows, Index cols) {
    CMat a(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            a(i, j) = cplx(v(i * cols + j), v(rows * cols + i * cols + j));
    return a;
}

inline CMat matrix_exp(const CMat& a) { return a.exp(); }

struct Signature {
    int plus = 0;
    int minus = 0;
    int zero = 0;
    friend bool operator==(const Signature&, const Signature&) = default;
};

inline std::string to_string(const Signature& s) {
    return "(" + std::to_string(s.plus) + "," + std::to_string(s.minus) + "," + std::to_string(s.zero) + ")";
}

inline Signature signature_of(const RMat& sym, const Tolerance& tol) {
    Signature s;
    if (sym.rows() == 0) return s;
    Eigen::SelfAdjointEigenSolver<RMat> es(sym, Eigen::EigenvaluesOnly);
    const RVec& ev = es.eigenvalues();
    const double cut = tol.rank_rel * ev.cwiseAbs().maxCoeff();
    for (Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > cut && ev(i) > 0) ++s.plus;
        else if (ev(i) < -cut && ev(i) < 0) ++s.minus;
        else ++s.zero;
    }
    return s;
}

// Singular values above rank_rel * s_max count; abs_floor additionally discards a matrix that is all rounding noise.
inline Index numerical_rank(const RMat& a, const Tolerance& tol, double abs_floor = 0.0) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<RMat> svd(a);
    const RVec& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    const double cut = std::max(tol.rank_rel * s(0), abs_floor);
    return static_cast<Index>((s.array() > cut).count());
}

// Orthonormal basis (columns) of {x in R^dim : rows * x = 0}.
inline RMat solve_real_kernel(const RMat& rows, Index dim, const Tolerance& tol = {}) {
    if (rows.rows() == 0) return RMat::Identity(dim, dim);
    if (rows.cols() != dim) throw std::invalid_argument("solve_real_kernel: column count differs from dim");
    // Pad to at least dim rows so the full right singular basis is returned.
    RMat a = rows;
    if (a.rows() < dim) {
        a.conservativeResize(dim, Eigen::NoChange);
        a.bottomRows(dim - rows.rows()).setZero();
    }
    Eigen::JacobiSVD<RMat> svd(a, Eigen::ComputeFullV);
    const RVec& s = svd.singularValues();
    Index rank = 0;
    if (s.size() > 0 && s(0) > 0.0) rank = static_cast<Index>((s.array() > tol.rank_rel * s(0)).count());
    return svd.matrixV().rightCols(dim - rank);
}

// Finite-dimensional real subspace of complex rows x cols matrices.
class RealSubspace {
public:
    RealSubspace() = default;

    RealSubspace(Index rows, Index cols) : rows_(rows), cols_(cols), coords_(2 * rows * cols, 0) {}

    RealSubspace(Index rows, Index cols, std::vector<CMat> basis, const Tolerance& tol = {})
        : rows_(rows), cols_(cols), basis_(std::move(basis)) {
        coords_.resize(2 * rows_ * cols_, static_cast<Index>(basis_.size()));
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            if (basis_[k].rows() != rows_ || basis_[k].cols() != cols_)
                throw std::invalid_argument("RealSubspace: basis element has wrong shape");
            coords_.col(static_cast<Index>(k)) = flatten(basis_[k]);
        }
        if (!basis_.empty() && numerical_rank(coords_, tol) != static_cast<Index>(basis_.size()))
            throw std::invalid_argument("RealSubspace: basis is linearly dependent");
        factor();
    }

    // Keeps the elements of `spanning` that are independent of their predecessors.
    static RealSubspace greedy(Index rows, Index cols, const std::vector<CMat>& spanning, const Tolerance& tol = {}) {
        std::vector<CMat> kept;
        RMat q(2 * rows * cols, 0);
        for (const CMat& m : spanning) {
            RVec v = flatten(m);
            const double nv = v.norm();
            if (nv == 0.0) continue;
            for (int pass = 0; pass < 2; ++pass) v -= q * (q.transpose() * v);
            if (v.norm() <= tol.rank_rel * nv * 1e2) continue;
            q.conservativeResize(Eigen::NoChange, q.cols() + 1);
            q.col(q.cols() - 1) = v.normalized();
            kept.push_back(m);
        }
        return RealSubspace(rows, cols, std::move(kept), tol);
    }

    // Subspace spanned by the given real combinations (columns) of `generators`.
    static RealSubspace from_combinations(Index rows, Index cols, const std::vector<CMat>& generators,
                                          const RMat& combos, const Tolerance& tol = {}) {
        std::vector<CMat> out;
        out.reserve(static_cast<std::size_t>(combos.cols()));
        for (Index c = 0; c < combos.cols(); ++c) {
            CMat m = CMat::Zero(rows, cols);
            for (Index k = 0; k < combos.rows(); ++k) m += combos(k, c) * generators[static_cast<std::size_t>(k)];
            out.push_back(std::move(m));
        }
        return RealSubspace(rows, cols, std::move(out), tol);
    }

    Index dim() const { return static_cast<Index>(basis_.size()); }
    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index ambient_dim() const { return 2 * rows_ * cols_; }
    const std::vector<CMat>& basis() const { return basis_; }
    const CMat& operator[](Index k) const { return basis_[static_cast<std::size_t>(k)]; }
    const RMat& coordinate_matrix() const { return coords_; }

    // Least-squares real coordinates of x in this basis.
    RVec coords(const CMat& x) const {
        if (dim() == 0) return RVec(0);
        return qr_.solve(flatten(x));
    }

    CMat combine(const RVec& c) const {
        CMat m = CMat::Zero(rows_, cols_);
        for (Index k = 0; k < dim(); ++k) m += c(k) * basis_[static_cast<std::size_t>(k)];
        return m;
    }

    CMat project(const CMat& x) const { return dim() == 0 ? CMat(CMat::Zero(rows_, cols_)) : combine(coords(x)); }

    // Frobenius distance from x to the subspace.
    double residual(const CMat& x) const { return (x - project(x)).norm(); }

    bool contains(const CMat& x, double abs_tol) const { return residual(x) <= abs_tol; }

private:
    void factor() {
        if (!basis_.empty()) qr_.compute(coords_);
    }

    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<CMat> basis_;
    RMat coords_;
    Eigen::ColPivHouseholderQR<RMat> qr_;
};

inline RMat gram_matrix(const BilinForm& f, const RealSubspace& v) {
    const Index d = v.dim();
    RMat g(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = i; j < d; ++j) g(i, j) = g(j, i) = f(v[i], v[j]);
    return g;
}

struct GramSignature {
    RMat gram;
    Signature sig;
};

inline GramSignature gram_signature(const BilinForm& f, const RealSubspace& v, const Tolerance& tol = {}) {
    RMat g = gram_matrix(f, v);
    Signature s = signature_of(g, tol);
    return {std::move(g), s};
}

struct Complement {
    RealSubspace space;
    bool degenerate = false;
};

// {x in ambient : f(x, v) = 0 for all v in V}. `degenerate` flags f|V singular.
inline Complement orth_complement(const RealSubspace& v, const RealSubspace& ambient, const BilinForm& f,
                                  const Tolerance& tol = {}) {
    RMat rows(v.dim(), ambient.dim());
    for (Index j = 0; j < v.dim(); ++j)
        for (Index k = 0; k < ambient.dim(); ++k) rows(j, k) = f(ambient[k], v[j]);
    const RMat ker = solve_real_kernel(rows, ambient.dim(), tol);
    Complement out;
    out.space = RealSubspace::from_combinations(ambient.rows(), ambient.cols(), ambient.basis(), ker, tol);
    out.degenerate = v.dim() > 0 && gram_signature(f, v, tol).sig.zero > 0;
    return out;
}

// dim(a ∩ b) = dim a + dim b - dim(a + b).
inline Index intersection_dim(const RealSubspace& a, const RealSubspace& b, const Tolerance& tol = {}) {
    RMat both(a.ambient_dim(), a.dim() + b.dim());
    both << a.coordinate_matrix(), b.coordinate_matrix();
    return a.dim() + b.dim() - numerical_rank(both, tol);
}

// Largest residual of a's basis against b.
inline double containment_residual(const RealSubspace& a, const RealSubspace& b) {
    double r = 0.0;
    for (const CMat& m : a.basis()) r = std::max(r, b.residual(m));
    return r;
}

inline double span_distance(const RealSubspace& a, const RealSubspace& b) {
    if (a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
    return std::max(containment_residual(a, b), containment_residual(b, a));
}

// ad[i](k, j) = c_{ij}^k with [v_i, v_j] = sum_k c_{ij}^k v_k.
struct StructureConstants {
    std::vector<RMat> ad;
    bool closed = true;
    double residual = 0.0;
};

inline StructureConstants structure_constants(const RealSubspace& v, const Tolerance& tol = {}) {
    const Index d = v.dim();
    StructureConstants sc;
    sc.ad.assign(static_cast<std::size_t>(d), RMat::Zero(d, d));
    double scale = 0.0;
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j) {
            const CMat b = bracket(v[i], v[j]);
            const RVec c = v.coords(b);
            sc.ad[static_cast<std::size_t>(i)].col(j) = c;
            sc.residual = std::max(sc.residual, (b - v.combine(c)).norm());
            scale = std::max(scale, v[i].norm() * v[j].norm());
        }
    sc.closed = sc.residual <= std::max(tol.abs, tol.rank_rel * scale);
    return sc;
}

struct AlgebraProfile {
    Index dim = 0;
    Signature killing;
    Index center_dim = 0;
    Index derived_dim = 0;
};

// Killing form tr(ad x ad y), center and derived algebra of the abstract algebra spanned by V.
inline AlgebraProfile algebra_profile(const RealSubspace& v, const Tolerance& tol = {}) {
    const StructureConstants sc = structure_constants(v, tol);
    if (!sc.closed) throw std::domain_error("algebra_profile: subspace is not closed under the bracket");
    const Index d = v.dim();
    AlgebraProfile p;
    p.dim = d;
    RMat kil(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            kil(i, j) = (sc.ad[static_cast<std::size_t>(i)] * sc.ad[static_cast<std::size_t>(j)]).trace();
    p.killing = signature_of(kil, tol);
    // center: x with sum_i x_i ad_i = 0.
    RMat center_rows(d * d, d);
    for (Index i = 0; i < d; ++i) center_rows.col(i) = sc.ad[static_cast<std::size_t>(i)].reshaped();
    p.center_dim = d == 0 ? 0 : d - numerical_rank(center_rows, tol, tol.abs);
    // derived algebra: span of the columns c_{ij} = [v_i, v_j].
    RMat brackets(d, d * d);
    for (Index i = 0; i < d; ++i) brackets.middleCols(i * d, d) = sc.ad[static_cast<std::size_t>(i)];
    p.derived_dim = d == 0 ? 0 : numerical_rank(brackets, tol, tol.abs);
    return p;
}

// Splits a semisimple algebra into the invariant subspaces of a generic element of the
// commutant of its adjoint representation; for a real semisimple algebra these are its simple ideals.
inline std::vector<RealSubspace> ideal_decomposition(const RealSubspace& v, const Tolerance& tol = {}) {
    const StructureConstants sc = structure_constants(v, tol);
    if (!sc.closed) throw std::domain_error("ideal_decomposition: subspace is not closed under the bracket");
    const Index d = v.dim();
    if (d == 0) return {};
    // C ad_i - ad_i C = 0, unknown C in column-major order.
    RMat rows(d * d * d, d * d);
    const RMat eye = RMat::Identity(d, d);
    for (Index i = 0; i < d; ++i) {
        const RMat& a = sc.ad[static_cast<std::size_t>(i)];
        rows.middleRows(i * d * d, d * d) = Eigen::kroneckerProduct(a.transpose(), eye) - Eigen::kroneckerProduct(eye, a);
    }
    const RMat ker = solve_real_kernel(rows, d * d, tol);
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> nd;
    RVec w(ker.cols());
    for (Index k = 0; k < w.size(); ++k) w(k) = nd(rng);
    const RMat c = (ker * w).reshaped(d, d);

    Eigen::EigenSolver<RMat> es(c, false);
    const Eigen::VectorXcd ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    const double cluster = 1e-6 * scale;
    std::vector<cplx> reps;
    for (Index k = 0; k < ev.size(); ++k) {
        cplx z = ev(k);
        if (z.imag() < 0) z = std::conj(z);
        bool seen = false;
        for (const cplx& r : reps) seen = seen || std::abs(r - z) < cluster;
        if (!seen) reps.push_back(z);
    }
    std::vector<RealSubspace> ideals;
    for (const cplx& z : reps) {
        RMat op;
        if (std::abs(z.imag()) < cluster) op = c - z.real() * eye;
        else op = c * c - 2.0 * z.real() * c + std::norm(z) * eye;
        const RMat sub = solve_real_kernel(op, d, Tolerance{tol.abs, 1e-6});
        ideals.push_back(RealSubspace::from_combinations(v.rows(), v.cols(), v.basis(), sub, tol));
    }
    return ideals;
}

// Seeded standard-normal source used by every sampler.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double normal() { return dist_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    cplx cnormal() { return {normal(), normal()}; }
    RVec normal_vec(Index n) {
        RVec v(n);
        for (Index k = 0; k < n; ++k) v(k) = normal();
        return v;
    }
    CMat cnormal_mat(Index r, Index c) {
        CMat m(r, c);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j) m(i, j) = cnormal();
        return m;
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> dist_;
};

inline CMat random_element(const RealSubspace& v, Rng& rng, double max_norm = 1.0) {
    if (v.dim() == 0) return CMat::Zero(v.rows(), v.cols());
    CMat x = v.combine(rng.normal_vec(v.dim()));
    const double nx = x.norm();
    return nx > 0 ? CMat(x * (max_norm * rng.uniform(0.1, 1.0) / nx)) : x;
}

}  // namespace symspace
