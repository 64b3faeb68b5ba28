#include <symspace/nullorbit.hpp>

#include <gtest/gtest.h>

using namespace symspace;

namespace {

const SymmetricPair& pair_of(Field f, int p, int q, Variant v = Variant::standard) {
    static std::map<std::tuple<int, int, int, int>, SymmetricPair> cache;
    const auto key = std::make_tuple(static_cast<int>(f), p, q, static_cast<int>(v));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_pair({f, p, q}, v)).first;
    return it->second;
}

}  // namespace

TEST(Sampling, NullGenericInM) {
    for (Field f : {Field::R, Field::C, Field::H}) {
        const SymmetricPair& pair = pair_of(f, 2, 1);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            for (Conjugation mode : {Conjugation::compact, Conjugation::full}) {
                const NullVector s = sample_null_generic(pair, seed, mode);
                EXPECT_TRUE(s.generic);
                EXPECT_LT(s.nullity_residual, 1e-12);
                EXPECT_LT(pair.m.residual(s.S), 1e-10 * std::max(1.0, s.S.norm()));
                EXPECT_NEAR(s.S.trace().real(), 0.0, 1e-10);
            }
        }
    }
}

TEST(Sampling, Deterministic) {
    const SymmetricPair& pair = pair_of(Field::C, 2, 1);
    EXPECT_EQ((sample_null_generic(pair, 9).S - sample_null_generic(pair, 9).S).norm(), 0.0);
    EXPECT_GT((sample_null_generic(pair, 9).S - sample_null_generic(pair, 10).S).norm(), 0.0);
}

TEST(Sampling, DefiniteFormsHaveNoNullCone) {
    EXPECT_THROW(sample_null_generic(build_pair({Field::C, 3, 0}), 0), std::invalid_argument);
}

TEST(Stabilizer, GenericDimensions) {
    const std::vector<std::tuple<Field, int, int, Index>> cases{
        {Field::C, 2, 1, 2}, {Field::R, 2, 1, 0}, {Field::H, 2, 1, 9}, {Field::C, 3, 1, 3}, {Field::R, 3, 1, 0}, {Field::C, 2, 2, 3}};
    for (const auto& [f, p, q, dim] : cases) {
        const SymmetricPair& pair = pair_of(f, p, q);
        for (std::uint64_t seed = 0; seed < 8; ++seed)
            EXPECT_EQ(stabilizer_of_ray(pair, sample_null_generic(pair, seed)).dim, dim) << pair.family.label() << " seed " << seed;
    }
}

TEST(Stabilizer, CanonicalFormRegression) {
    // Sample whose stabilizer system once showed spurious small singular values.
    const SymmetricPair& pair = pair_of(Field::H, 2, 1, Variant::canonical_T);
    for (std::uint64_t seed = 0; seed < 8; ++seed) EXPECT_EQ(stabilizer_of_ray(pair, sample_null_generic(pair, seed)).dim, 9);
}

TEST(Stabilizer, GenericRayIsFixedNotScaled) {
    // A generic null S is not nilpotent, and [X,S] = cS with c != 0 would make it so.
    const SymmetricPair& pair = pair_of(Field::C, 2, 1);
    const NullVector s = sample_null_generic(pair, 4);
    const StabilizerResult st = stabilizer_of_ray(pair, s);
    for (Index k = 0; k < st.dim; ++k) {
        EXPECT_TRUE(pair.h.contains(st.b[k], 1e-9));
        EXPECT_NEAR(st.c_functional(k), 0.0, 1e-9);
        EXPECT_LT(bracket(st.b[k], s.S).norm(), 1e-9 * s.S.norm());
    }
}

TEST(Stabilizer, NilpotentRayIsScaled) {
    const SymmetricPair& pair = pair_of(Field::R, 2, 1);
    Rng rng(4);
    const CMat s = so21_stratum_sample(pair, OrbitClass::one_step_nilpotent, rng);
    const StabilizerResult st = stabilizer_of_ray(pair, s);
    bool scaling = false;
    for (Index k = 0; k < st.dim; ++k) {
        EXPECT_LT((bracket(st.b[k], s) - st.c_functional(k) * s).norm(), 1e-9 * s.norm());
        scaling = scaling || std::abs(st.c_functional(k)) > 1e-3;
    }
    EXPECT_TRUE(scaling);
}

TEST(Stabilizer, ZeroRejected) {
    EXPECT_THROW(stabilizer_of_ray(pair_of(Field::R, 2, 1), CMat::Zero(3, 3)), std::invalid_argument);
}

TEST(Stabilizer, ThetaInvariantAndPartner) {
    for (Field f : {Field::C, Field::H}) {
        const SymmetricPair& pair = pair_of(f, 2, 1);
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const NullVector s = sample_null_generic(pair, seed, Conjugation::compact);
            const StabilizerResult st = stabilizer_of_ray(pair, s);
            std::vector<CMat> tb;
            for (const CMat& x : st.b.basis()) tb.push_back(pair.involution(x));
            EXPECT_LT(span_distance(st.b, RealSubspace(pair.size(), pair.size(), tb)), 1e-9);
            const Partner hat = partner_null(pair, s);
            EXPECT_LT(hat.hat.nullity_residual, 1e-12);
            EXPECT_LT(hat.pairing, 0.0);
            EXPECT_LT(span_distance(st.b, stabilizer_of_ray(pair, hat.hat).b), 1e-9);
        }
    }
}

TEST(Stabilizer, TwoIdealsForQuaternions) {
    const SymmetricPair& pair = pair_of(Field::H, 2, 1);
    const StabilizerResult st = stabilizer_of_ray(pair, sample_null_generic(pair, 2));
    const AlgebraProfile prof = algebra_profile(st.b);
    EXPECT_EQ(prof.killing, (Signature{3, 6, 0}));
    EXPECT_EQ(prof.center_dim, 0);
    std::vector<std::pair<Index, Signature>> ideals;
    for (const RealSubspace& id : ideal_decomposition(st.b)) ideals.emplace_back(id.dim(), algebra_profile(id).killing);
    std::sort(ideals.begin(), ideals.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    ASSERT_EQ(ideals.size(), 2u);
    EXPECT_EQ(ideals[0].first, 3);
    EXPECT_EQ(ideals[0].second, (Signature{0, 3, 0}));
    EXPECT_EQ(ideals[1].first, 6);
    EXPECT_EQ(ideals[1].second, (Signature{3, 3, 0}));
}

TEST(Stabilizer, ComplexThreeIsAbelian) {
    const SymmetricPair& pair = pair_of(Field::C, 2, 1);
    const AlgebraProfile prof = algebra_profile(stabilizer_of_ray(pair, sample_null_generic(pair, 1)).b);
    EXPECT_EQ(prof.center_dim, 2);
    EXPECT_EQ(prof.derived_dim, 0);
}

TEST(Codimension, GenericOrbits) {
    const std::vector<std::tuple<Field, int, int, Index>> cases{
        {Field::R, 2, 1, 0}, {Field::R, 3, 1, 1}, {Field::R, 3, 2, 2}, {Field::C, 2, 1, 0}, {Field::H, 2, 1, 0}};
    for (const auto& [f, p, q, codim] : cases) {
        const SymmetricPair& pair = pair_of(f, p, q);
        EXPECT_EQ(orbit_codimension(pair, sample_null_generic(pair, 3, Conjugation::full).S), codim) << pair.family.label();
    }
}

TEST(TFrame, Pattern) {
    CMat expected = CMat::Zero(4, 4);
    expected(0, 3) = expected(3, 0) = 1.0;
    expected(1, 1) = 1.0;
    expected(2, 2) = -1.0;
    EXPECT_EQ((t_pqr(2, 2, 1) - expected).norm(), 0.0);
    EXPECT_EQ((t_pqr(2, 1, 0) - ipq(2, 1)).norm(), 0.0);
}

TEST(UnitaryFrame, NormalForm) {
    for (const auto& [p, q] : std::vector<std::pair<int, int>>{{2, 1}, {3, 2}, {2, 2}}) {
        const SymmetricPair& pair = pair_of(Field::C, p, q);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const NullVector s = sample_null_generic(pair, seed, Conjugation::full);
            const UnitaryFrame fr = canonicalize_unitary(pair, s);
            EXPECT_LT((fr.basis.adjoint() * pair.hermitian * fr.basis - t_pqr(p, q, fr.r)).norm(), 1e-8);
            CMat d = CMat::Zero(p + q, p + q);
            for (int i = 0; i < p + q; ++i) d(i, i) = fr.diagonal[i];
            EXPECT_LT((fr.basis.inverse() * s.S * fr.basis - d).norm(), 1e-8 * s.S.norm());
            // paired eigenvalues are conjugate
            for (int i = 0; i < fr.r; ++i) EXPECT_LT(std::abs(fr.diagonal[p + q - 1 - i] - std::conj(fr.diagonal[i])), 1e-8);
        }
    }
}

TEST(UnitaryFrame, WrongField) {
    const SymmetricPair& pair = pair_of(Field::R, 2, 1);
    EXPECT_THROW(canonicalize_unitary(pair, sample_null_generic(pair, 0)), std::invalid_argument);
}

TEST(SymplecticFrame, NormalForm) {
    const SymmetricPair& pair = pair_of(Field::H, 2, 1);
    const Index n = 3;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const NullVector s = sample_null_generic(pair, seed, Conjugation::full);
        const SymplecticFrame fr = canonicalize_symplectic(pair, s);
        const CMat pat = symplectic_pattern(3, fr.r);
        CMat omega = CMat::Zero(6, 6), target = CMat::Zero(6, 6);
        omega.topRightCorner(n, n) = pair.hermitian;
        omega.bottomLeftCorner(n, n) = -pair.hermitian;
        target.topRightCorner(n, n) = pat;
        target.bottomLeftCorner(n, n) = -pat;
        EXPECT_LT((fr.basis.transpose() * omega * fr.basis - target).norm(), 1e-8) << "seed " << seed;
        // Hermitian Gram is supported on the pattern positions.
        const CMat herm = fr.basis.adjoint() * pair.form_matrix * fr.basis;
        double off = 0.0;
        for (Index i = 0; i < 6; ++i)
            for (Index j = 0; j < 6; ++j) {
                const bool on = std::abs(pat(i % n, j % n)) > 0.5 && (i < n) == (j < n);
                if (!on) off = std::max(off, std::abs(herm(i, j)));
            }
        EXPECT_LT(off, 1e-8) << "seed " << seed;
    }
}

TEST(So21, StrataClassesAndStabilizers) {
    const SymmetricPair& pair = pair_of(Field::R, 2, 1);
    Rng rng(11);
    const std::vector<std::pair<OrbitClass, Index>> strata{
        {OrbitClass::open, 0}, {OrbitClass::two_step_nilpotent, 1}, {OrbitClass::one_step_nilpotent, 2}};
    for (const auto& [cls, dim] : strata) {
        for (int t = 0; t < 50; ++t) {
            const CMat s = so21_stratum_sample(pair, cls, rng);
            EXPECT_LT(std::abs(pair.K(s, s)), 1e-9 * s.squaredNorm());
            EXPECT_LT(pair.m.residual(s), 1e-9 * s.norm());
            EXPECT_EQ(so21_orbit_class(s), cls);
            EXPECT_EQ(stabilizer_of_ray(pair, s).dim, dim);
            EXPECT_EQ(orbit_codimension(pair, s), dim);
        }
    }
}

TEST(So21, ClassifierErrors) {
    EXPECT_THROW(so21_orbit_class(CMat::Zero(3, 3)), std::invalid_argument);
    EXPECT_THROW(so21_orbit_class(CMat::Identity(2, 2)), std::invalid_argument);
    Rng rng(0);
    EXPECT_THROW(so21_stratum_sample(pair_of(Field::C, 2, 1), OrbitClass::open, rng), std::invalid_argument);
}
