#include <symspace/casestudies.hpp>

#include <gtest/gtest.h>

#include <numbers>

using namespace symspace;

namespace {

const SP21Data& sp21(int a) {
    static const SP21Data one = sp21_build(1.0), two = sp21_build(2.0);
    return a == 1 ? one : two;
}

void expect_all_pass(const Report& r) {
    for (const Check& c : r.checks()) EXPECT_NE(c.status, Status::fail) << c.name << " observed " << c.observed;
}

}  // namespace

TEST(Su21, RejectsZeroScale) {
    EXPECT_THROW(su21_build(0.0), std::invalid_argument);
    EXPECT_THROW(sp21_build(0.0), std::invalid_argument);
    EXPECT_THROW(su21_ad_action(0.3, 0.0), std::invalid_argument);
}

TEST(Su21, NormOfSIsTwelveASquared) {
    // |mu|^2 + 4a^2 + |mu|^2 with |mu| = 2a
    for (double a : {1.0, 2.0, -0.5}) {
        const SU21Data d = su21_build(a);
        EXPECT_NEAR(d.S.squaredNorm(), 12.0 * a * a, 1e-12);
        EXPECT_NEAR(d.pair.K(d.S, d.S), 0.0, 1e-12);
        EXPECT_NEAR(d.pair.K(d.S, d.S_hat), 1.0, 1e-12);
    }
}

TEST(Su21, SpotBracket) {
    CMat expected = CMat::Zero(3, 3);
    expected.diagonal() << -1.0, 0.0, 1.0;
    EXPECT_LT((bracket(su21_vplus(1.0, 0.0), su21_vminus(1.0, 0.0)) - expected).norm(), 1e-14);
}

TEST(Su21, CoordinatesRoundTrip) {
    Rng rng(5);
    const cplx x = rng.cnormal(), y = rng.cnormal();
    const SU21Coords c = su21_coords(su21_v(x, y, 0.25, -1.5));
    EXPECT_EQ(c.x, x);
    EXPECT_EQ(c.y, y);
    EXPECT_DOUBLE_EQ(c.gamma, 0.25);
    EXPECT_DOUBLE_EQ(c.delta, -1.5);
}

TEST(Su21, BracketTable) { expect_all_pass(su21_bracket_table(su21_build(1.0), 50, 1)); }

TEST(Su21, AdAction) {
    expect_all_pass(su21_ad_action(0.0, 1.0));
    expect_all_pass(su21_ad_action(std::numbers::pi / 3.0, 2.0, 7));
    expect_all_pass(su21_ad_action(-1.1, 0.3, 8));
}

TEST(Su21, StructureReport) {
    for (double a : {1.0, 2.0}) {
        const Report r = su21_structure_report(su21_build(a), 40, 3);
        expect_all_pass(r);
        EXPECT_GT(r.count(Status::pass), 20);
        ASSERT_NE(r.find("casimir_multiple"), nullptr);
    }
}

TEST(Su21, ConstantsIndependentOfScale) {
    for (double a : {0.5, 1.0, 3.0}) {
        const SU21Data d = su21_build(a);
        EXPECT_NEAR(su21_constant_type(d, 30, 2).lambda, 0.5, 1e-9);
        EXPECT_NEAR(su21_einstein(d).lambda, 2.5, 1e-9);
    }
}

TEST(Su21, JSwapsNullHalves) {
    const SU21Data d = su21_build(1.0);
    for (const CMat& x : d.n_plus.basis()) EXPECT_LT((su21_J(x) - x).norm(), 1e-15);
    for (const CMat& x : d.n_minus.basis()) EXPECT_LT((su21_J(x) + x).norm(), 1e-15);
}

TEST(Sp21, PairingConstant) {
    // Half-trace of diag(S0, conj S0) times its negated adjoint.
    for (int a : {1, 2}) EXPECT_NEAR(sp21(a).pair.K(sp21(a).S, sp21(a).S_hat), -12.0 * a * a, 1e-10);
}

TEST(Sp21, StructureReport) {
    expect_all_pass(sp21_structure_report(sp21(1), 4));
    const Report r = sp21_structure_report(sp21(2), 5);
    expect_all_pass(r);
    EXPECT_EQ(r.find("casimir_multiple")->status, Status::pass);
}

TEST(Sp21, ActionFormulas) { expect_all_pass(sp21_action_formulas(sp21(1), 40, 9)); }

TEST(Sp21, NCoordinatesRoundTrip) {
    Rng rng(2);
    const SP21NCoords c = sp21_random_ncoords(rng);
    const CMat x = sp21_N(c);
    EXPECT_TRUE(sp21(1).n.contains(x, 1e-12));
    EXPECT_LT((sp21_N(sp21_n_coords(x)) - x).norm(), 1e-14);
}

TEST(Sp21, GradingAndDuality) {
    for (int a : {1, 2}) {
        const Grading g = sp21_grading(sp21(a));
        expect_all_pass(sp21_grading_report(sp21(a), g));
        const Report dual = sp21_duality_identity(sp21(a), g, 60, 11);
        expect_all_pass(dual);
        EXPECT_NE(dual.find("duality.identity_rel.a=" + std::to_string(a)), nullptr);
    }
}

TEST(Sp21, GradedPartsReassemble) {
    const Grading g = sp21_grading(sp21(1));
    Rng rng(6);
    const CMat x = sp21(1).n.combine(rng.normal_vec(12));
    const RMat a = sp21_rho(sp21(1), g, x);
    const GradedParts parts = sp21_graded_parts(g, a);
    EXPECT_LT((parts.minus + parts.zero + parts.plus - a).norm(), 1e-9 * a.norm());
    EXPECT_GT(parts.minus.norm(), 1e-3);
    EXPECT_GT(parts.plus.norm(), 1e-3);
}

TEST(Sp21, HatnIsometryAndEmbedding) {
    expect_all_pass(sp21_hatn_isometry(sp21(1)));
    expect_all_pass(sp21_embedding_check(sp21(1), 20, 4));
}

TEST(Sp21, StabilizerIsB) {
    const SP21Data& d = sp21(1);
    EXPECT_LT(span_distance(stabilizer_of_ray(d.pair, d.S).b, d.b), 1e-9);
    EXPECT_EQ(intersection_dim(d.b1, d.b2), 0);
}
