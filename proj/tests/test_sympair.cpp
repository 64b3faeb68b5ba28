#include <symspace/sympair.hpp>

#include <gtest/gtest.h>

using namespace symspace;

namespace {

struct Row {
    Family fam;
    Index h, m;
    Signature sig;
};

// Counted by hand from block shapes of X with X^* M = -M X (h) and X^* M = M X (m), traceless.
const std::vector<Row> hand_rows{
    {{Field::R, 2, 1}, 3, 5, {3, 2, 0}},   {{Field::R, 1, 1}, 1, 2, {1, 1, 0}},   {{Field::R, 3, 0}, 3, 5, {5, 0, 0}},
    {{Field::R, 3, 3}, 15, 20, {11, 9, 0}}, {{Field::C, 2, 1}, 8, 8, {4, 4, 0}},   {{Field::C, 1, 1}, 3, 3, {1, 2, 0}},
    {{Field::C, 3, 3}, 35, 35, {17, 18, 0}}, {{Field::H, 2, 1}, 21, 14, {6, 8, 0}}, {{Field::H, 1, 1}, 10, 5, {1, 4, 0}},
    {{Field::H, 2, 0}, 10, 5, {5, 0, 0}},
};

bool is_k_skew(const RMat& a, const RMat& gram) { return (a.transpose() * gram + gram * a).norm() < 1e-10; }

}  // namespace

TEST(Family, LabelsAndSizes) {
    const Family f{Field::H, 2, 1};
    EXPECT_EQ(f.n(), 3);
    EXPECT_EQ(f.matrix_size(), 6);
    EXPECT_EQ(f.label(), "H(2,1)");
}

TEST(Table, ClosedFormulasMatchHandCounts) {
    for (const Row& r : hand_rows) {
        const TableRow e = expected_row(r.fam);
        EXPECT_EQ(e.dim_h, r.h) << r.fam.label();
        EXPECT_EQ(e.dim_m, r.m) << r.fam.label();
        EXPECT_EQ(e.sig_m, r.sig) << r.fam.label();
    }
}

TEST(Table, ConstructionMatchesHandCounts) {
    for (const Row& r : hand_rows) {
        const TableRow t = table_row(build_pair(r.fam));
        EXPECT_EQ(t.dim_h, r.h) << r.fam.label();
        EXPECT_EQ(t.dim_m, r.m) << r.fam.label();
        EXPECT_EQ(t.sig_m, r.sig) << r.fam.label();
    }
}

TEST(Table, ConstructionMatchesFormulasUpToFour) {
    std::vector<Family> fams;
    for (int n = 2; n <= 4; ++n)
        for (Field f : {Field::R, Field::C, Field::H})
            for (int p = 0; p <= n; ++p) fams.push_back({f, p, n - p});
    for (const TableRow& t : dimension_table(fams)) {
        const TableRow e = expected_row(t.family);
        EXPECT_EQ(t.dim_h, e.dim_h) << t.family.label();
        EXPECT_EQ(t.dim_m, e.dim_m) << t.family.label();
        EXPECT_EQ(t.sig_m, e.sig_m) << t.family.label();
    }
}

TEST(BuildPair, RejectsBadInput) {
    EXPECT_THROW(build_pair({Field::R, 1, 0}), std::invalid_argument);
    EXPECT_THROW(build_pair({Field::C, -1, 3}), std::invalid_argument);
    EXPECT_THROW(build_pair({Field::C, 3, 1}, Variant::canonical_T), std::invalid_argument);
}

TEST(BuildPair, CanonicalVariantHasSameShape) {
    for (Field f : {Field::R, Field::C, Field::H}) {
        const TableRow a = table_row(build_pair({f, 2, 1}));
        const TableRow b = table_row(build_pair({f, 2, 1}, Variant::canonical_T));
        EXPECT_EQ(a.dim_h, b.dim_h);
        EXPECT_EQ(a.dim_m, b.dim_m);
        EXPECT_EQ(a.sig_m, b.sig_m);
    }
}

TEST(BuildPair, HalfTraceOnlyForQuaternions) {
    EXPECT_DOUBLE_EQ(build_pair({Field::H, 1, 1}).form.scale, 0.5);
    EXPECT_DOUBLE_EQ(build_pair({Field::C, 1, 1}).form.scale, 1.0);
}

TEST(BuildPair, CompactPartOfH) {
    // Maximal compact subalgebras: so(2) x so(1), s(u(2) x u(1)), sp(2) x sp(1).
    EXPECT_EQ(build_pair({Field::R, 2, 1}).h_compact.dim(), 1);
    EXPECT_EQ(build_pair({Field::C, 2, 1}).h_compact.dim(), 4);
    EXPECT_EQ(build_pair({Field::H, 2, 1}).h_compact.dim(), 13);
    EXPECT_EQ(build_pair({Field::H, 2, 1}, Variant::canonical_T).h_compact.dim(), 13);
}

TEST(Axioms, PassForSeveralFamilies) {
    for (const Family& f : std::vector<Family>{{Field::R, 2, 1}, {Field::C, 2, 1}, {Field::H, 2, 1}, {Field::R, 2, 2}, {Field::C, 3, 1}}) {
        const Report r = check_symmetric_axioms(build_pair(f));
        EXPECT_TRUE(r.passed()) << f.label();
        EXPECT_EQ(r.count(Status::pass), 9);
    }
    EXPECT_TRUE(check_symmetric_axioms(build_pair({Field::H, 2, 1}, Variant::canonical_T)).passed());
}

TEST(Axioms, CorruptedPairFails) {
    const SymmetricPair pair = build_pair({Field::C, 2, 1});
    SymmetricPair bad = pair;
    std::vector<CMat> mb = pair.m.basis();
    mb[0] = pair.h[0];
    bad.m = RealSubspace(3, 3, mb);
    const Report r = check_symmetric_axioms(bad);
    ASSERT_NE(r.find("C(2,1).bracket_mm_in_h"), nullptr);
    EXPECT_EQ(r.find("C(2,1).bracket_mm_in_h")->status, Status::fail);
    EXPECT_EQ(r.find("C(2,1).form_h_perp_m")->status, Status::fail);
}

TEST(Involution, FixesHNegatesM) {
    const SymmetricPair pair = build_pair({Field::C, 2, 1});
    const CMat& M = pair.form_matrix;
    for (const CMat& x : pair.h.basis()) EXPECT_LT((-M.inverse() * x.adjoint() * M - x).norm(), 1e-12);
    for (const CMat& x : pair.m.basis()) EXPECT_LT((-M.inverse() * x.adjoint() * M + x).norm(), 1e-12);
    Rng rng(1);
    const CMat x = random_element(pair.g, rng);
    EXPECT_LT((pair.involution(pair.involution(x)) - x).norm(), 1e-14);
    EXPECT_LT((involution(pair, x) + x.adjoint()).norm(), 1e-14);
}

TEST(Isotropy, SkewForK) {
    for (Field f : {Field::R, Field::C, Field::H}) {
        const SymmetricPair pair = build_pair({f, 2, 1});
        const RMat gram = gram_matrix(pair.form, pair.m);
        Rng rng(3);
        const RMat a = isotropy_matrix(pair, random_element(pair.h, rng));
        EXPECT_TRUE(is_k_skew(a, gram)) << to_string(f);
    }
}

TEST(Isotropy, RejectsNonHElement) {
    const SymmetricPair pair = build_pair({Field::R, 2, 1});
    EXPECT_THROW(isotropy_matrix(pair, pair.m[0]), std::invalid_argument);
}

TEST(Isotropy, HomomorphismOfAlgebras) {
    // rho([x,y]) = [rho(x), rho(y)]
    const SymmetricPair pair = build_pair({Field::C, 2, 1});
    Rng rng(4);
    const CMat x = random_element(pair.h, rng), y = random_element(pair.h, rng);
    const RMat ax = isotropy_matrix(pair, x), ay = isotropy_matrix(pair, y);
    EXPECT_LT((isotropy_matrix(pair, bracket(x, y)) - (ax * ay - ay * ax)).norm(), 1e-10);
}
