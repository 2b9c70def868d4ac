#include <gtest/gtest.h>

#include <cmath>

#include "lieobs/observability.hpp"
#include "support/oracles.hpp"

using namespace lieobs;

namespace {
const Tolerances kTol;
const std::array<double, 2> kWin{-10.0, 10.0};

const Mat2 kDiag12{1.0, 0.0, 0.0, 2.0};
const Mat2 kJordan1{1.0, 1.0, 0.0, 1.0};
const Mat2 kNilpotent{0.0, 1.0, 0.0, 0.0};
const Mat2 kRot{0.0, -1.0, 1.0, 0.0};

HomSpec line_y_hom(const GroupClass& cls) {
    // Identity on the (t, x) part: kernel is the y-axis line.
    return make_hom(cls, SubgroupId::G1, {{"alpha1", 1.0}, {"beta2", 1.0}});
}

// Independent escape measurement straight from the closed-form flow; the
// classifier never sees this code path.
double flow_escape(const GroupClass& cls, const FieldSpec& field,
                   const std::vector<KernelFunctional>& fns, const GroupElement& g,
                   double span = 6.0, double step = 0.05) {
    double worst = 0.0;
    for (double s = -span; s <= span + 1e-12; s += step) {
        GroupElement h = flow(cls, field, s, g);
        for (const auto& fn : fns) {
            double n = std::sqrt(fn.p * fn.p + dot(fn.q, fn.q));
            if (n == 0.0) continue;
            worst = std::max(worst, std::abs(fn.p * h.t + dot(fn.q, h.v)) / n);
        }
    }
    return worst;
}
}  // namespace

TEST(ISet, MembersStayOnTheKernelAlongTheFlow) {
    struct Case {
        GroupClass cls;
        FieldSpec field;
    };
    std::vector<Case> cases = {
        {{GroupKind::R2, 0.0}, {kDiag12, {1.0, 1.0}}},
        {{GroupKind::R2, 0.0}, {kNilpotent, {1.0, 0.0}}},
        {{GroupKind::R3, 0.0}, {kRot, {0.5, -1.0}}},
        {{GroupKind::R3Lambda, 0.5}, {kJordan1, {1.0, 1.0}}},
        {{GroupKind::E, 0.0}, {Mat2{1.0, -2.0, 2.0, 1.0}, {1.0, 1.0}}},
    };
    for (const auto& cs : cases) {
        for (const auto& fns :
             {std::vector<KernelFunctional>{{1.0, {0.0, 0.0}}, {0.0, {1.0, 0.0}}},
              std::vector<KernelFunctional>{{1.0, {0.0, 0.0}}},
              std::vector<KernelFunctional>{{1.0, {2.0, 0.0}}}}) {
            SetDescriptor i =
                indistinguishable_set_functionals(cs.cls, cs.field, fns, kWin, kTol);
            for (const auto& g : sample_points(i, 7)) {
                EXPECT_LT(flow_escape(cs.cls, cs.field, fns, g), 1e-6)
                    << to_string(cs.cls.kind) << " set " << to_string(i.kind);
            }
        }
    }
}

TEST(ISet, NonMembersEscape) {
    GroupClass cls{GroupKind::R2, 0.0};
    FieldSpec field{kDiag12, {1.0, 1.0}};
    std::vector<KernelFunctional> fns{{1.0, {0.0, 0.0}}, {0.0, {1.0, 0.0}}};
    SetDescriptor i = indistinguishable_set_functionals(cls, field, fns, kWin, kTol);
    auto basis = FunctionBasis::for_class(cls);
    oracles::Rng rng(41);
    for (int k = 0; k < 50; ++k) {
        GroupElement g = rng.element();
        if (condition_residual(basis, i.conditions, g) < 0.05) continue;
        EXPECT_GT(flow_escape(cls, field, fns, g), 1e-3);
    }
}

TEST(Verdicts, LineKernelDependsOnTheRestrictionType) {
    GroupClass r2{GroupKind::R2, 0.0};
    HomSpec h = line_y_hom(r2);

    PairReport diag = classify_pair(r2, {kDiag12, {1.0, 1.0}}, h, kWin, kTol);
    EXPECT_EQ(diag.verdict, Verdict::NotLocallyObservable);
    EXPECT_EQ(diag.provenance, Provenance::Analytic);
    EXPECT_EQ(diag.i_set.kind, SetKind::Line);
    EXPECT_NE(diag.label.find("line kernel {t=x=0}"), std::string::npos);

    PairReport jor = classify_pair(r2, {kJordan1, {1.0, 1.0}}, h, kWin, kTol);
    EXPECT_EQ(jor.verdict, Verdict::Observable);
    EXPECT_EQ(jor.provenance, Provenance::Analytic);
    EXPECT_TRUE(jor.i_discrete);
    EXPECT_TRUE(jor.fix_trivial);

    PairReport rot = classify_pair(r2, {kRot, {1.0, 1.0}}, h, kWin, kTol);
    EXPECT_EQ(rot.verdict, Verdict::Observable);

    PairReport scal = classify_pair(r2, {Mat2::identity(), {1.0, 1.0}}, h, kWin, kTol);
    EXPECT_EQ(scal.verdict, Verdict::NotLocallyObservable);

    PairReport zero = classify_pair(r2, {kDiag12, {1.0, 1.0}}, zero_hom(r2, SubgroupId::G1),
                                    kWin, kTol);
    EXPECT_EQ(zero.verdict, Verdict::NotLocallyObservable);
    EXPECT_EQ(zero.i_set.kind, SetKind::FullGroup);
    EXPECT_NE(zero.label.find("whole group"), std::string::npos);
}

TEST(Verdicts, XAxisLineKernel) {
    GroupClass r2{GroupKind::R2, 0.0};
    HomSpec h = make_hom(r2, SubgroupId::G2, {{"beta3", 2.0}});
    EXPECT_EQ(classify_pair(r2, {kRot, {1.0, 1.0}}, h, kWin, kTol).verdict,
              Verdict::Observable);
    EXPECT_EQ(classify_pair(r2, {kDiag12, {1.0, 1.0}}, h, kWin, kTol).verdict,
              Verdict::NotLocallyObservable);
    EXPECT_EQ(classify_pair(r2, {kJordan1, {1.0, 1.0}}, h, kWin, kTol).verdict,
              Verdict::NotLocallyObservable);

    GroupClass r3{GroupKind::R3, 0.0};
    HomSpec h3 = make_hom(r3, SubgroupId::G1, {{"beta3", 1.0}});
    EXPECT_EQ(classify_pair(r3, {kRot, {0.0, 1.0}}, h3, kWin, kTol).verdict,
              Verdict::Observable);
    EXPECT_EQ(classify_pair(r3, {kDiag12, {1.0, 1.0}}, h3, kWin, kTol).verdict,
              Verdict::NotLocallyObservable);
}

TEST(Verdicts, PlaneKernels) {
    GroupClass r2{GroupKind::R2, 0.0};
    // beta3 = 0 collapses the R2 -> G2 family onto t alone: kernel {t=0}.
    HomSpec h = make_hom(r2, SubgroupId::G2, {});
    PairReport rep = classify_pair(r2, {kJordan1, {1.0, 1.0}}, h, kWin, kTol);
    EXPECT_EQ(rep.verdict, Verdict::NotLocallyObservable);
    EXPECT_EQ(rep.i_set.kind, SetKind::Plane);
    EXPECT_FALSE(rep.i_discrete);

    // {x=0} kernel: diagonal restriction leaves the y-axis indistinguishable,
    // a nilpotent off-diagonal block pins everything.
    HomSpec h5 = make_hom(r2, SubgroupId::G5, {{"alpha2", 1.0}});
    PairReport d = classify_pair(r2, {Mat2{0.0, 0.0, 0.0, 2.0}, {1.0, 1.0}}, h5, kWin, kTol);
    EXPECT_EQ(d.verdict, Verdict::NotLocallyObservable);
    EXPECT_EQ(d.i_set.kind, SetKind::Line);

    PairReport n = classify_pair(r2, {kNilpotent, {1.0, 1.0}}, h5, kWin, kTol);
    EXPECT_EQ(n.verdict, Verdict::Observable);
    EXPECT_EQ(n.provenance, Provenance::Analytic);
    EXPECT_NE(n.notes.find("outside the catalogued families"), std::string::npos);
}

TEST(Verdicts, TiltedPlaneKernel) {
    GroupClass r2{GroupKind::R2, 0.0};
    HomSpec h = make_hom(
        r2, SubgroupId::G1, {{"alpha1", 1.0}, {"alpha2", 2.0}, {"beta1", 2.0}, {"beta2", 4.0}});

    PairReport d = classify_pair(r2, {kDiag12, {1.0, 1.0}}, h, kWin, kTol);
    EXPECT_EQ(d.verdict, Verdict::NotLocallyObservable);
    EXPECT_EQ(d.i_set.kind, SetKind::Line);
    EXPECT_EQ(d.provenance, Provenance::Analytic);

    // Nilpotent dstar with xi_2 = 0: the indistinguishable set is the exact
    // straight line (t, -t/2, -t), nowhere discrete.
    PairReport c = classify_pair(r2, {kNilpotent, {1.0, 0.0}}, h, kWin, kTol);
    EXPECT_EQ(c.verdict, Verdict::NotLocallyObservable);
    EXPECT_EQ(c.provenance, Provenance::Analytic);
    ASSERT_EQ(c.i_set.kind, SetKind::Line);
    ASSERT_EQ(c.i_set.lines.size(), 1u);
    Vec3 want = normalized({1.0, -0.5, -1.0});
    Vec3 got = c.i_set.lines[0].dir;
    EXPECT_NEAR(std::abs(dot(want, got)), 1.0, 1e-12);
    EXPECT_NEAR(norm2(c.i_set.lines[0].base), 0.0, 1e-12);
}

TEST(Verdicts, LineKernelsOnTheOtherClasses) {
    GroupClass rl{GroupKind::R3Lambda, 0.5};
    HomSpec h = make_hom(rl, SubgroupId::G3, {{"beta2", 1.0}});
    EXPECT_EQ(kernel_of(h, kTol).kind, KernelKind::LineYAxis);
    EXPECT_EQ(classify_pair(rl, {kJordan1, {1.0, 1.0}}, h, kWin, kTol).verdict,
              Verdict::Observable);
    EXPECT_EQ(classify_pair(rl, {kRot, {1.0, 1.0}}, h, kWin, kTol).verdict,
              Verdict::Observable);
    EXPECT_EQ(classify_pair(rl, {kDiag12, {1.0, 1.0}}, h, kWin, kTol).verdict,
              Verdict::NotLocallyObservable);

    for (GroupKind kind : {GroupKind::R3PrimeLambda, GroupKind::E}) {
        GroupClass cls{kind, kind == GroupKind::R3PrimeLambda ? 0.5 : 0.0};
        HomSpec g1 = make_hom(cls, SubgroupId::G1, {{"alpha1", 1.0}});
        PairReport rep = classify_pair(cls, {kDiag12, {1.0, 1.0}}, g1, kWin, kTol);
        EXPECT_EQ(rep.kernel.kind, KernelKind::PlaneT0);
        EXPECT_EQ(rep.verdict, Verdict::NotLocallyObservable);
        EXPECT_EQ(rep.provenance, Provenance::Analytic);
    }
}

TEST(Verdicts, TrigClassFallsBackToTheWindowedSearch) {
    // {t+x=0} tilted functional on the euclidean-motion class with a scalar
    // dstar: the pure-t residual is t - sin t, which no basis certificate
    // covers, so the verdict rests on windowed roots.
    GroupClass e{GroupKind::E, 0.0};
    PairReport rep = classify_functionals(e, {Mat2::identity(), {1.0, 0.0}},
                                          {{1.0, {1.0, 0.0}}}, kWin, kTol);
    EXPECT_EQ(rep.verdict, Verdict::NotLocallyObservable);
    EXPECT_EQ(rep.provenance, Provenance::NumericOnly);
    EXPECT_TRUE(rep.i_set.window_limited);
    EXPECT_FALSE(rep.i_discrete);
    EXPECT_FALSE(rep.notes.empty());
    EXPECT_TRUE(rep.label.empty());
}

TEST(Verdicts, LocalOnlyWhenFixedPointsSitAwayFromTheIdentity) {
    // Nilpotent field transported by a shear: the indistinguishable set
    // degenerates to two isolated points, the far one also a fixed point on
    // the kernel, so the pair is locally but not globally observable.
    GroupClass r2{GroupKind::R2, 0.0};
    FieldSpec f{{-1.0, 1.0, -1.0, 1.0}, {1.0, 2.0}};
    PairReport rep =
        classify_functionals(r2, f, {{0.0, {1.0, 0.0}}}, kWin, kTol);
    EXPECT_EQ(rep.verdict, Verdict::LocallyObservableOnly);
    EXPECT_TRUE(rep.i_discrete);
    EXPECT_FALSE(rep.fix_trivial);
    ASSERT_EQ(rep.fix_cap_k.points.size(), 2u);
    double far = 0.0;
    for (const auto& p : rep.fix_cap_k.points)
        far = std::max(far, distance_inf(p, GroupElement::identity()));
    // 2(e^t - 1) = t has its nonzero root near t = -1.59.
    EXPECT_NEAR(far, 1.5936242600400401, 1e-6);
}

TEST(FixedSets, ClosedFormsOnSmallCases) {
    GroupClass r2{GroupKind::R2, 0.0};
    HomSpec h = line_y_hom(r2);
    SetDescriptor fx = fixed_set_intersect_kernel(r2, {kDiag12, {1.0, 1.0}},
                                                  kernel_of(h, kTol), kWin, kTol);
    EXPECT_EQ(fx.kind, SetKind::Trivial);

    // Singular dstar whose kernel direction lies inside the subgroup kernel:
    // a full line of fixed points survives.
    HomSpec ht = make_hom(r2, SubgroupId::G2, {});
    SetDescriptor fx2 = fixed_set_intersect_kernel(
        r2, {Mat2{0.0, 0.0, 0.0, 1.0}, {0.0, 1.0}}, kernel_of(ht, kTol), kWin, kTol);
    EXPECT_EQ(fx2.kind, SetKind::Line);
    for (const auto& g : sample_points(fx2, 5)) {
        GroupElement vel =
            vector_field_eval(r2, {Mat2{0.0, 0.0, 0.0, 1.0}, {0.0, 1.0}}, g);
        EXPECT_LT(norm_inf(vel.v), 1e-12);
        EXPECT_NEAR(g.t, 0.0, 1e-12);
    }
}

TEST(ISet, SubgroupWhenFieldRespectsTheProduct) {
    struct Case {
        GroupClass cls;
        FieldSpec field;
        std::vector<KernelFunctional> fns;
    };
    // dstar commutes with theta in each of these, so indistinguishability is
    // a subgroup and sampled products must satisfy the same conditions.
    std::vector<Case> cases = {
        {{GroupKind::R2, 0.0}, {Mat2{1.0, 0.0, 0.0, 3.0}, {1.0, 1.0}}, {{1.0, {2.0, 0.0}}}},
        {{GroupKind::E, 0.0}, {Mat2{1.0, -2.0, 2.0, 1.0}, {1.0, 1.0}}, {{1.0, {0.0, 0.0}}}},
        {{GroupKind::R3Lambda, 0.5},
         {Mat2{2.0, 0.0, 0.0, 0.5}, {1.0, 1.0}},
         {{1.0, {0.0, 0.0}}, {0.0, {1.0, 0.0}}}},
    };
    oracles::Rng rng(99);
    for (const auto& cs : cases) {
        ASSERT_TRUE(is_derivation_compatible(cs.cls, cs.field).compatible);
        SetDescriptor i = indistinguishable_set_functionals(cs.cls, cs.field, cs.fns, kWin, kTol);
        ASSERT_FALSE(i.conditions.empty());
        auto basis = FunctionBasis::for_class(cs.cls);
        auto pts = sample_points(i, 6);
        for (size_t a = 0; a < pts.size(); ++a)
            for (size_t b = 0; b < pts.size(); b += 3) {
                GroupElement prod = multiply(cs.cls, pts[a], pts[b]);
                EXPECT_LT(condition_residual(basis, i.conditions, prod), 1e-9);
                EXPECT_LT(condition_residual(basis, i.conditions, inverse(cs.cls, pts[a])),
                          1e-9);
            }
    }
}

TEST(NumericOracle, AgreesOnDiscreteness) {
    struct Case {
        GroupClass cls;
        FieldSpec field;
        std::vector<KernelFunctional> fns;
        bool expect_discrete;
    };
    std::vector<KernelFunctional> line_y{{1.0, {0.0, 0.0}}, {0.0, {1.0, 0.0}}};
    std::vector<KernelFunctional> plane_x{{0.0, {1.0, 0.0}}};
    std::vector<KernelFunctional> tilted{{1.0, {2.0, 0.0}}};
    std::vector<Case> cases = {
        {{GroupKind::R2, 0.0}, {kDiag12, {1.0, 1.0}}, line_y, false},
        {{GroupKind::R2, 0.0}, {kJordan1, {1.0, 1.0}}, line_y, true},
        {{GroupKind::R2, 0.0}, {kRot, {1.0, 1.0}}, line_y, true},
        {{GroupKind::R2, 0.0}, {kNilpotent, {1.0, 1.0}}, plane_x, true},
        {{GroupKind::R2, 0.0}, {Mat2{0.0, 0.0, 0.0, 2.0}, {1.0, 1.0}}, plane_x, false},
        // The curve case: lattice points miss the curve, the sphere chase
        // must still find it.
        {{GroupKind::R2, 0.0}, {kNilpotent, {1.0, 0.0}}, tilted, false},
        // Two isolated indistinguishable points: discrete even though one
        // sits far from the identity.
        {{GroupKind::R2, 0.0}, {Mat2{-1.0, 1.0, -1.0, 1.0}, {1.0, 2.0}}, plane_x, true},
        {{GroupKind::R3, 0.0}, {kRot, {0.0, 1.0}}, line_y, true},
        {{GroupKind::E, 0.0}, {Mat2::identity(), {1.0, 0.0}}, tilted, false},
    };
    for (const auto& cs : cases) {
        SetDescriptor analytic =
            indistinguishable_set_functionals(cs.cls, cs.field, cs.fns, kWin, kTol);
        SetDescriptor numeric =
            indistinguishable_numeric(cs.cls, cs.field, cs.fns, {}, {}, kTol);
        EXPECT_EQ(is_discrete(analytic, kTol.identity_cluster), cs.expect_discrete)
            << to_string(cs.cls.kind) << " analytic kind " << to_string(analytic.kind);
        EXPECT_EQ(is_discrete(numeric, kTol.identity_cluster), cs.expect_discrete)
            << to_string(cs.cls.kind) << " numeric";
    }
}

TEST(NumericOracle, RetainedSamplesAreGenuineMembers) {
    GroupClass r2{GroupKind::R2, 0.0};
    FieldSpec f{kDiag12, {1.0, 1.0}};
    std::vector<KernelFunctional> fns{{1.0, {0.0, 0.0}}, {0.0, {1.0, 0.0}}};
    SetDescriptor numeric = indistinguishable_numeric(r2, f, fns, {}, {}, kTol);
    EXPECT_GT(numeric.points.size(), 10u);  // the whole sampled y-axis
    for (const auto& g : numeric.points) EXPECT_LT(flow_escape(r2, f, fns, g), 1e-6);
}

TEST(Conjugation, TransfersForKernelsThatPinT) {
    GroupClass r2{GroupKind::R2, 0.0};
    Mat2 p{2.0, 1.0, 0.5, 3.0};  // no relation to theta at all
    for (const Mat2& d : {kDiag12, kJordan1, kRot}) {
        ConjugationCheck chk =
            verdict_conjugation_check(r2, {d, {1.0, 1.0}}, line_y_hom(r2), p, kWin, kTol);
        EXPECT_TRUE(chk.verdicts_match);
        EXPECT_TRUE(chk.discreteness_match);
    }
    ConjugationCheck plane = verdict_conjugation_check(
        r2, {kJordan1, {1.0, 1.0}}, make_hom(r2, SubgroupId::G2, {}), p, kWin, kTol);
    EXPECT_TRUE(plane.verdicts_match);
}

TEST(Conjugation, TransfersUnderTheThetaCommutant) {
    GroupClass r2{GroupKind::R2, 0.0};
    Mat2 p{2.0, 0.0, 0.0, 0.5};  // diagonal, commutes with the R2 twist
    HomSpec tilted = make_hom(
        r2, SubgroupId::G1, {{"alpha1", 1.0}, {"alpha2", 2.0}, {"beta1", 2.0}, {"beta2", 4.0}});
    ConjugationCheck a =
        verdict_conjugation_check(r2, {kDiag12, {1.0, 1.0}}, tilted, p, kWin, kTol);
    EXPECT_TRUE(a.verdicts_match);

    HomSpec planex = make_hom(r2, SubgroupId::G5, {{"alpha2", 1.0}});
    ConjugationCheck b =
        verdict_conjugation_check(r2, {kNilpotent, {1.0, 1.0}}, planex, p, kWin, kTol);
    EXPECT_TRUE(b.verdicts_match);

    GroupClass e{GroupKind::E, 0.0};
    Mat2 pj{1.5, -0.5, 0.5, 1.5};  // a I + b J commutes with the rotation twist
    ConjugationCheck c = verdict_conjugation_check(
        e, {Mat2{1.0, -2.0, 2.0, 1.0}, {1.0, 1.0}}, make_hom(e, SubgroupId::G2, {{"alpha1", 1.0}}),
        pj, kWin, kTol);
    EXPECT_TRUE(c.verdicts_match);
}

TEST(Conjugation, CanFailOutsideTheCommutantForFreeTKernels) {
    // Shear conjugation of the nilpotent {x=0} pair: the original is
    // observable, the transported pair keeps a discrete indistinguishable
    // set but gains a far-away fixed point, so the verdicts split.
    GroupClass r2{GroupKind::R2, 0.0};
    HomSpec planex = make_hom(r2, SubgroupId::G5, {{"alpha2", 1.0}});
    Mat2 shear{1.0, 0.0, 1.0, 1.0};
    ConjugationCheck chk = verdict_conjugation_check(r2, {kNilpotent, {1.0, 1.0}}, planex,
                                                     shear, kWin, kTol);
    EXPECT_EQ(chk.original.verdict, Verdict::Observable);
    EXPECT_EQ(chk.transported.verdict, Verdict::LocallyObservableOnly);
    EXPECT_FALSE(chk.verdicts_match);
    EXPECT_TRUE(chk.discreteness_match);
}

TEST(Conjugation, RejectsSingularConjugators) {
    GroupClass r2{GroupKind::R2, 0.0};
    EXPECT_THROW(verdict_conjugation_check(r2, {kDiag12, {1.0, 1.0}}, line_y_hom(r2),
                                           Mat2{1.0, 2.0, 2.0, 4.0}, kWin, kTol),
                 SingularConjugator);
}

TEST(Reports, EquivalentKernelsGiveEquivalentVerdicts) {
    GroupClass r2{GroupKind::R2, 0.0};
    FieldSpec f{kJordan1, {1.0, 1.0}};
    PairReport a = classify_pair(r2, f, line_y_hom(r2), kWin, kTol);
    PairReport b = classify_pair(
        r2, f, make_hom(r2, SubgroupId::G3, {{"alpha1", 1.0}, {"beta2", 1.0}}), kWin, kTol);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.i_set.kind, b.i_set.kind);
}

TEST(Reports, IdentityIsAlwaysIndistinguishable) {
    oracles::Rng rng(7);
    for (const auto& cls : oracles::all_classes()) {
        for (int k = 0; k < 10; ++k) {
            FieldSpec f{rng.mat(2.0), rng.vec(2.0)};
            for (const auto& fam : canonical_homomorphisms(cls)) {
                HomSpec h = make_hom(cls, fam.target, {});
                PairReport rep = classify_pair(cls, f, h, kWin, kTol);
                auto basis = FunctionBasis::for_class(cls);
                if (!rep.i_set.conditions.empty())
                    EXPECT_LT(condition_residual(basis, rep.i_set.conditions,
                                                 GroupElement::identity()),
                              1e-12);
                EXPECT_LT(set_distance(rep.i_set, GroupElement::identity()), 1e-7);
            }
        }
    }
}
