#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>

#include "cmcgap/errors.hpp"
#include "cmcgap/gap.hpp"
#include "cmcgap/shooting.hpp"
#include "oracles.hpp"

using namespace cmcgap;

namespace {

PointGeometry random_geometry(std::mt19937_64& rng) {
    static const ConformalFactor factors[] = {ConformalFactor::euclidean(), ConformalFactor::hyperbolic(),
                                              ConformalFactor::spherical(), ConformalFactor::gaussian()};
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 3);
    const GraphState s{0.4 * d(rng), 0.45 + 0.35 * d(rng), 3.0 * d(rng)};
    return conformal_curvatures(factors[pick(rng)], s, 5.0 * d(rng));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double closed_f2(double x0) {
    return (-std::pow(x0, 4) + 8 * x0 * x0 - 8) / (2 * x0 * x0);
}

double numeric_f2(double x0) {
    const auto cf = ConformalFactor::gaussian();
    auto F = [&](double t) {
        return gaussian_gap_functional(propagate(cf, 0.0, {0.0, x0, 0.0}, t, 1e-14));
    };
    return oracle::second_diff5(F, 0.0, 2e-3);
}

}  // namespace

TEST(EigenFactors, ProductAndSumIdentities) {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 1000; ++i) {
        const auto pg = random_geometry(rng);
        const auto lam = hessian_eigen_factors(pg);
        const double r = pg.support_conf / pg.sigma;
        const double lin = 2.0 + pg.mean_curvature * r;
        EXPECT_LE(rel(lam.lambda1 * lam.lambda2, 0.25 * lin * lin - 0.5 * pg.traceless_sq * r * r), 1e-10);
        EXPECT_LE(rel(lam.lambda1 + lam.lambda2, lin), 1e-10);
    }
}

TEST(EigenFactors, VanishingSupportGivesIdentity) {
    PointGeometry pg;
    pg.kbar1 = 3.0;
    pg.kbar2 = -1.0;
    pg.sigma = 0.7;
    pg.support_conf = 0.0;
    const auto lam = hessian_eigen_factors(pg);
    EXPECT_EQ(lam.lambda1, 1.0);
    EXPECT_EQ(lam.lambda2, 1.0);
    const auto c = gap_condition(pg);
    EXPECT_EQ(c.lhs, 0.0);
    EXPECT_EQ(c.rhs, 2.0);
    EXPECT_TRUE(c.second_ok);
}

TEST(EigenFactors, NonPositiveSigmaThrows) {
    PointGeometry pg;
    pg.sigma = 0.0;
    EXPECT_THROW(hessian_eigen_factors(pg), DomainError);
    EXPECT_THROW(gap_condition(pg), DomainError);
}

TEST(GapCondition, MinimalCaseRhsIsTwo) {
    const auto cf = ConformalFactor::gaussian();
    const GraphState s{0.2, 0.6, 0.4};
    const auto pg = conformal_curvatures(cf, s, cmc_rhs(cf, 0.0, s));
    const auto c = gap_condition(pg);
    EXPECT_NEAR(c.rhs, 2.0, 1e-12);
    const double a2 = pg.kbar1 * pg.kbar1 + pg.kbar2 * pg.kbar2;
    const double r = pg.support_conf / pg.sigma;
    EXPECT_NEAR(c.lhs, a2 * r * r, 1e-12 * std::max(1.0, c.lhs));
}

TEST(GapCondition, EqualityExactlyWhenAFactorVanishes) {
    std::mt19937_64 rng(8);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto pg = random_geometry(rng);
        const auto lam = hessian_eigen_factors(pg);
        const auto c = gap_condition(pg);
        if (!c.second_ok) {
            continue;
        }
        // rhs - lhs = 2 lambda1 lambda2, so the sign of the slack is the sign of the product.
        EXPECT_NEAR(c.rhs - c.lhs, 2.0 * lam.lambda1 * lam.lambda2,
                    1e-10 * std::max({1.0, c.rhs, c.lhs}));
        EXPECT_EQ(c.lhs <= c.rhs, std::min(lam.lambda1, lam.lambda2) >= 0.0 ||
                                      std::max(lam.lambda1, lam.lambda2) <= 0.0);
        ++checked;
    }
    EXPECT_GT(checked, 500);
}

TEST(GaussianFunctional, ValueAtWaist) {
    for (double x0 : {0.1, 0.45, 1.0, 1.9}) {
        EXPECT_EQ(gaussian_gap_functional({0.0, x0, 0.0}), 1.0);
    }
}

TEST(GaussianFunctional, DerivativesAtWaist) {
    const auto cf = ConformalFactor::gaussian();
    for (double x0 : {0.3, 0.5, 0.9, 1.05}) {
        auto F = [&](double t) {
            return gaussian_gap_functional(propagate(cf, 0.0, {0.0, x0, 0.0}, t, 1e-14));
        };
        EXPECT_LE(std::abs(oracle::central_diff(F, 0.0, 1e-4)), 1e-6);
        EXPECT_LE(rel(numeric_f2(x0), closed_f2(x0)), 1e-4) << x0;
    }
    EXPECT_DOUBLE_EQ(closed_f2(0.5), -12.125);
}

TEST(GaussianFunctional, ThresholdAndSignFlip) {
    EXPECT_NEAR(shrinker_x0_threshold(), 1.08239, 5e-6);
    EXPECT_NEAR(closed_f2(shrinker_x0_threshold()), 0.0, 1e-14);
    EXPECT_LT(closed_f2(1.0), 0.0);
    EXPECT_GT(closed_f2(1.2), 0.0);
    EXPECT_LT(numeric_f2(1.0), 0.0);
    EXPECT_GT(numeric_f2(1.2), 0.0);
}

TEST(GaussianFunctional, Domain) {
    EXPECT_THROW(gaussian_gap_functional({1.0, 1.8, 0.0}), DomainError);
    EXPECT_THROW(gaussian_gap_functional({0.0, 0.0, 0.0}), SingularAxisError);
}

TEST(GeneralFunctional, AgreesWithGaussianForm) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const auto cf = ConformalFactor::gaussian();
    for (int i = 0; i < 50; ++i) {
        const GraphState s{0.8 * d(rng), 1.0 + 0.8 * d(rng), 2.0 * d(rng)};
        EXPECT_NEAR(general_gap_functional(cf, s), gaussian_gap_functional(s),
                    1e-12 * std::max(1.0, std::abs(gaussian_gap_functional(s))));
    }
}

TEST(GeneralFunctional, EuclideanWaistIsOne) {
    EXPECT_DOUBLE_EQ(general_gap_functional(ConformalFactor::euclidean(), {0.0, 1.0, 0.0}), 1.0);
}

TEST(GeneralFunctional, EqualsCurvatureChain) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (const auto& cf : {ConformalFactor::hyperbolic(), ConformalFactor::gaussian(),
                           ConformalFactor::spherical()}) {
        for (int i = 0; i < 50; ++i) {
            const GraphState s{0.3 * d(rng), 0.45 + 0.3 * d(rng), 2.0 * d(rng)};
            const auto pg = conformal_curvatures(cf, s, d(rng));
            EXPECT_NEAR(general_gap_functional(cf, s), -pg.kbar2 * pg.support_conf / pg.sigma, 1e-12);
        }
    }
}

TEST(ScanGap, ShrinkerInsideGapInterval) {
    const auto gi = gap_interval(0.45);
    IntegrationOptions o;
    o.sample_step = gi.epsilon / 50.0;
    const auto c = integrate_even(ConformalFactor::gaussian(), 0.0, 0.45, gi.epsilon * 0.999, o);
    const auto r = scan_gap(c);
    EXPECT_TRUE(r.holds());
    EXPECT_TRUE(r.fails_at.empty());
    // lambda2 = 0 at the waist.
    ASSERT_FALSE(r.equality_at.empty());
    EXPECT_EQ(r.verdict, GapVerdict::holds_with_equality);
}

TEST(ScanGap, LeavingSigmaBallFails) {
    IntegrationOptions o;
    o.sample_step = 0.05;
    const auto c = integrate(ConformalFactor::gaussian(), 0.0, 1.9, 1.0, 1.0, o);
    const auto r = scan_gap(c);
    EXPECT_EQ(r.verdict, GapVerdict::fails);
    ASSERT_FALSE(r.fails_at.empty());
    bool flagged = false;
    for (const auto& s : r.samples) {
        flagged = flagged || s.sigma_violation;
    }
    EXPECT_TRUE(flagged);
}

TEST(ScanGap, DegenerateCurveRejected) {
    ProfileCurve c;
    c.metric = ConformalFactor::gaussian();
    c.states.push_back({0.0, 0.5, 0.0});
    EXPECT_THROW(scan_gap(c), PreconditionError);
}

TEST(ScanGap, ThreadCountDoesNotChangeReport) {
    IntegrationOptions o;
    o.sample_step = 0.01;
    const auto c = integrate_even(ConformalFactor::gaussian(), 0.0, 0.9, 1.5, o);
    const auto a = scan_gap(c, 1e-8, 1);
    const auto b = scan_gap(c, 1e-8, 7);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(std::bit_cast<std::uint64_t>(a.samples[i].lhs), std::bit_cast<std::uint64_t>(b.samples[i].lhs));
        EXPECT_EQ(a.samples[i].pass, b.samples[i].pass);
    }
    EXPECT_EQ(a.fails_at, b.fails_at);
    EXPECT_EQ(a.equality_at, b.equality_at);
}

TEST(ScanGap, VerdictMatchesFlags) {
    IntegrationOptions o;
    o.sample_step = 0.02;
    const auto c = integrate_even(ConformalFactor::gaussian(), 0.0, 0.3, 1.2, o);
    const auto r = scan_gap(c);
    std::size_t fails = 0;
    for (const auto& s : r.samples) {
        EXPECT_EQ(s.pass, s.second_ok && s.lhs <= s.rhs + 1e-8 * std::max(1.0, s.rhs));
        fails += s.pass ? 0 : 1;
    }
    EXPECT_EQ(fails, r.fails_at.size());
    EXPECT_EQ(r.verdict == GapVerdict::fails, fails > 0);
}
