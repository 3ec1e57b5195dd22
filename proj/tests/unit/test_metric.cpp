#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cmcgap/errors.hpp"
#include "cmcgap/metric.hpp"
#include "oracles.hpp"

using namespace cmcgap;

namespace {

std::vector<ConformalFactor> builtins() {
    return {ConformalFactor::euclidean(), ConformalFactor::hyperbolic(),
            ConformalFactor::spherical(), ConformalFactor::gaussian()};
}

// Largest t sampled for a factor: inside its domain and away from its edge.
double t_cap(const ConformalFactor& cf) {
    return std::isfinite(cf.domain_limit()) ? 0.9 * cf.domain_limit() * cf.domain_limit() : 3.0;
}

}  // namespace

TEST(Sigma, Examples) {
    EXPECT_DOUBLE_EQ(sigma(ConformalFactor::euclidean(), 0.7), 1.0);
    EXPECT_NEAR(sigma(ConformalFactor::gaussian(), 1.0), 0.75, 1e-15);
    EXPECT_NEAR(sigma(ConformalFactor::hyperbolic(), 0.25), 5.0 / 3.0, 1e-15);
}

TEST(Sigma, OutsideDomainNamesTheRadius) {
    try {
        sigma(ConformalFactor::hyperbolic(), 1.0);
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_EQ(e.offending(), 1.0);
    }
    EXPECT_THROW(sigma(ConformalFactor::euclidean(), -0.1), DomainError);
}

TEST(Sigma, MatchesStoredDerivative) {
    std::mt19937_64 rng(7);
    for (const auto& cf : builtins()) {
        std::uniform_real_distribution<double> dist(0.0, t_cap(cf));
        for (int i = 0; i < 100; ++i) {
            const double t = dist(rng);
            const double expected = 1.0 + 2.0 * cf.du(t) * t;
            EXPECT_NEAR(sigma(cf, t), expected, 1e-12 * std::abs(expected));
        }
    }
}

TEST(PositivityRadius, Builtins) {
    EXPECT_TRUE(std::isinf(sigma_positivity_radius(ConformalFactor::euclidean())));
    EXPECT_NEAR(sigma_positivity_radius(ConformalFactor::gaussian()), 2.0, 1e-12);
    EXPECT_NEAR(sigma_positivity_radius(ConformalFactor::spherical()), 1.0, 1e-12);
    EXPECT_EQ(sigma_positivity_radius(ConformalFactor::hyperbolic()), 1.0);
}

TEST(PositivityRadius, CustomQuadraticFactor) {
    // u = -t^2 / 4: sigma = 1 - t^2, vanishing at t = 1.
    const auto cf = ConformalFactor::polynomial({0.0, 0.0, -0.25});
    EXPECT_NEAR(sigma_positivity_radius(cf), 1.0, 1e-12);
}

TEST(Derivatives, AgreeWithFiniteDifferences) {
    std::mt19937_64 rng(11);
    for (const auto& cf : builtins()) {
        std::uniform_real_distribution<double> dist(0.05, t_cap(cf) * 0.95);
        for (int i = 0; i < 30; ++i) {
            const double t = dist(rng);
            const double h = 1e-5;
            const double du = oracle::central_diff([&](double s) { return cf.u(s); }, t, h);
            const double ddu = oracle::central_diff([&](double s) { return cf.du(s); }, t, h);
            EXPECT_NEAR(cf.du(t), du, 1e-8 * std::max(1.0, std::abs(du)));
            EXPECT_NEAR(cf.ddu(t), ddu, 1e-8 * std::max(1.0, std::abs(ddu)));
        }
    }
}

TEST(GradSigma, Examples) {
    EXPECT_EQ(grad_sigma_coefficient(ConformalFactor::euclidean(), 0.4), 0.0);
    EXPECT_NEAR(grad_sigma_coefficient(ConformalFactor::gaussian(), 1.0), -0.5 * std::exp(0.25),
                1e-14);
    // 4 e^{-2u(0)} (u''(0) 0 + u'(0)) = 4 (1/4) 1.
    EXPECT_NEAR(grad_sigma_coefficient(ConformalFactor::hyperbolic(), 0.0), 1.0, 1e-14);
}

TEST(GradSigma, HyperbolicOriginFromMetricGradient) {
    // g_bar gradient of sigma(|x|^2) at a point near the origin, by differencing.
    const auto cf = ConformalFactor::hyperbolic();
    const double x = 1e-3;
    const double dsigma = oracle::central_diff([&](double s) { return sigma(cf, s * s); }, x, 1e-6);
    const double coefficient = dsigma / std::exp(2.0 * cf.u(x * x)) / x;
    EXPECT_NEAR(coefficient, 1.0, 1e-5);
}

TEST(GradSigma, AgreesWithFiniteDifferenceGradient) {
    std::mt19937_64 rng(3);
    for (const auto& cf : builtins()) {
        const double r_max = std::sqrt(t_cap(cf));
        std::uniform_real_distribution<double> dist(-r_max / std::sqrt(3.0), r_max / std::sqrt(3.0));
        for (int i = 0; i < 50; ++i) {
            const AmbientPoint p({dist(rng), dist(rng), dist(rng)});
            const auto g = grad_sigma(cf, p);
            const double scale = std::exp(2.0 * cf.u(p.radius_sq()));
            for (int k = 0; k < 3; ++k) {
                auto f = [&](double s) {
                    auto q = p.position();
                    q[k] = s;
                    return sigma(cf, q[0] * q[0] + q[1] * q[1] + q[2] * q[2]);
                };
                const double fd = oracle::central_diff(f, p.position()[k], 1e-6) / scale;
                EXPECT_NEAR(g[k], fd, 1e-6 * std::max(1.0, std::abs(fd))) << to_string(cf.kind());
            }
        }
    }
}

TEST(AmbientPoint, CachesRadiusSquared) {
    const AmbientPoint p({0.1, -0.2, 0.3});
    EXPECT_NEAR(p.radius_sq(), 0.14, 1e-16);
}

TEST(Distance, ClosedForms) {
    EXPECT_NEAR(conformal_distance(ConformalFactor::euclidean(), 0.5), 0.5, 1e-15);
    EXPECT_NEAR(conformal_distance(ConformalFactor::hyperbolic(), 0.5), 2.0 * std::atanh(0.5), 1e-9);
    EXPECT_NEAR(conformal_distance(ConformalFactor::hyperbolic(), 0.5), 1.0986123, 1e-7);
    EXPECT_NEAR(conformal_distance(ConformalFactor::spherical(), 1.0), std::numbers::pi / 2, 1e-9);
    EXPECT_THROW(conformal_distance(ConformalFactor::hyperbolic(), 1.0), DomainError);
}

TEST(Distance, StrictlyIncreasingOnPositivityRange) {
    for (const auto& cf : builtins()) {
        const double r_pos = sigma_positivity_radius(cf);
        const double r_max = std::isfinite(r_pos) ? 0.99 * r_pos : 3.0;
        double prev = -1.0;
        for (int i = 0; i <= 100; ++i) {
            const double d = conformal_distance(cf, r_max * i / 100.0);
            EXPECT_GT(d, prev);
            prev = d;
        }
    }
}

TEST(ConformalFactor, CustomPolynomialMatchesGaussian) {
    const auto custom = ConformalFactor::polynomial({0.0, -0.125});
    const auto g = ConformalFactor::gaussian();
    for (double t : {0.0, 0.5, 2.0}) {
        EXPECT_DOUBLE_EQ(custom.u(t), g.u(t));
        EXPECT_DOUBLE_EQ(custom.du(t), g.du(t));
        EXPECT_DOUBLE_EQ(custom.ddu(t), g.ddu(t));
    }
    EXPECT_EQ(custom.kind(), MetricKind::custom);
}

TEST(ConformalFactor, KindNames) {
    EXPECT_EQ(metric_kind_from_string("hyperbolic"), MetricKind::hyperbolic);
    EXPECT_EQ(to_string(MetricKind::gaussian), "gaussian");
    EXPECT_THROW(metric_kind_from_string("lorentzian"), ConfigError);
}
