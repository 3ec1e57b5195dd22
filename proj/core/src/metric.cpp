#include "cmcgap/metric.hpp"

#include <cmath>
#include <sstream>

#include "cmcgap/errors.hpp"
#include "cmcgap/numerics.hpp"

namespace cmcgap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double poly_eval(const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * t + *it;
    }
    return acc;
}

double poly_derivative(const std::vector<double>& c, double t, int order) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > static_cast<std::size_t>(order);) {
        double factor = 1.0;
        for (int j = 0; j < order; ++j) {
            factor *= static_cast<double>(k - static_cast<std::size_t>(j));
        }
        acc = acc * t + factor * c[k];
    }
    return acc;
}

}  // namespace

std::string_view to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::euclidean: return "euclidean";
        case MetricKind::hyperbolic: return "hyperbolic";
        case MetricKind::spherical: return "spherical";
        case MetricKind::gaussian: return "gaussian";
        case MetricKind::custom: return "custom";
    }
    return "custom";
}

MetricKind metric_kind_from_string(std::string_view name) {
    for (auto kind : {MetricKind::euclidean, MetricKind::hyperbolic, MetricKind::spherical,
                      MetricKind::gaussian, MetricKind::custom}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw ConfigError("unknown metric kind '" + std::string(name) + "'");
}

ConformalFactor ConformalFactor::euclidean() { return {MetricKind::euclidean, {}, kInf}; }
ConformalFactor ConformalFactor::hyperbolic() { return {MetricKind::hyperbolic, {}, 1.0}; }
ConformalFactor ConformalFactor::spherical() { return {MetricKind::spherical, {}, kInf}; }
ConformalFactor ConformalFactor::gaussian() { return {MetricKind::gaussian, {0.0, -0.125}, kInf}; }

ConformalFactor ConformalFactor::polynomial(std::vector<double> coefficients, double domain_limit) {
    if (!(domain_limit > 0.0)) {
        throw ConfigError("custom metric needs a positive domain radius");
    }
    for (double c : coefficients) {
        if (!std::isfinite(c)) {
            throw ConfigError("custom metric has a non-finite coefficient");
        }
    }
    return {MetricKind::custom, std::move(coefficients), domain_limit};
}

ConformalFactor ConformalFactor::builtin(MetricKind kind) {
    switch (kind) {
        case MetricKind::euclidean: return euclidean();
        case MetricKind::hyperbolic: return hyperbolic();
        case MetricKind::spherical: return spherical();
        case MetricKind::gaussian: return gaussian();
        case MetricKind::custom: break;
    }
    throw ConfigError("custom metric requires coefficients");
}

double ConformalFactor::u(double t) const {
    switch (kind_) {
        case MetricKind::euclidean: return 0.0;
        case MetricKind::hyperbolic: return std::log(2.0 / (1.0 - t));
        case MetricKind::spherical: return std::log(2.0 / (1.0 + t));
        default: return poly_eval(coeffs_, t);
    }
}

double ConformalFactor::du(double t) const {
    switch (kind_) {
        case MetricKind::euclidean: return 0.0;
        case MetricKind::hyperbolic: return 1.0 / (1.0 - t);
        case MetricKind::spherical: return -1.0 / (1.0 + t);
        default: return poly_derivative(coeffs_, t, 1);
    }
}

double ConformalFactor::ddu(double t) const {
    switch (kind_) {
        case MetricKind::euclidean: return 0.0;
        case MetricKind::hyperbolic: return 1.0 / ((1.0 - t) * (1.0 - t));
        case MetricKind::spherical: return 1.0 / ((1.0 + t) * (1.0 + t));
        default: return poly_derivative(coeffs_, t, 2);
    }
}

bool ConformalFactor::in_domain(double radius_sq) const noexcept {
    return radius_sq >= 0.0 && radius_sq < domain_limit_ * domain_limit_;
}

void ConformalFactor::require_domain(double radius_sq) const {
    if (!in_domain(radius_sq)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "radius " << std::sqrt(std::abs(radius_sq)) << " outside the " << to_string(kind_)
            << " domain of radius " << domain_limit_;
        throw DomainError(msg.str(), std::sqrt(std::abs(radius_sq)));
    }
}

AmbientPoint::AmbientPoint(std::array<double, 3> position)
    : position_(position),
      radius_sq_(position[0] * position[0] + position[1] * position[1] +
                 position[2] * position[2]) {}

double sigma(const ConformalFactor& cf, double radius_sq) {
    cf.require_domain(radius_sq);
    return 1.0 + 2.0 * cf.du(radius_sq) * radius_sq;
}

double sigma_positivity_radius(const ConformalFactor& cf) {
    const double a = cf.domain_limit();
    auto s = [&](double t) { return 1.0 + 2.0 * cf.du(t) * t; };

    // Scan outward for the first t with sigma <= 0, then bisect.
    std::vector<double> grid;
    if (std::isfinite(a)) {
        const double t_end = a * a * (1.0 - 1e-12);
        constexpr int n = 4096;
        for (int i = 0; i <= n; ++i) {
            grid.push_back(t_end * static_cast<double>(i) / n);
        }
    } else {
        grid.push_back(0.0);
        for (double t = 1e-6; t < 1e12; t *= 1.01) {
            grid.push_back(t);
        }
    }
    double lo = grid.front();
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double hi = grid[i];
        if (s(hi) <= 0.0) {
            double l = lo;
            double h = hi;
            while (true) {
                const double m = 0.5 * (l + h);
                if (m <= l || m >= h) {
                    break;
                }
                (s(m) > 0.0 ? l : h) = m;
            }
            return std::sqrt(h);
        }
        lo = hi;
    }
    return a;
}

double grad_sigma_coefficient(const ConformalFactor& cf, double radius_sq) {
    cf.require_domain(radius_sq);
    const double t = radius_sq;
    return 4.0 * std::exp(-2.0 * cf.u(t)) * (cf.ddu(t) * t + cf.du(t));
}

std::array<double, 3> grad_sigma(const ConformalFactor& cf, const AmbientPoint& p) {
    const double c = grad_sigma_coefficient(cf, p.radius_sq());
    const auto& x = p.position();
    return {c * x[0], c * x[1], c * x[2]};
}

double conformal_distance(const ConformalFactor& cf, double r) {
    if (r < 0.0) {
        throw DomainError("negative radius", r);
    }
    cf.require_domain(r * r);
    if (r == 0.0) {
        return 0.0;
    }
    auto integrand = [&](double s) { return std::exp(cf.u(s * s * r * r)); };
    return r * numerics::integrate(integrand, 0.0, 1.0, 1e-10 / r).value;
}

}  // namespace cmcgap
