#pragma once

#include <array>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace cmcgap {

enum class MetricKind { euclidean, hyperbolic, spherical, gaussian, custom };

std::string_view to_string(MetricKind kind);
MetricKind metric_kind_from_string(std::string_view name);

/// Radial conformal factor u(t), t = |x|^2, defining the ball metric
/// g_bar = exp(2 u(|x|^2)) <,> on |x| < domain_limit().
///
/// Built-ins:
///   euclidean   u = 0
///   hyperbolic  u = ln(2 / (1 - t)), Poincare ball, domain radius 1
///   spherical   u = ln(2 / (1 + t)), S^3 minus a pole
///   gaussian    u = -t / 8, metric exp(-|x|^2 / 4) <,>
/// Custom factors are polynomials in t; derivatives are taken from the
/// coefficients, never by differencing.
class ConformalFactor {
public:
    static ConformalFactor euclidean();
    static ConformalFactor hyperbolic();
    static ConformalFactor spherical();
    static ConformalFactor gaussian();
    static ConformalFactor polynomial(std::vector<double> coefficients,
                                      double domain_limit = std::numeric_limits<double>::infinity());
    static ConformalFactor builtin(MetricKind kind);

    MetricKind kind() const noexcept { return kind_; }
    /// Euclidean radius a of the ball the factor lives on (may be +inf).
    double domain_limit() const noexcept { return domain_limit_; }
    /// Polynomial coefficients c0 + c1 t + ... (empty for the log-rational presets).
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }

    double u(double t) const;
    double du(double t) const;
    double ddu(double t) const;

    bool in_domain(double radius_sq) const noexcept;
    /// Throws DomainError naming the offending radius unless 0 <= radius_sq < a^2.
    void require_domain(double radius_sq) const;

    friend bool operator==(const ConformalFactor&, const ConformalFactor&) = default;

private:
    ConformalFactor(MetricKind kind, std::vector<double> coeffs, double domain_limit)
        : kind_(kind), coeffs_(std::move(coeffs)), domain_limit_(domain_limit) {}

    MetricKind kind_;
    std::vector<double> coeffs_;
    double domain_limit_;
};

/// Point of the ambient ball in Euclidean coordinates with |x|^2 cached.
class AmbientPoint {
public:
    explicit AmbientPoint(std::array<double, 3> position);

    const std::array<double, 3>& position() const noexcept { return position_; }
    double radius_sq() const noexcept { return radius_sq_; }

private:
    std::array<double, 3> position_;
    double radius_sq_;
};

/// Potential of the conformal position field: L_x g_bar = 2 sigma g_bar,
/// sigma = 1 + 2 u'(t) t.
double sigma(const ConformalFactor& cf, double radius_sq);

/// Largest r <= domain_limit with sigma > 0 on [0, r^2). Returns domain_limit
/// when sigma never vanishes.
double sigma_positivity_radius(const ConformalFactor& cf);

/// Scalar c with grad_bar sigma = c * x, c = 4 exp(-2u) (u'' t + u').
double grad_sigma_coefficient(const ConformalFactor& cf, double radius_sq);

/// grad_bar sigma at a point, as a Euclidean-coordinate vector.
std::array<double, 3> grad_sigma(const ConformalFactor& cf, const AmbientPoint& p);

/// g_bar-distance from the origin to a point at Euclidean radius r,
/// r * int_0^1 exp(u(s^2 r^2)) ds, by adaptive quadrature (abs error <= 1e-10).
double conformal_distance(const ConformalFactor& cf, double r);

}  // namespace cmcgap
