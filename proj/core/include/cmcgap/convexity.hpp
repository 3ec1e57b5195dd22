#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cmcgap/metric.hpp"
#include "cmcgap/profile.hpp"

// Convexity potential Psi = Phi(phi), phi = g_bar(x, x) = e^{2u(|x|^2)} |x|^2, where
// Phi solves Phi''(a) a' b + Phi'(a) b' = 0 with a(t) = e^{2u(t)} t, b(t) = 1 + 2u'(t) t,
// normalized by Phi(0) = 0 and Phi'(a(t)) = 1 / b(t).

namespace cmcgap {

/// phi = g_bar(x, x) at |x|^2 = rho.
double conformal_norm_sq(const ConformalFactor& cf, double rho);

/// Tabulated Phi on a grid of s = a(t) values, refined quadratically toward s = 0.
class PhiTable {
public:
    /// Builds the table on [0, s_max] with n grid points. Phi' = 1 / b(a^{-1}(s))
    /// is stored exactly; Phi is accumulated by adaptive quadrature of 1 / b(a^{-1}(xi)).
    /// Throws DomainError if [0, s_max] is not covered by a's image on the
    /// sigma-positive range.
    static PhiTable build(const ConformalFactor& cf, double s_max, std::size_t n = 2048);

    const ConformalFactor& metric() const noexcept { return cf_; }
    double s_max() const noexcept { return s_.back(); }
    std::span<const double> s_grid() const noexcept { return s_; }
    std::span<const double> t_grid() const noexcept { return t_; }
    std::span<const double> phi() const noexcept { return phi_; }
    std::span<const double> dphi() const noexcept { return dphi_; }
    std::span<const double> d2phi() const noexcept { return d2phi_; }

    /// Phi(s) by monotone cubic Hermite interpolation.
    double value(double s) const;
    /// Phi'(s) by cubic Hermite interpolation of the stored Phi', Phi''.
    double derivative(double s) const;

private:
    PhiTable() = default;
    std::size_t interval(double s) const;

    ConformalFactor cf_ = ConformalFactor::euclidean();
    std::vector<double> s_, t_, phi_, dphi_, d2phi_;
};

inline PhiTable build_phi(const ConformalFactor& cf, double s_max, std::size_t n = 2048) {
    return PhiTable::build(cf, s_max, n);
}

/// Psi at a profile point, Phi(e^{2u(x^2 + t^2)} (x^2 + t^2)).
double psi_on_profile(const PhiTable& table, const GraphState& state);

/// Diagonal of a surface Hessian in the g_bar-orthonormal principal frame.
struct DirectionalHessian {
    double meridian = 0.0;
    double latitude = 0.0;
};

/// Hess phi on the principal directions from the closed form
///   2 ( g(grad sigma, Y) g(x, Y) + sigma^2 + sigma kbar_i g(x, N_bar) ).
DirectionalHessian hessian_phi_point(const ConformalFactor& cf, const GraphState& state, double xpp);

/// Hessian of a radial function F(|x|^2) restricted to the rotation surface through
/// `state`, from the induced metric e^{2h}[(1 + x'^2) dt^2 + x^2 dtheta^2] with
/// closed-form Christoffel symbols and finite differences of F along the profile
/// (neighbouring points re-integrated from the ODE).
DirectionalHessian surface_hessian_fd(const ConformalFactor& cf, double mean_curvature,
                                      const GraphState& state,
                                      const std::function<double(double)>& radial);

struct HessianCheckSample {
    double param = 0.0;
    DirectionalHessian measured;
    DirectionalHessian predicted;  // 2 sigma^2 Phi' lambda_i
    double scale = 0.0;            // 2 sigma^2 Phi'
    double residual = 0.0;         // max_i |measured_i - predicted_i| / scale
};

struct HessianCheck {
    double max_residual = 0.0;
    std::vector<HessianCheckSample> samples;
};

/// Compares the finite-difference surface Hessian of Psi with 2 sigma^2 Phi' lambda_i
/// (lambda_i from the gap module) at every stored state of the curve.
HessianCheck verify_hessian_factorization(const PhiTable& table, const ProfileCurve& curve,
                                          unsigned threads = 1);

}  // namespace cmcgap
