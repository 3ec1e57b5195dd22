#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "cmcgap/metric.hpp"

// Rotation surfaces X(t, phi) = (x(t) cos phi, x(t) sin phi, t) with prescribed
// conformal mean curvature, and the ODE for their profile curve.
//
// Orientation: N = (-cos phi, -sin phi, x') / sqrt(1 + x'^2). Mean curvature is
// the sum of the principal curvatures in g_bar.

namespace cmcgap {

/// Graph parametrization: profile radius x as a function of the axial coordinate t.
struct GraphState {
    double t = 0.0;
    double x = 0.0;
    double xp = 0.0;  // dx/dt
};

/// Arclength parametrization of the profile in the (x, z) half plane; theta is the
/// angle of the unit tangent (dx/ds, dz/ds) = (cos theta, sin theta).
struct ArcState {
    double s = 0.0;
    double x = 0.0;
    double z = 0.0;
    double theta = 0.0;
};

enum class Truncation {
    none,    // reached the requested end of the span
    axis,    // x fell to the axis threshold
    slope,   // |x'| exceeded the slope cap (graph mode only)
    domain,  // left the ball where the conformal factor is defined
    event,   // a user-supplied terminal event fired
};

std::string_view to_string(Truncation reason);

struct IntegrationOptions {
    double tol = 1e-10;         // local error target (absolute and relative)
    double slope_cap = 1e6;     // graph mode: |x'| above this truncates
    double axis_eps = 1e-4;     // x at or below this counts as hitting the axis
    double domain_margin = 1e-9;  // stop when |x|^2 >= a^2 (1 - margin)
    double sample_step = 0.0;   // extra dense-output samples every sample_step (0: none)
    double max_step = 0.0;      // cap on the step size (0: span / 16)
    std::size_t max_steps = 2'000'000;
};

/// x'' from the CMC equation for a graph profile:
///   x'' = (1 + x'^2) / x + 4 u'(rho) (x - x' t)(1 + x'^2) - Hbar e^{u(rho)} (1 + x'^2)^{3/2},
/// rho = x^2 + t^2. Throws SingularAxisError for x <= 0 and DomainError outside the ball.
double cmc_rhs(const ConformalFactor& cf, double mean_curvature, const GraphState& state);

/// The forward form: conformal mean curvature of the rotation surface given x''.
///   Hbar = e^{-u} [ (1 + x'^2 - x x'') / (x (1 + x'^2)^{3/2}) + 4 u' (x - x' t) / (1 + x'^2)^{1/2} ]
double cmc_mean_curvature(const ConformalFactor& cf, const GraphState& state, double xpp);

/// Self-shrinker profile equation (gaussian factor, Hbar = 0):
///   x'' = (1 + x'^2) (1/x - (x - x' t) / 2).
double shrinker_rhs(const GraphState& state);

/// d theta / ds for the arclength form of the CMC equation:
///   kappa = Hbar e^{u} - sin(theta) / x + 4 u' (z cos(theta) - x sin(theta)).
double arclength_curvature(const ConformalFactor& cf, double mean_curvature, const ArcState& state);

ArcState to_arclength(const GraphState& g, double s = 0.0);
/// Requires sin(theta) != 0.
GraphState to_graph(const ArcState& a);

/// Discretized graph-mode solution, states sorted by increasing t.
struct ProfileCurve {
    ConformalFactor metric = ConformalFactor::euclidean();
    double mean_curvature = 0.0;
    double tol = 1e-10;
    std::vector<GraphState> states;
    Truncation truncation = Truncation::none;

    bool empty() const noexcept { return states.empty(); }
    double t_min() const { return states.front().t; }
    double t_max() const { return states.back().t; }
    /// x'' at stored state i, from the ODE right-hand side.
    double xpp(std::size_t i) const;
    /// Cubic Hermite interpolation between stored states.
    GraphState at(double t) const;
    /// Re-integrates from the nearest stored state to t at the curve tolerance.
    GraphState propagate(double t) const;
};

/// Discretized arclength-mode solution, states sorted by increasing s.
struct ArclengthCurve {
    ConformalFactor metric = ConformalFactor::euclidean();
    double mean_curvature = 0.0;
    double tol = 1e-10;
    std::vector<ArcState> states;
    Truncation truncation = Truncation::none;

    bool empty() const noexcept { return states.empty(); }
    /// Cubic Hermite interpolation between stored states.
    ArcState at(double s) const;
};

/// Integrates the graph-mode CMC equation from (t=0, x0, xp0) to t_end (either
/// sign). Stops early with a flagged truncation at the axis, slope cap or domain
/// boundary. Throws PreconditionError for x0 <= 0, ToleranceError when the
/// integrator cannot make progress.
ProfileCurve integrate(const ConformalFactor& cf, double mean_curvature, double x0, double xp0,
                       double t_end, const IntegrationOptions& opts = {});

/// Solution with x'(0) = 0 on [-half_span, half_span], integrated on t >= 0 and
/// mirrored using x(-t) = x(t).
ProfileCurve integrate_even(const ConformalFactor& cf, double mean_curvature, double x0,
                            double half_span, const IntegrationOptions& opts = {});

/// Single precise integration between two graph states (no truncation checks).
GraphState propagate(const ConformalFactor& cf, double mean_curvature, const GraphState& from,
                     double t_to, double tol);

/// Terminal event for arclength integration: integration stops at the first
/// accepted step where guard(state) <= 0, located by bisection on dense output.
using ArcGuard = std::function<double(const ArcState&)>;

ArclengthCurve integrate_arclength(const ConformalFactor& cf, double mean_curvature,
                                   const ArcState& start, double max_s,
                                   const IntegrationOptions& opts = {},
                                   const ArcGuard& event = {});

/// Arclength reparametrization of a graph curve (s from quadrature of sqrt(1 + x'^2)).
ArclengthCurve to_arclength(const ProfileCurve& curve);
/// Graph reparametrization of an arclength curve whose z is strictly monotone.
ProfileCurve to_graph(const ArclengthCurve& curve);

}  // namespace cmcgap
