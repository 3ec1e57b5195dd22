#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "cmcgap/gap.hpp"
#include "cmcgap/metric.hpp"
#include "cmcgap/numerics.hpp"
#include "cmcgap/profile.hpp"

// Root-finding layers over the profile integrator. All families here start from a
// symmetric profile x(0) = x0, x'(0) = 0, integrate t >= 0 only and mirror.

namespace cmcgap {

/// sqrt(4 - 2 sqrt 2): upper end of the admissible x0 range for the shrinker searches.
double shrinker_x0_threshold();

struct ShootingResult {
    double parameter = 0.0;  // solved unknown (delta or x0)
    double residual = 0.0;   // signed residual at parameter
    numerics::Bracket bracket;
    std::vector<numerics::Bracket> history;
    std::size_t evaluations = 0;
    double radius = 0.0;  // sqrt(x(delta)^2 + delta^2) for boundary searches
    ProfileCurve curve;   // symmetric profile on [-parameter, parameter]
};

struct ShootingOptions {
    double tol = 1e-12;            // bracket width target
    double integration_tol = 1e-13;
    std::size_t scan_points = 64;  // grid used to locate a sign change
};

/// Orthogonality of the profile and the sphere |x| = r at t = delta:
/// g(delta) = x(delta) - x'(delta) delta. Roots of g on [lo, hi] (the first sign
/// change on a uniform scan grid if the endpoints do not bracket one).
/// Throws NoRootError listing the sampled g values when there is no sign change.
ShootingResult free_boundary_param(const ConformalFactor& cf, double mean_curvature, double x0,
                                   double lo, double hi, const ShootingOptions& opts = {});

/// Smallest delta in (0, search_max] at which the latitude circle of the gaussian
/// shrinker is strictly convex, f_bar(delta) >= min_curvature. Throws
/// PreconditionError unless 0 < x0 < sqrt(4 - 2 sqrt 2).
ShootingResult convex_boundary_param(double x0, double min_curvature = 1e-6,
                                     double search_max = 1.0, const ShootingOptions& opts = {});

enum class IntervalEnd {
    crossing,         // |F| reached 1 + tol
    sigma_boundary,   // profile reached x^2 + t^2 = 4
    integration_end,  // the integrator stopped (axis, slope) or t reached the scan end
};

std::string_view to_string(IntervalEnd end);

struct GapInterval {
    double x0 = 0.0;
    double epsilon = 0.0;
    double functional_at_end = 0.0;  // F(epsilon)
    IntervalEnd end = IntervalEnd::integration_end;
    Truncation truncation = Truncation::none;
};

/// Largest epsilon such that -1 - tol <= F(t) <= 1 + tol on (-epsilon, epsilon) for
/// the gaussian shrinker, by an outward scan of step `scan_step` followed by a
/// root refinement of the crossing. Same precondition as convex_boundary_param.
GapInterval gap_interval(double x0, double tol = 1e-8, double scan_step = 1e-3,
                         const ShootingOptions& opts = {});

/// gap_interval over a grid of x0 on `threads` workers, in input order.
std::vector<GapInterval> gap_interval_sweep(std::span<const double> x0s, double tol = 1e-8,
                                            unsigned threads = 1);

struct TorusResult {
    double x1 = 0.0;        // inner intercept (waist)
    double x2 = 0.0;        // far intercept
    double residual = 0.0;  // z at the return crossing
    numerics::Bracket bracket;
    std::vector<numerics::Bracket> history;
    std::size_t evaluations = 0;
    ArclengthCurve curve;  // half profile z >= 0 from (x1, 0) to (x2, 0)
};

struct TorusOptions {
    double tol = 1e-12;
    double integration_tol = 1e-12;
    double max_length = 20.0;
};

/// z-offset of the shrinker profile started at (x0, 0) with vertical tangent,
/// measured where the tangent is vertical again with x on the far side.
/// Throws NoRootError when no return crossing is found within max_length
/// (including the circle x = sqrt 2) and SingularAxisError on axis collision.
double torus_closure_residual(double x0, const TorusOptions& opts = {});

/// Closed shrinker profile: root of the closure residual in x0 on [lo, hi] (0, sqrt 2).
TorusResult angenent_waist(double lo = 0.3, double hi = 0.6, const TorusOptions& opts = {});

struct CombinedExample {
    double x0 = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    double xi = 0.0;
    double radius = 0.0;
    double boundary_curvature = 0.0;  // f_bar(xi)
    ShootingResult convex;
    GapInterval gap;
    ProfileCurve curve;  // [-xi, xi]
    GapReport report;
};

/// Gaussian shrinker through (x0, 0) cut at xi = min(delta, epsilon), with the gap
/// report on [-xi, xi].
CombinedExample combined_example(double x0, double min_curvature = 1e-6, double gap_tol = 1e-8,
                                 unsigned threads = 1);

}  // namespace cmcgap
