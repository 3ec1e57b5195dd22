#pragma once

#include <utility>

#include "cmcgap/metric.hpp"
#include "cmcgap/profile.hpp"

namespace cmcgap {

/// Pointwise geometry of the rotation surface at one profile parameter.
/// Index 1 is the meridian direction, index 2 the latitude circle.
struct PointGeometry {
    double k1 = 0.0;  // Euclidean principal curvatures
    double k2 = 0.0;
    double kbar1 = 0.0;  // principal curvatures in g_bar
    double kbar2 = 0.0;
    double mean_curvature = 0.0;  // kbar1 + kbar2
    double support_euclid = 0.0;  // <x, N>
    double support_conf = 0.0;    // g_bar(x, N_bar) = e^u <x, N>
    double sigma = 0.0;
    double traceless_sq = 0.0;  // |II - (H/2) g|^2 = (kbar1 - kbar2)^2 / 2
};

/// (k1, k2) = (-x'' / (1 + x'^2)^{3/2}, 1 / (x sqrt(1 + x'^2))).
std::pair<double, double> euclidean_curvatures(const GraphState& state, double xpp);

/// kbar_i = e^{-u} (k_i - 2 u' <x, N>),  <x, N> = -(x - x' t) / sqrt(1 + x'^2).
PointGeometry conformal_curvatures(const ConformalFactor& cf, const GraphState& state, double xpp);

/// g_bar-geodesic curvature of the boundary circle of a free-boundary surface
/// meeting the sphere |x| = r: sigma(r^2) / (e^{u(r^2)} r). Requires r inside the
/// sigma-positive ball.
double boundary_geodesic_curvature(const ConformalFactor& cf, double r);

/// Conformal geodesic curvature f_bar(t) of the latitude circle at height t,
/// oriented as the boundary of the part of the surface below t:
///   f_bar = e^{-u} (f + 2 u' (x x' + t) / sqrt(1 + x'^2)),  f = x' / (x sqrt(1 + x'^2)).
/// The circle bounding the part above t has curvature -f_bar.
double latitude_geodesic_curvature(const ConformalFactor& cf, const GraphState& state);

}  // namespace cmcgap
