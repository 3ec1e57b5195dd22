#pragma once

#include <string_view>
#include <vector>

#include "cmcgap/curvature.hpp"
#include "cmcgap/profile.hpp"

namespace cmcgap {

/// Phi'-free eigenvalue factors of Hess Psi on the surface:
/// lambda_i = 1 + kbar_i * s / sigma, s = g_bar(x, N_bar).
struct HessianFactors {
    double lambda1 = 0.0;  // meridian
    double lambda2 = 0.0;  // latitude
};

HessianFactors hessian_eigen_factors(const PointGeometry& pg);

/// The pinching condition at a point:
///   lhs = |Phi_tf|^2 s^2 / sigma^2  <=  rhs = (2 + H s / sigma)^2 / 2,
/// together with the sign condition 2 + H s / sigma >= 0.
struct GapCondition {
    double lhs = 0.0;
    double rhs = 0.0;
    bool second_ok = false;
};

GapCondition gap_condition(const PointGeometry& pg);

/// Gap functional of a shrinker profile in the gaussian factor u = -t/8:
///   F = [4 - x (x - x' t)] (x - x' t) / (x (4 - x^2 - t^2)(1 + x'^2)).
/// For a minimal surface the pinching condition is -1 <= F <= 1.
/// Throws DomainError when x^2 + t^2 >= 4 (sigma <= 0).
double gaussian_gap_functional(const GraphState& state);

/// The same ratio for an arbitrary factor:
///   (1 + 2u' (x - x' t) x)(x - x' t) / ((1 + 2u' rho) x (1 + x'^2)) = -kbar2 s / sigma.
double general_gap_functional(const ConformalFactor& cf, const GraphState& state);

enum class GapVerdict { holds_strictly, holds_with_equality, fails };

std::string_view to_string(GapVerdict verdict);

struct GapSample {
    double param = 0.0;
    double functional = 0.0;  // general_gap_functional
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool second_ok = false;
    bool pass = false;
    bool equality = false;
    bool sigma_violation = false;  // sample outside the sigma-positive ball
};

struct GapReport {
    std::vector<GapSample> samples;
    GapVerdict verdict = GapVerdict::holds_strictly;
    std::vector<double> equality_at;
    std::vector<double> fails_at;

    bool holds() const noexcept { return verdict != GapVerdict::fails; }
};

/// Relative threshold |lhs - rhs| <= kEqualityTolerance * max(1, rhs) marking equality.
inline constexpr double kEqualityTolerance = 1e-8;

/// Evaluates the pinching condition at every stored state of the curve. A sample
/// passes iff lhs <= rhs + tolerance * max(1, rhs) and the sign condition holds.
/// Samples are evaluated on `threads` workers; the report does not depend on it.
/// Throws PreconditionError for curves with fewer than two states.
GapReport scan_gap(const ProfileCurve& curve, double tolerance = 1e-8, unsigned threads = 1);

}  // namespace cmcgap
