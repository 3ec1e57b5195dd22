#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

// Scalar numerical building blocks shared by the geometry modules: adaptive
// quadrature, bracketed root finding with an auditable bracket trail, and a
// safeguarded monotone inverse.

namespace cmcgap::numerics {

using ScalarFn = std::function<double(double)>;

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod (G7/K15) quadrature of f on [a, b].
/// Throws ToleranceError when the error estimate exceeds abs_tol.
QuadratureResult integrate(const ScalarFn& f, double a, double b, double abs_tol = 1e-10);

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
    double width() const { return hi - lo; }
};

struct RootResult {
    double root = 0.0;
    double residual = 0.0;  // f(root), signed
    Bracket bracket;        // final sign-change bracket, root inside it
    std::vector<Bracket> history;
    std::size_t evaluations = 0;
};

/// Bracketed root of f on [lo, hi] (TOMS 748). f(lo) and f(hi) must differ in
/// sign; the search stops once the bracket is narrower than x_tol.
/// Throws NoRootError when there is no sign change.
RootResult find_root(const ScalarFn& f, double lo, double hi, double x_tol,
                     std::size_t max_iterations = 200);

/// First adjacent pair of grid points where f changes sign (zero counts as a
/// sign change). Returns nullopt if none.
std::optional<Bracket> first_sign_change(const ScalarFn& f, std::span<const double> grid);

/// Solves g(t) = target for t in [lo, hi] where g is strictly increasing,
/// using bracketed Newton iteration. |g(t) - target| ends below abs_tol or the
/// bracket collapses to machine precision.
double invert_increasing(const ScalarFn& g, const ScalarFn& dg, double target, double lo,
                         double hi, double abs_tol = 1e-12);

}  // namespace cmcgap::numerics
