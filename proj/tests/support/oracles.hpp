#pragma once

// Reference computations that share no code with the library: closed forms,
// a plain Newton iteration, composite Simpson quadrature, fixed-step RK4 and
// finite differences.

#include <array>
#include <cmath>
#include <functional>

namespace oracle {

/// Root of coth(d) = d, i.e. cosh d - d sinh d = 0, by Newton from d = 1.2.
inline double critical_catenoid_root() {
    double d = 1.2;
    for (int i = 0; i < 100; ++i) {
        const double f = std::cosh(d) - d * std::sinh(d);
        const double df = -d * std::cosh(d);
        const double step = f / df;
        d -= step;
        if (std::abs(step) < 1e-16) {
            break;
        }
    }
    return d;
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
    if (n % 2 != 0) {
        ++n;
    }
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double second_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// Five-point second derivative, O(h^4).
inline double second_diff5(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
           (12.0 * h * h);
}

/// Fixed-step classical RK4 for x'' = rhs(t, x, x'); returns (x, x') at t_end.
inline std::array<double, 2> rk4(const std::function<double(double, double, double)>& rhs, double x0,
                                 double xp0, double t_end, int steps) {
    const double h = t_end / steps;
    double t = 0.0, x = x0, p = xp0;
    for (int i = 0; i < steps; ++i) {
        const double k1x = p, k1p = rhs(t, x, p);
        const double k2x = p + 0.5 * h * k1p, k2p = rhs(t + 0.5 * h, x + 0.5 * h * k1x, p + 0.5 * h * k1p);
        const double k3x = p + 0.5 * h * k2p, k3p = rhs(t + 0.5 * h, x + 0.5 * h * k2x, p + 0.5 * h * k2p);
        const double k4x = p + h * k3p, k4p = rhs(t + h, x + h * k3x, p + h * k3p);
        x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
        p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        t += h;
    }
    return {x, p};
}

/// Shrinker profile equation written out independently.
inline double shrinker(double t, double x, double p) {
    return (1.0 + p * p) * (1.0 / x - 0.5 * (x - p * t));
}

/// Principal curvatures of X(t, phi) = (x(t) cos phi, x(t) sin phi, t) at phi = 0 from
/// the Weingarten map A = -dN, differencing the unit normal
/// N(t, phi) = (-cos phi, -sin phi, x') / sqrt(1 + x'^2) numerically.
inline std::array<double, 2> shape_operator_fd(const std::function<double(double)>& x, double t,
                                               double h = 1e-4) {
    auto normal = [&](double s, double phi) {
        const double xp = central_diff(x, s, 1e-6);
        const double norm = std::sqrt(1.0 + xp * xp);
        return std::array<double, 3>{-std::cos(phi) / norm, -std::sin(phi) / norm, xp / norm};
    };
    const double xp = central_diff(x, t, 1e-6);
    const std::array<double, 3> xt{xp, 0.0, 1.0};
    const std::array<double, 3> xphi{0.0, x(t), 0.0};
    const auto np = normal(t + h, 0.0), nm = normal(t - h, 0.0);
    const auto qp = normal(t, h), qm = normal(t, -h);
    double k1 = 0.0, k2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        k1 -= (np[i] - nm[i]) / (2.0 * h) * xt[i];
        k2 -= (qp[i] - qm[i]) / (2.0 * h) * xphi[i];
    }
    return {k1 / (xp * xp + 1.0), k2 / (x(t) * x(t))};
}

}  // namespace oracle
