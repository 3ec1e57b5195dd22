#include "cmcgap/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "cmcgap/errors.hpp"

namespace cmcgap::numerics {

QuadratureResult integrate(const ScalarFn& f, double a, double b, double abs_tol) {
    if (a == b) {
        return {};
    }
    double error = 0.0;
    double l1 = 0.0;
    // Integrate on [0, 1] and rescale: Boost's error estimate is unreliable on very
    // short intervals. Its tolerance is relative to the L1 norm, so derive it from
    // abs_tol with a coarse first pass; an unreachable target makes Boost recurse to
    // full depth and sum roundoff into the estimate.
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    const double width = b - a;
    auto mapped = [&](double v) { return f(a + width * v); };
    gk::integrate(mapped, 0.0, 1.0, 0, 0.0, &error, &l1);
    const double scale = std::abs(width) * std::max(l1, std::numeric_limits<double>::min());
    const double rel = std::max(0.25 * abs_tol / scale, 1e-13);
    double value = gk::integrate(mapped, 0.0, 1.0, 15, rel, &error, &l1);
    value *= width;
    error *= std::abs(width);
    if (!std::isfinite(value) || error > abs_tol) {
        std::ostringstream msg;
        msg << "quadrature on [" << a << ", " << b << "] reached error estimate " << error
            << " > " << abs_tol;
        throw ToleranceError(msg.str());
    }
    return {value, error};
}

namespace {

bool same_sign(double a, double b) { return (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0); }

}  // namespace

RootResult find_root(const ScalarFn& f, double lo, double hi, double x_tol,
                     std::size_t max_iterations) {
    if (lo > hi) {
        std::swap(lo, hi);
    }
    RootResult out;
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    out.evaluations = 2;
    if (!std::isfinite(f_lo) || !std::isfinite(f_hi) || same_sign(f_lo, f_hi)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "no sign change on [" << lo << ", " << hi << "]: f(lo)=" << f_lo
            << ", f(hi)=" << f_hi;
        throw NoRootError(msg.str());
    }
    Bracket current{lo, hi, f_lo, f_hi};
    out.history.push_back(current);

    if (f_lo == 0.0 || f_hi == 0.0) {
        out.root = f_lo == 0.0 ? lo : hi;
        out.residual = 0.0;
        out.bracket = current;
        return out;
    }

    auto tracked = [&](double x) {
        const double fx = f(x);
        ++out.evaluations;
        if (same_sign(fx, current.f_lo)) {
            current.lo = x;
            current.f_lo = fx;
        } else {
            current.hi = x;
            current.f_hi = fx;
        }
        out.history.push_back(current);
        return fx;
    };
    auto stop = [x_tol](double a, double b) { return std::abs(b - a) <= x_tol; };

    std::uintmax_t iterations = max_iterations;
    const auto [a, b] = boost::math::tools::toms748_solve(tracked, lo, hi, f_lo, f_hi, stop,
                                                          iterations);
    (void)a;
    (void)b;

    if (current.f_lo == 0.0 || current.f_hi == 0.0) {
        out.root = current.f_lo == 0.0 ? current.lo : current.hi;
        out.residual = 0.0;
    } else {
        // The midpoint of the final bracket lies strictly inside it.
        out.root = 0.5 * (current.lo + current.hi);
        out.residual = f(out.root);
        ++out.evaluations;
    }
    out.bracket = current;
    return out;
}

std::optional<Bracket> first_sign_change(const ScalarFn& f, std::span<const double> grid) {
    if (grid.size() < 2) {
        return std::nullopt;
    }
    double prev_x = grid[0];
    double prev_f = f(prev_x);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double x = grid[i];
        const double fx = f(x);
        if (!same_sign(prev_f, fx)) {
            return Bracket{prev_x, x, prev_f, fx};
        }
        prev_x = x;
        prev_f = fx;
    }
    return std::nullopt;
}

double invert_increasing(const ScalarFn& g, const ScalarFn& dg, double target, double lo,
                         double hi, double abs_tol) {
    if (target <= g(lo)) {
        return lo;
    }
    if (target >= g(hi)) {
        return hi;
    }
    auto fn = [&](double t) { return std::make_pair(g(t) - target, dg(t)); };
    std::uintmax_t iterations = 200;
    double t = boost::math::tools::newton_raphson_iterate(
        fn, 0.5 * (lo + hi), lo, hi, std::numeric_limits<double>::digits - 2, iterations);
    if (std::abs(g(t) - target) > abs_tol) {
        // Newton stalled on a flat stretch; finish with plain bisection.
        double a = lo;
        double b = hi;
        for (int i = 0; i < 200 && b - a > 0.0; ++i) {
            const double m = 0.5 * (a + b);
            if (m <= a || m >= b) {
                break;
            }
            (g(m) < target ? a : b) = m;
        }
        t = 0.5 * (a + b);
    }
    return t;
}

}  // namespace cmcgap::numerics
