#include "cmcgap/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cmcgap/curvature.hpp"
#include "cmcgap/errors.hpp"
#include "parallel.hpp"

namespace cmcgap {

namespace {

void require_admissible_x0(double x0) {
    const double limit = shrinker_x0_threshold();
    if (!(x0 > 0.0) || !(x0 < limit)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "x0 = " << x0 << " outside the admissible range 0 < x0 < sqrt(4 - 2 sqrt 2) = "
            << limit;
        throw PreconditionError(msg.str());
    }
}

numerics::RootResult bracketed_root(const numerics::ScalarFn& f, double lo, double hi,
                                    std::size_t scan_points, double tol, const char* what) {
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if ((f_lo <= 0.0) != (f_hi <= 0.0) || f_lo == 0.0 || f_hi == 0.0) {
        return numerics::find_root(f, lo, hi, tol);
    }
    const std::size_t n = std::max<std::size_t>(scan_points, 2);
    std::vector<double> grid(n);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = f(grid[i]);
        if (i > 0 && (values[i] <= 0.0) != (values[i - 1] <= 0.0)) {
            return numerics::find_root(f, grid[i - 1], grid[i], tol);
        }
    }
    std::ostringstream msg;
    msg.precision(9);
    msg << what << ": no sign change on [" << lo << ", " << hi << "]; sampled";
    for (std::size_t i = 0; i < n; i += std::max<std::size_t>(1, n / 8)) {
        msg << " g(" << grid[i] << ")=" << values[i];
    }
    throw NoRootError(msg.str());
}

ShootingResult to_shooting(const numerics::RootResult& root) {
    ShootingResult out;
    out.parameter = root.root;
    out.residual = root.residual;
    out.bracket = root.bracket;
    out.history = root.history;
    out.evaluations = root.evaluations;
    return out;
}

IntegrationOptions symmetric_curve_options(double half_span, double tol) {
    IntegrationOptions io;
    io.tol = tol;
    io.sample_step = half_span / 128.0;
    return io;
}

}  // namespace

double shrinker_x0_threshold() { return std::sqrt(4.0 - 2.0 * std::numbers::sqrt2); }

ShootingResult free_boundary_param(const ConformalFactor& cf, double mean_curvature, double x0,
                                   double lo, double hi, const ShootingOptions& opts) {
    if (!(lo > 0.0) || !(hi > lo)) {
        throw PreconditionError("free-boundary search needs 0 < lo < hi");
    }
    const GraphState start{0.0, x0, 0.0};
    // Clamp the search to where the guarded integrator gets; past a vertical tangent
    // or the axis the graph profile does not exist.
    IntegrationOptions reach;
    reach.tol = opts.integration_tol;
    const ProfileCurve probe = integrate(cf, mean_curvature, x0, 0.0, hi, reach);
    const double top = probe.truncation == Truncation::none ? hi : probe.t_max();
    if (!(top > lo)) {
        std::ostringstream msg;
        msg.precision(9);
        msg << "free boundary: the profile ends at t = " << top << " ("
            << to_string(probe.truncation) << ") before the search start " << lo;
        throw NoRootError(msg.str());
    }
    auto g = [&](double delta) {
        const GraphState p = propagate(cf, mean_curvature, start, delta, opts.integration_tol);
        return p.x - p.xp * delta;
    };
    ShootingResult out =
        to_shooting(bracketed_root(g, lo, top, opts.scan_points, opts.tol, "free boundary"));
    const GraphState end = propagate(cf, mean_curvature, start, out.parameter, opts.integration_tol);
    out.radius = std::hypot(end.x, out.parameter);
    out.curve = integrate_even(cf, mean_curvature, x0, out.parameter,
                               symmetric_curve_options(out.parameter, 1e-12));
    return out;
}

ShootingResult convex_boundary_param(double x0, double min_curvature, double search_max,
                                     const ShootingOptions& opts) {
    require_admissible_x0(x0);
    if (!(min_curvature > 0.0) || !(search_max > 0.0)) {
        throw PreconditionError("convex boundary search needs min_curvature > 0, search_max > 0");
    }
    const auto cf = ConformalFactor::gaussian();
    const GraphState start{0.0, x0, 0.0};
    auto excess = [&](double t) {
        const GraphState p = propagate(cf, 0.0, start, t, opts.integration_tol);
        return latitude_geodesic_curvature(cf, p) - min_curvature;
    };

    // f_bar vanishes at t = 0, so the first crossing can be arbitrarily close to it:
    // scan a geometric grid outward and refine the first sign change.
    const std::size_t n = std::max<std::size_t>(opts.scan_points, 2);
    const double t_first = search_max * 1e-12;
    const double ratio = std::pow(search_max / t_first, 1.0 / static_cast<double>(n - 1));
    double prev_t = t_first;
    double prev_v = excess(prev_t);
    std::size_t evaluations = 1;
    if (prev_v >= 0.0) {
        throw NoRootError("f_bar already exceeds the threshold at the first grid point");
    }
    for (std::size_t i = 1; i < n; ++i) {
        const double t = i + 1 == n ? search_max : prev_t * ratio;
        const double v = excess(t);
        ++evaluations;
        if (v >= 0.0) {
            auto root = numerics::find_root(excess, prev_t, t, opts.tol * std::max(1.0, prev_t));
            // Report the certified side of the bracket: f_bar(delta) >= min_curvature.
            ShootingResult out = to_shooting(root);
            out.parameter = root.bracket.f_hi >= 0.0 ? root.bracket.hi : root.bracket.lo;
            out.residual = root.bracket.f_hi >= 0.0 ? root.bracket.f_hi : root.bracket.f_lo;
            out.evaluations += evaluations;
            const GraphState end = propagate(cf, 0.0, start, out.parameter, opts.integration_tol);
            out.radius = std::hypot(end.x, out.parameter);
            out.curve = integrate_even(cf, 0.0, x0, out.parameter,
                                       symmetric_curve_options(out.parameter, 1e-12));
            return out;
        }
        prev_t = t;
        prev_v = v;
    }
    std::ostringstream msg;
    msg.precision(9);
    msg << "f_bar stays below " << min_curvature << " on (0, " << search_max
        << "]; last value " << prev_v + min_curvature;
    throw NoRootError(msg.str());
}

std::string_view to_string(IntervalEnd end) {
    switch (end) {
        case IntervalEnd::crossing: return "crossing";
        case IntervalEnd::sigma_boundary: return "sigma_boundary";
        case IntervalEnd::integration_end: return "integration_end";
    }
    return "integration_end";
}

GapInterval gap_interval(double x0, double tol, double scan_step, const ShootingOptions& opts) {
    require_admissible_x0(x0);
    if (!(tol >= 0.0) || !(scan_step > 0.0)) {
        throw PreconditionError("gap interval needs tol >= 0 and scan_step > 0");
    }
    const auto cf = ConformalFactor::gaussian();
    IntegrationOptions io;
    io.tol = 1e-12;
    io.sample_step = scan_step;
    // sigma > 0 requires t < 2 on the gaussian factor.
    const ProfileCurve curve = integrate(cf, 0.0, x0, 0.0, 2.0, io);

    GapInterval out;
    out.x0 = x0;
    out.truncation = curve.truncation;
    const double bound = 1.0 + tol;
    for (std::size_t i = 1; i < curve.states.size(); ++i) {
        const GraphState& st = curve.states[i];
        const double prev_t = curve.states[i - 1].t;
        const double rho = st.x * st.x + st.t * st.t;
        if (!(rho < 4.0)) {
            auto gap_to_sphere = [&](double t) {
                const GraphState p = curve.propagate(t);
                return 4.0 - (p.x * p.x + p.t * p.t);
            };
            const auto root = numerics::find_root(gap_to_sphere, prev_t, st.t, opts.tol);
            out.epsilon = root.bracket.f_lo > 0.0 ? root.bracket.lo : root.bracket.hi;
            out.functional_at_end = gaussian_gap_functional(curve.propagate(out.epsilon));
            out.end = IntervalEnd::sigma_boundary;
            return out;
        }
        const double f = gaussian_gap_functional(st);
        if (std::abs(f) > bound) {
            const double target = f > 0.0 ? bound : -bound;
            auto excess = [&](double t) {
                return gaussian_gap_functional(curve.propagate(t)) - target;
            };
            const auto root = numerics::find_root(excess, prev_t, st.t, opts.tol);
            out.epsilon = root.root;
            out.functional_at_end = root.residual + target;
            out.end = IntervalEnd::crossing;
            return out;
        }
    }
    out.epsilon = curve.t_max();
    out.functional_at_end = gaussian_gap_functional(curve.states.back());
    out.end = IntervalEnd::integration_end;
    return out;
}

std::vector<GapInterval> gap_interval_sweep(std::span<const double> x0s, double tol,
                                            unsigned threads) {
    std::vector<GapInterval> out(x0s.size());
    detail::parallel_for(x0s.size(), threads, [&](std::size_t i) { out[i] = gap_interval(x0s[i], tol); });
    return out;
}

namespace {

ArclengthCurve shoot_torus(double x0, const TorusOptions& opts, double sample_step) {
    if (!(x0 > 0.0) || !(x0 < std::numbers::sqrt2)) {
        throw PreconditionError("torus search needs 0 < x0 < sqrt 2");
    }
    IntegrationOptions io;
    io.tol = opts.integration_tol;
    io.sample_step = sample_step;
    io.max_step = 0.05;
    const ArcState start{0.0, x0, 0.0, std::numbers::pi / 2.0};
    // The tangent turns clockwise from vertical-up; the next vertical tangent is on the far side.
    auto event = [](const ArcState& a) { return std::cos(a.theta); };
    ArclengthCurve curve =
        integrate_arclength(ConformalFactor::gaussian(), 0.0, start, opts.max_length, io, event);
    if (curve.truncation == Truncation::axis) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "shrinker profile from x0 = " << x0 << " reached the axis";
        throw SingularAxisError(msg.str());
    }
    if (curve.truncation != Truncation::event || !(curve.states.back().x > x0)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "no return crossing for x0 = " << x0 << " within arclength " << opts.max_length;
        throw NoRootError(msg.str());
    }
    return curve;
}

}  // namespace

double torus_closure_residual(double x0, const TorusOptions& opts) {
    return shoot_torus(x0, opts, 0.0).states.back().z;
}

TorusResult angenent_waist(double lo, double hi, const TorusOptions& opts) {
    if (!(lo > 0.0) || !(hi > lo) || !(hi < std::numbers::sqrt2)) {
        throw PreconditionError("torus search bracket must satisfy 0 < lo < hi < sqrt 2");
    }
    auto residual = [&](double x0) { return torus_closure_residual(x0, opts); };
    const auto root = numerics::find_root(residual, lo, hi, opts.tol);
    TorusResult out;
    out.x1 = root.root;
    out.residual = root.residual;
    out.bracket = root.bracket;
    out.history = root.history;
    out.evaluations = root.evaluations;
    out.curve = shoot_torus(out.x1, opts, 0.01);
    out.x2 = out.curve.states.back().x;
    return out;
}

CombinedExample combined_example(double x0, double min_curvature, double gap_tol,
                                 unsigned threads) {
    require_admissible_x0(x0);
    CombinedExample out;
    out.x0 = x0;
    out.convex = convex_boundary_param(x0, min_curvature);
    out.gap = gap_interval(x0, gap_tol);
    out.delta = out.convex.parameter;
    out.epsilon = out.gap.epsilon;
    out.xi = std::min(out.delta, out.epsilon);

    const auto cf = ConformalFactor::gaussian();
    out.curve = integrate_even(cf, 0.0, x0, out.xi, symmetric_curve_options(out.xi, 1e-12));
    const GraphState end = propagate(cf, 0.0, GraphState{0.0, x0, 0.0}, out.xi, 1e-13);
    out.radius = std::hypot(end.x, out.xi);
    out.boundary_curvature = latitude_geodesic_curvature(cf, end);
    out.report = scan_gap(out.curve, gap_tol, threads);
    return out;
}

}  // namespace cmcgap
