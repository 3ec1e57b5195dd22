#include "cmcgap/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cmcgap/errors.hpp"
#include "cmcgap/numerics.hpp"
#include "ode_driver.hpp"

namespace cmcgap {

namespace {

using detail::Vec;

constexpr double kBlowUp = 1e150;

enum GuardReason : int {
    kAxis = static_cast<int>(Truncation::axis),
    kSlope = static_cast<int>(Truncation::slope),
    kDomain = static_cast<int>(Truncation::domain),
    kEvent = static_cast<int>(Truncation::event),
};

double hermite(double t0, double t1, double y0, double y1, double m0, double m1, double t) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * m1;
}

double xpp_unchecked(const ConformalFactor& cf, double hbar, double t, double x, double xp) {
    const double rho = x * x + t * t;
    const double q = 1.0 + xp * xp;
    double out = q / x + 4.0 * cf.du(rho) * (x - xp * t) * q;
    if (hbar != 0.0) {
        out -= hbar * std::exp(cf.u(rho)) * q * std::sqrt(q);
    }
    return out;
}

double kappa_unchecked(const ConformalFactor& cf, double hbar, double x, double z, double theta) {
    const double rho = x * x + z * z;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    double out = -s / x + 4.0 * cf.du(rho) * (z * c - x * s);
    if (hbar != 0.0) {
        out += hbar * std::exp(cf.u(rho));
    }
    return out;
}

// Right-hand sides used inside the integrator: invalid trial states return a
// huge derivative so the step is rejected instead of throwing mid-step.
auto graph_system(const ConformalFactor& cf, double hbar) {
    return [&cf, hbar](double t, const Vec<2>& y) -> Vec<2> {
        const double x = y[0];
        if (!(x > 0.0) || !cf.in_domain(x * x + t * t)) {
            return {kBlowUp, kBlowUp};
        }
        return {y[1], xpp_unchecked(cf, hbar, t, x, y[1])};
    };
}

auto arc_system(const ConformalFactor& cf, double hbar) {
    return [&cf, hbar](double, const Vec<3>& y) -> Vec<3> {
        const double x = y[0];
        if (!(x > 0.0) || !cf.in_domain(x * x + y[1] * y[1])) {
            return {kBlowUp, kBlowUp, kBlowUp};
        }
        return {std::cos(y[2]), std::sin(y[2]), kappa_unchecked(cf, hbar, x, y[1], y[2])};
    };
}

void require_positive_x(double x) {
    if (!(x > 0.0)) {
        std::ostringstream msg;
        msg << "profile radius x = " << x << " is not positive (rotation axis)";
        throw SingularAxisError(msg.str());
    }
}

template <class State, class Key>
std::size_t locate(const std::vector<State>& states, double v, Key key) {
    auto it = std::upper_bound(states.begin(), states.end(), v,
                               [&](double value, const State& s) { return value < key(s); });
    if (it == states.begin()) {
        return 0;
    }
    const auto idx = static_cast<std::size_t>(std::distance(states.begin(), it)) - 1;
    return std::min(idx, states.size() - 2);
}

}  // namespace

std::string_view to_string(Truncation reason) {
    switch (reason) {
        case Truncation::none: return "none";
        case Truncation::axis: return "axis";
        case Truncation::slope: return "slope";
        case Truncation::domain: return "domain";
        case Truncation::event: return "event";
    }
    return "none";
}

double cmc_rhs(const ConformalFactor& cf, double mean_curvature, const GraphState& state) {
    require_positive_x(state.x);
    cf.require_domain(state.x * state.x + state.t * state.t);
    return xpp_unchecked(cf, mean_curvature, state.t, state.x, state.xp);
}

double cmc_mean_curvature(const ConformalFactor& cf, const GraphState& state, double xpp) {
    require_positive_x(state.x);
    const double rho = state.x * state.x + state.t * state.t;
    cf.require_domain(rho);
    const double x = state.x;
    const double xp = state.xp;
    const double q = 1.0 + xp * xp;
    const double sq = std::sqrt(q);
    const double bracket =
        (q - x * xpp) / (x * q * sq) + 4.0 * cf.du(rho) * (x - xp * state.t) / sq;
    return std::exp(-cf.u(rho)) * bracket;
}

double shrinker_rhs(const GraphState& state) {
    require_positive_x(state.x);
    const double q = 1.0 + state.xp * state.xp;
    return q * (1.0 / state.x - 0.5 * (state.x - state.xp * state.t));
}

double arclength_curvature(const ConformalFactor& cf, double mean_curvature, const ArcState& state) {
    require_positive_x(state.x);
    cf.require_domain(state.x * state.x + state.z * state.z);
    return kappa_unchecked(cf, mean_curvature, state.x, state.z, state.theta);
}

ArcState to_arclength(const GraphState& g, double s) {
    return {s, g.x, g.t, std::atan2(1.0, g.xp)};
}

GraphState to_graph(const ArcState& a) {
    const double sn = std::sin(a.theta);
    if (sn == 0.0) {
        throw PreconditionError("horizontal tangent has no graph representation x(t)");
    }
    return {a.z, a.x, std::cos(a.theta) / sn};
}

double ProfileCurve::xpp(std::size_t i) const {
    return cmc_rhs(metric, mean_curvature, states.at(i));
}

GraphState ProfileCurve::at(double t) const {
    if (states.size() < 2 || t < t_min() || t > t_max()) {
        std::ostringstream msg;
        msg << "t = " << t << " outside the computed profile";
        throw PreconditionError(msg.str());
    }
    const std::size_t i = locate(states, t, [](const GraphState& s) { return s.t; });
    const GraphState& a = states[i];
    const GraphState& b = states[i + 1];
    const double xa = xpp(i);
    const double xb = xpp(i + 1);
    return {t, hermite(a.t, b.t, a.x, b.x, a.xp, b.xp, t),
            hermite(a.t, b.t, a.xp, b.xp, xa, xb, t)};
}

GraphState ProfileCurve::propagate(double t) const {
    if (states.empty()) {
        throw PreconditionError("empty profile curve");
    }
    std::size_t best = 0;
    if (states.size() > 1) {
        const std::size_t i = locate(states, t, [](const GraphState& s) { return s.t; });
        best = std::abs(states[i].t - t) <= std::abs(states[i + 1].t - t) ? i : i + 1;
    }
    return cmcgap::propagate(metric, mean_curvature, states[best], t, tol);
}

ArcState ArclengthCurve::at(double s) const {
    if (states.size() < 2 || s < states.front().s || s > states.back().s) {
        std::ostringstream msg;
        msg << "s = " << s << " outside the computed profile";
        throw PreconditionError(msg.str());
    }
    const std::size_t i = locate(states, s, [](const ArcState& a) { return a.s; });
    const ArcState& a = states[i];
    const ArcState& b = states[i + 1];
    const double ka = arclength_curvature(metric, mean_curvature, a);
    const double kb = arclength_curvature(metric, mean_curvature, b);
    return {s, hermite(a.s, b.s, a.x, b.x, std::cos(a.theta), std::cos(b.theta), s),
            hermite(a.s, b.s, a.z, b.z, std::sin(a.theta), std::sin(b.theta), s),
            hermite(a.s, b.s, a.theta, b.theta, ka, kb, s)};
}

ProfileCurve integrate(const ConformalFactor& cf, double mean_curvature, double x0, double xp0,
                       double t_end, const IntegrationOptions& opts) {
    if (!(x0 > 0.0) || !std::isfinite(x0)) {
        throw PreconditionError("initial radius x0 must be positive");
    }
    if (x0 <= opts.axis_eps) {
        throw SingularAxisError("initial radius is already at the rotation axis");
    }
    if (!(opts.tol > 0.0) || !std::isfinite(t_end) || !std::isfinite(xp0)) {
        throw PreconditionError("tolerance must be positive and the span finite");
    }
    cf.require_domain(x0 * x0);

    std::vector<detail::Guard<2>> guards;
    guards.push_back({[eps = opts.axis_eps](double, const Vec<2>& y) { return y[0] - eps; }, kAxis});
    guards.push_back(
        {[cap = opts.slope_cap](double, const Vec<2>& y) { return cap - std::abs(y[1]); }, kSlope});
    if (std::isfinite(cf.domain_limit())) {
        const double limit = cf.domain_limit() * cf.domain_limit() * (1.0 - opts.domain_margin);
        guards.push_back(
            {[limit](double t, const Vec<2>& y) { return limit - (y[0] * y[0] + t * t); }, kDomain});
    }

    detail::DriverOptions dopt{opts.tol, opts.sample_step, opts.max_step, opts.max_steps};
    const auto run = detail::run_dense<2>(graph_system(cf, mean_curvature), Vec<2>{x0, xp0}, 0.0,
                                          t_end, dopt, guards);

    ProfileCurve curve;
    curve.metric = cf;
    curve.mean_curvature = mean_curvature;
    curve.tol = opts.tol;
    curve.truncation = static_cast<Truncation>(run.stop_reason);
    curve.states.reserve(run.ts.size());
    for (std::size_t i = 0; i < run.ts.size(); ++i) {
        curve.states.push_back({run.ts[i], run.ys[i][0], run.ys[i][1]});
    }
    if (t_end < 0.0) {
        std::reverse(curve.states.begin(), curve.states.end());
    }
    return curve;
}

ProfileCurve integrate_even(const ConformalFactor& cf, double mean_curvature, double x0,
                            double half_span, const IntegrationOptions& opts) {
    if (!(half_span > 0.0)) {
        throw PreconditionError("half span must be positive");
    }
    ProfileCurve half = integrate(cf, mean_curvature, x0, 0.0, half_span, opts);
    ProfileCurve full = half;
    full.states.clear();
    full.states.reserve(2 * half.states.size() - 1);
    for (auto it = half.states.rbegin(); it != half.states.rend(); ++it) {
        if (it->t > 0.0) {
            full.states.push_back({-it->t, it->x, -it->xp});
        }
    }
    full.states.insert(full.states.end(), half.states.begin(), half.states.end());
    return full;
}

GraphState propagate(const ConformalFactor& cf, double mean_curvature, const GraphState& from,
                     double t_to, double tol) {
    require_positive_x(from.x);
    const auto y = detail::run_to<2>(graph_system(cf, mean_curvature), Vec<2>{from.x, from.xp},
                                     from.t, t_to, tol);
    return {t_to, y[0], y[1]};
}

ArclengthCurve integrate_arclength(const ConformalFactor& cf, double mean_curvature,
                                   const ArcState& start, double max_s,
                                   const IntegrationOptions& opts, const ArcGuard& event) {
    if (!(start.x > 0.0)) {
        throw PreconditionError("initial radius x must be positive");
    }
    if (start.x <= opts.axis_eps) {
        throw SingularAxisError("initial radius is already at the rotation axis");
    }
    if (!(max_s > 0.0) || !(opts.tol > 0.0)) {
        throw PreconditionError("arclength span and tolerance must be positive");
    }
    cf.require_domain(start.x * start.x + start.z * start.z);

    std::vector<detail::Guard<3>> guards;
    guards.push_back({[eps = opts.axis_eps](double, const Vec<3>& y) { return y[0] - eps; }, kAxis});
    if (std::isfinite(cf.domain_limit())) {
        const double limit = cf.domain_limit() * cf.domain_limit() * (1.0 - opts.domain_margin);
        guards.push_back(
            {[limit](double, const Vec<3>& y) { return limit - (y[0] * y[0] + y[1] * y[1]); },
             kDomain});
    }
    if (event) {
        guards.push_back({[&event](double s, const Vec<3>& y) {
                              return event(ArcState{s, y[0], y[1], y[2]});
                          },
                          kEvent});
    }

    detail::DriverOptions dopt{opts.tol, opts.sample_step, opts.max_step, opts.max_steps};
    const auto run = detail::run_dense<3>(arc_system(cf, mean_curvature),
                                          Vec<3>{start.x, start.z, start.theta}, start.s,
                                          start.s + max_s, dopt, guards);

    ArclengthCurve curve;
    curve.metric = cf;
    curve.mean_curvature = mean_curvature;
    curve.tol = opts.tol;
    curve.truncation = static_cast<Truncation>(run.stop_reason);
    curve.states.reserve(run.ts.size());
    for (std::size_t i = 0; i < run.ts.size(); ++i) {
        curve.states.push_back({run.ts[i], run.ys[i][0], run.ys[i][1], run.ys[i][2]});
    }
    return curve;
}

ArclengthCurve to_arclength(const ProfileCurve& curve) {
    ArclengthCurve out;
    out.metric = curve.metric;
    out.mean_curvature = curve.mean_curvature;
    out.tol = curve.tol;
    out.truncation = curve.truncation;
    if (curve.empty()) {
        return out;
    }
    double s = 0.0;
    out.states.push_back(to_arclength(curve.states.front(), s));
    for (std::size_t i = 1; i < curve.states.size(); ++i) {
        const double a = curve.states[i - 1].t;
        const double b = curve.states[i].t;
        auto speed = [&](double t) {
            const double xp = curve.at(t).xp;
            return std::sqrt(1.0 + xp * xp);
        };
        s += numerics::integrate(speed, a, b, 1e-9).value;
        out.states.push_back(to_arclength(curve.states[i], s));
    }
    return out;
}

ProfileCurve to_graph(const ArclengthCurve& curve) {
    ProfileCurve out;
    out.metric = curve.metric;
    out.mean_curvature = curve.mean_curvature;
    out.tol = curve.tol;
    out.truncation = curve.truncation;
    for (const auto& a : curve.states) {
        out.states.push_back(to_graph(a));
    }
    if (out.states.size() > 1 && out.states.front().t > out.states.back().t) {
        std::reverse(out.states.begin(), out.states.end());
    }
    for (std::size_t i = 1; i < out.states.size(); ++i) {
        if (!(out.states[i].t > out.states[i - 1].t)) {
            throw PreconditionError("profile height is not strictly monotone; no graph form");
        }
    }
    return out;
}

}  // namespace cmcgap
