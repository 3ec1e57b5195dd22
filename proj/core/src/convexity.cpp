#include "cmcgap/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cmcgap/curvature.hpp"
#include "cmcgap/errors.hpp"
#include "cmcgap/gap.hpp"
#include "cmcgap/numerics.hpp"
#include "parallel.hpp"

namespace cmcgap {

namespace {

struct Coefficients {
    const ConformalFactor& cf;
    double a(double t) const { return std::exp(2.0 * cf.u(t)) * t; }
    double b(double t) const { return 1.0 + 2.0 * cf.du(t) * t; }
    double da(double t) const { return std::exp(2.0 * cf.u(t)) * b(t); }
    double db(double t) const { return 2.0 * (cf.ddu(t) * t + cf.du(t)); }
};

}  // namespace

double conformal_norm_sq(const ConformalFactor& cf, double rho) {
    cf.require_domain(rho);
    return std::exp(2.0 * cf.u(rho)) * rho;
}

PhiTable PhiTable::build(const ConformalFactor& cf, double s_max, std::size_t n) {
    if (!(s_max > 0.0) || !std::isfinite(s_max) || n < 2) {
        throw PreconditionError("Phi table needs s_max > 0 and at least two grid points");
    }
    const Coefficients co{cf};
    const double r_pos = sigma_positivity_radius(cf);

    // Upper end of the usable t-range: inside the sigma-positive ball and a(t_hi) > s_max.
    double t_hi = 0.0;
    if (std::isfinite(r_pos)) {
        t_hi = r_pos * r_pos * (1.0 - 1e-12);
        if (!(co.a(t_hi) > s_max)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "s_max = " << s_max << " exceeds the image " << co.a(t_hi)
                << " of a(t) on the sigma-positive range";
            throw DomainError(msg.str(), s_max);
        }
    } else {
        t_hi = 1.0;
        while (!(co.a(t_hi) > s_max)) {
            t_hi *= 2.0;
            if (t_hi > 1e12) {
                throw DomainError("s_max is beyond the image of a(t)", s_max);
            }
        }
    }

    PhiTable table;
    table.cf_ = cf;
    table.s_.resize(n);
    table.t_.resize(n);
    table.phi_.resize(n);
    table.dphi_.resize(n);
    table.d2phi_.resize(n);

    auto a_fn = [&](double t) { return co.a(t); };
    auto da_fn = [&](double t) { return co.da(t); };
    const double last = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double frac = static_cast<double>(i) / last;
        const double s = i + 1 == n ? s_max : s_max * frac * frac;
        const double lo = i == 0 ? 0.0 : table.t_[i - 1];
        const double t = s == 0.0 ? 0.0 : numerics::invert_increasing(a_fn, da_fn, s, lo, t_hi);
        table.s_[i] = s;
        table.t_[i] = t;
        const double b = co.b(t);
        table.dphi_[i] = 1.0 / b;
        table.d2phi_[i] = -table.dphi_[i] * co.db(t) / (co.da(t) * b);
    }

    table.phi_[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double t_lo = table.t_[i - 1];
        const double t_up = table.t_[i];
        auto integrand = [&](double xi) {
            const double t = numerics::invert_increasing(a_fn, da_fn, xi, t_lo, t_up, 1e-14);
            return 1.0 / co.b(t);
        };
        table.phi_[i] = table.phi_[i - 1] +
                        numerics::integrate(integrand, table.s_[i - 1], table.s_[i], 1e-12).value;
    }
    return table;
}

std::size_t PhiTable::interval(double s) const {
    if (!(s >= 0.0) || s > s_.back()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "s = " << s << " outside the Phi table range [0, " << s_.back() << "]";
        throw DomainError(msg.str(), s);
    }
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const auto idx = static_cast<std::size_t>(std::distance(s_.begin(), it));
    return std::clamp<std::size_t>(idx, 1, s_.size() - 1) - 1;
}

double PhiTable::value(double s) const {
    const std::size_t k = interval(s);
    const double h = s_[k + 1] - s_[k];
    double m0 = dphi_[k];
    double m1 = dphi_[k + 1];
    // Fritsch-Carlson limiter keeps the interpolant monotone.
    const double secant = (phi_[k + 1] - phi_[k]) / h;
    if (secant > 0.0) {
        const double alpha = m0 / secant;
        const double beta = m1 / secant;
        const double r2 = alpha * alpha + beta * beta;
        if (r2 > 9.0) {
            const double tau = 3.0 / std::sqrt(r2);
            m0 = tau * alpha * secant;
            m1 = tau * beta * secant;
        }
    }
    const double u = (s - s_[k]) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * phi_[k] + (u3 - 2 * u2 + u) * h * m0 +
           (-2 * u3 + 3 * u2) * phi_[k + 1] + (u3 - u2) * h * m1;
}

double PhiTable::derivative(double s) const {
    const std::size_t k = interval(s);
    const double h = s_[k + 1] - s_[k];
    const double u = (s - s_[k]) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * dphi_[k] + (u3 - 2 * u2 + u) * h * d2phi_[k] +
           (-2 * u3 + 3 * u2) * dphi_[k + 1] + (u3 - u2) * h * d2phi_[k + 1];
}

double psi_on_profile(const PhiTable& table, const GraphState& state) {
    const double rho = state.x * state.x + state.t * state.t;
    return table.value(conformal_norm_sq(table.metric(), rho));
}

DirectionalHessian hessian_phi_point(const ConformalFactor& cf, const GraphState& state,
                                     double xpp) {
    const PointGeometry pg = conformal_curvatures(cf, state, xpp);
    const double rho = state.x * state.x + state.t * state.t;
    const double g = grad_sigma_coefficient(cf, rho);
    // g_bar(x, e1) for the g_bar-unit meridian vector e1 = e^{-h} T.
    const double x_dot_e1 =
        std::exp(cf.u(rho)) * (state.x * state.xp + state.t) / std::sqrt(1.0 + state.xp * state.xp);
    const double s2 = pg.sigma * pg.sigma;
    return {2.0 * (g * x_dot_e1 * x_dot_e1 + s2 + pg.sigma * pg.kbar1 * pg.support_conf),
            2.0 * (s2 + pg.sigma * pg.kbar2 * pg.support_conf)};
}

DirectionalHessian surface_hessian_fd(const ConformalFactor& cf, double mean_curvature,
                                      const GraphState& state,
                                      const std::function<double(double)>& radial) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double fd_tol = 1e-13;
    const double scale = std::max(1.0, std::abs(state.t));
    const double h1 = std::cbrt(eps) * scale;
    const double h2 = std::sqrt(std::sqrt(eps)) * scale;

    auto f_at = [&](double dt) {
        const GraphState p = propagate(cf, mean_curvature, state, state.t + dt, fd_tol);
        return radial(p.x * p.x + p.t * p.t);
    };
    const double f0 = radial(state.x * state.x + state.t * state.t);
    const double f_t = (f_at(h1) - f_at(-h1)) / (2.0 * h1);
    const double f_tt = (f_at(h2) - 2.0 * f0 + f_at(-h2)) / (h2 * h2);

    const double x = state.x;
    const double xp = state.xp;
    const double xpp = cmc_rhs(cf, mean_curvature, state);
    const double rho = x * x + state.t * state.t;
    const double e2h = std::exp(2.0 * cf.u(rho));
    const double dh = cf.du(rho) * 2.0 * (x * xp + state.t);
    const double q = 1.0 + xp * xp;
    const double E = e2h * q;
    const double G = e2h * x * x;
    const double dE = e2h * (2.0 * dh * q + 2.0 * xp * xpp);
    const double dG = e2h * (2.0 * dh * x * x + 2.0 * x * xp);
    const double gamma_tt = dE / (2.0 * E);    // Gamma^t_tt
    const double gamma_pp = -dG / (2.0 * E);   // Gamma^t_{theta theta}
    return {(f_tt - gamma_tt * f_t) / E, (-gamma_pp * f_t) / G};
}

HessianCheck verify_hessian_factorization(const PhiTable& table, const ProfileCurve& curve,
                                          unsigned threads) {
    if (curve.states.empty()) {
        throw PreconditionError("empty profile curve");
    }
    if (!(table.metric() == curve.metric)) {
        throw PreconditionError("Phi table and curve use different conformal factors");
    }
    const auto& cf = curve.metric;
    auto psi_radial = [&](double rho) { return table.value(conformal_norm_sq(cf, rho)); };

    HessianCheck check;
    check.samples.resize(curve.states.size());
    detail::parallel_for(curve.states.size(), threads, [&](std::size_t i) {
        const GraphState& st = curve.states[i];
        if (!(st.x > 0.0)) {
            throw SingularAxisError("degenerate induced metric at the axis");
        }
        const PointGeometry pg = conformal_curvatures(cf, st, curve.xpp(i));
        const auto lam = hessian_eigen_factors(pg);
        const double rho = st.x * st.x + st.t * st.t;
        const double scale = 2.0 * pg.sigma * pg.sigma * table.derivative(conformal_norm_sq(cf, rho));

        HessianCheckSample& out = check.samples[i];
        out.param = st.t;
        out.scale = scale;
        out.predicted = {scale * lam.lambda1, scale * lam.lambda2};
        out.measured = surface_hessian_fd(cf, curve.mean_curvature, st, psi_radial);
        out.residual = std::max(std::abs(out.measured.meridian - out.predicted.meridian),
                                std::abs(out.measured.latitude - out.predicted.latitude)) /
                       scale;
    });
    for (const auto& s : check.samples) {
        check.max_residual = std::max(check.max_residual, s.residual);
    }
    return check;
}

}  // namespace cmcgap
