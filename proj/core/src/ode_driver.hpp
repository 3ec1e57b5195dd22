#pragma once

// Dense-output Dormand-Prince driver with guard (stop) functions, shared by the
// graph and arclength integrators.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "cmcgap/errors.hpp"

namespace cmcgap::detail {

namespace odeint = boost::numeric::odeint;

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
struct Guard {
    std::function<double(double, const Vec<N>&)> fn;  // > 0 while the state is acceptable
    int reason = 0;
};

template <std::size_t N>
struct DenseRun {
    std::vector<double> ts;
    std::vector<Vec<N>> ys;
    int stop_reason = 0;  // 0: reached t_end, otherwise the guard's reason
};

struct DriverOptions {
    double tol = 1e-10;
    double sample_step = 0.0;
    double max_step = 0.0;
    std::size_t max_steps = 2'000'000;
};

/// Integrates y' = rhs(t, y) from t0 to t1, recording every accepted step and the
/// optional uniform samples. The first guard that turns non-positive terminates
/// the run at the bisected crossing (last state kept on the acceptable side).
template <std::size_t N, class Rhs>
DenseRun<N> run_dense(Rhs rhs, const Vec<N>& y0, double t0, double t1,
                      const DriverOptions& opt, const std::vector<Guard<N>>& guards) {
    using stepper_t = odeint::runge_kutta_dopri5<Vec<N>>;
    const double span = std::abs(t1 - t0);
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double max_dt = opt.max_step > 0.0 ? opt.max_step : span / 16.0;

    DenseRun<N> out;
    out.ts.push_back(t0);
    out.ys.push_back(y0);
    if (span == 0.0) {
        return out;
    }

    // Integrate in tau = dir (t - t0) >= 0: odeint's step limiter returns a positive
    // max_dt even when stepping backwards.
    auto to_t = [=](double tau) { return t0 + dir * tau; };
    auto system = [&](const Vec<N>& y, Vec<N>& dy, double tau) {
        dy = rhs(to_t(tau), y);
        for (auto& v : dy) {
            v *= dir;
        }
    };
    auto dense = odeint::make_dense_output(opt.tol, opt.tol, max_dt, stepper_t());
    dense.initialize(y0, 0.0, std::min(1e-3, span));

    std::size_t sample_index = 1;
    double next_sample = opt.sample_step;
    std::size_t steps = 0;
    Vec<N> tmp{};
    double last_tau = 0.0;

    auto fires = [&](double tau, const Vec<N>& y) -> const Guard<N>* {
        for (const auto& g : guards) {
            if (!(g.fn(to_t(tau), y) > 0.0)) {
                return &g;
            }
        }
        return nullptr;
    };
    auto record = [&](double tau, const Vec<N>& y) {
        out.ts.push_back(to_t(tau));
        out.ys.push_back(y);
        last_tau = tau;
    };

    while (true) {
        std::pair<double, double> interval;
        try {
            interval = dense.do_step(system);
        } catch (const odeint::odeint_error& e) {
            throw ToleranceError(std::string("integrator failed: ") + e.what());
        }
        if (++steps > opt.max_steps) {
            throw ToleranceError("integrator exceeded the maximum number of steps");
        }
        const double tau_old = interval.first;
        const double tau_new = interval.second;
        const bool reached_end = tau_new >= span;
        const double tau_hi = reached_end ? span : tau_new;

        Vec<N> y_hi{};
        if (reached_end) {
            dense.calc_state(span, y_hi);
        } else {
            y_hi = dense.current_state();
        }
        for (const auto& v : y_hi) {
            if (!std::isfinite(v)) {
                throw ToleranceError("integrator produced a non-finite state");
            }
        }

        double tau_stop = tau_hi;
        const Guard<N>* fired = fires(tau_hi, y_hi);
        if (fired != nullptr) {
            // Bisect the guard crossing inside [tau_old, tau_hi] on the dense output.
            double a = tau_old;
            double b = tau_hi;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                if (m == a || m == b) {
                    break;
                }
                dense.calc_state(m, tmp);
                (fired->fn(to_t(m), tmp) > 0.0 ? a : b) = m;
            }
            tau_stop = a;
        }

        // Uniform samples strictly before the step end.
        if (opt.sample_step > 0.0) {
            while (next_sample < tau_stop) {
                if (next_sample > last_tau) {
                    dense.calc_state(next_sample, tmp);
                    record(next_sample, tmp);
                }
                next_sample = static_cast<double>(++sample_index) * opt.sample_step;
            }
        }

        if (fired != nullptr) {
            if (tau_stop > last_tau) {
                dense.calc_state(tau_stop, tmp);
                record(tau_stop, tmp);
            }
            out.stop_reason = fired->reason;
            return out;
        }
        if (reached_end) {
            out.ts.push_back(t1);
            out.ys.push_back(y_hi);
            return out;
        }
        record(tau_hi, y_hi);
    }
}

/// Fixed-endpoint controlled integration (no dense output, no guards). Throws
/// ToleranceError after max_steps attempts, e.g. when approaching a blow-up.
template <std::size_t N, class Rhs>
Vec<N> run_to(Rhs rhs, Vec<N> y, double t0, double t1, double tol,
              std::size_t max_steps = 1'000'000) {
    if (t0 == t1) {
        return y;
    }
    using stepper_t = odeint::runge_kutta_dopri5<Vec<N>>;
    auto system = [&rhs](const Vec<N>& s, Vec<N>& ds, double t) { ds = rhs(t, s); };
    auto controlled = odeint::make_controlled(tol, tol, stepper_t());
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    double dt = dir * std::min(1e-3, std::abs(t1 - t0));
    for (std::size_t attempt = 0; attempt < max_steps; ++attempt) {
        if (dir * (t + dt - t1) > 0.0) {
            dt = t1 - t;
        }
        odeint::controlled_step_result res;
        try {
            res = controlled.try_step(system, y, t, dt);
        } catch (const odeint::odeint_error& e) {
            throw ToleranceError(std::string("integrator failed: ") + e.what());
        }
        if (res == odeint::success) {
            for (const auto& v : y) {
                if (!std::isfinite(v)) {
                    throw ToleranceError("integrator produced a non-finite state");
                }
            }
            if (dir * (t - t1) >= 0.0 || t == t1) {
                return y;
            }
        }
    }
    throw ToleranceError("integrator exceeded the maximum number of steps");
}

}  // namespace cmcgap::detail
