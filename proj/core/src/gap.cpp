#include "cmcgap/gap.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cmcgap/errors.hpp"
#include "parallel.hpp"

namespace cmcgap {

namespace {

void require_positive_sigma(double sigma) {
    if (!(sigma > 0.0)) {
        std::ostringstream msg;
        msg << "potential sigma = " << sigma << " is not positive";
        throw DomainError(msg.str(), sigma);
    }
}

}  // namespace

HessianFactors hessian_eigen_factors(const PointGeometry& pg) {
    require_positive_sigma(pg.sigma);
    const double ratio = pg.support_conf / pg.sigma;
    return {1.0 + pg.kbar1 * ratio, 1.0 + pg.kbar2 * ratio};
}

GapCondition gap_condition(const PointGeometry& pg) {
    require_positive_sigma(pg.sigma);
    const double ratio = pg.support_conf / pg.sigma;
    const double linear = 2.0 + pg.mean_curvature * ratio;
    return {pg.traceless_sq * ratio * ratio, 0.5 * linear * linear, linear >= 0.0};
}

double gaussian_gap_functional(const GraphState& state) {
    if (!(state.x > 0.0)) {
        throw SingularAxisError("profile radius x must be positive");
    }
    const double rho = state.x * state.x + state.t * state.t;
    if (!(rho < 4.0)) {
        throw DomainError("gap functional needs x^2 + t^2 < 4 (sigma > 0)", std::sqrt(rho));
    }
    const double b = state.x - state.xp * state.t;
    return (4.0 - state.x * b) * b / (state.x * (4.0 - rho) * (1.0 + state.xp * state.xp));
}

double general_gap_functional(const ConformalFactor& cf, const GraphState& state) {
    if (!(state.x > 0.0)) {
        throw SingularAxisError("profile radius x must be positive");
    }
    const double rho = state.x * state.x + state.t * state.t;
    cf.require_domain(rho);
    const double du = cf.du(rho);
    const double sigma = 1.0 + 2.0 * du * rho;
    require_positive_sigma(sigma);
    const double b = state.x - state.xp * state.t;
    return (1.0 + 2.0 * du * b * state.x) * b /
           (sigma * state.x * (1.0 + state.xp * state.xp));
}

std::string_view to_string(GapVerdict verdict) {
    switch (verdict) {
        case GapVerdict::holds_strictly: return "holds_strictly";
        case GapVerdict::holds_with_equality: return "holds_with_equality";
        case GapVerdict::fails: return "fails";
    }
    return "fails";
}

GapReport scan_gap(const ProfileCurve& curve, double tolerance, unsigned threads) {
    if (curve.states.size() < 2) {
        throw PreconditionError(
            "degenerate profile: the gap scan needs a curve with at least two states");
    }
    const auto& cf = curve.metric;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    GapReport report;
    report.samples.resize(curve.states.size());
    detail::parallel_for(curve.states.size(), threads, [&](std::size_t i) {
        const GraphState& st = curve.states[i];
        GapSample& out = report.samples[i];
        out.param = st.t;
        const double rho = st.x * st.x + st.t * st.t;
        if (!cf.in_domain(rho) || !(sigma(cf, rho) > 0.0)) {
            out.sigma_violation = true;
            out.functional = out.lambda1 = out.lambda2 = out.lhs = out.rhs = nan;
            return;
        }
        const PointGeometry pg = conformal_curvatures(cf, st, curve.xpp(i));
        const auto lam = hessian_eigen_factors(pg);
        const auto cond = gap_condition(pg);
        out.functional = general_gap_functional(cf, st);
        out.lambda1 = lam.lambda1;
        out.lambda2 = lam.lambda2;
        out.lhs = cond.lhs;
        out.rhs = cond.rhs;
        out.second_ok = cond.second_ok;
        const double scale = std::max(1.0, cond.rhs);
        out.pass = cond.second_ok && cond.lhs <= cond.rhs + tolerance * scale;
        out.equality = out.pass && std::abs(cond.lhs - cond.rhs) <=
                                       std::max(tolerance, kEqualityTolerance) * scale;
    });

    for (const auto& s : report.samples) {
        if (!s.pass) {
            report.fails_at.push_back(s.param);
        } else if (s.equality) {
            report.equality_at.push_back(s.param);
        }
    }
    if (!report.fails_at.empty()) {
        report.verdict = GapVerdict::fails;
    } else if (!report.equality_at.empty()) {
        report.verdict = GapVerdict::holds_with_equality;
    } else {
        report.verdict = GapVerdict::holds_strictly;
    }
    return report;
}

}  // namespace cmcgap
