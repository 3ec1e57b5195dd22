#include "cmcgap/curvature.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

#include "cmcgap/errors.hpp"

namespace cmcgap {

namespace {

void require_positive_x(double x) {
    if (!(x > 0.0)) {
        throw SingularAxisError("profile radius x must be positive");
    }
}

}  // namespace

std::pair<double, double> euclidean_curvatures(const GraphState& state, double xpp) {
    require_positive_x(state.x);
    const double q = 1.0 + state.xp * state.xp;
    const double sq = std::sqrt(q);
    return {-xpp / (q * sq), 1.0 / (state.x * sq)};
}

PointGeometry conformal_curvatures(const ConformalFactor& cf, const GraphState& state, double xpp) {
    require_positive_x(state.x);
    const double rho = state.x * state.x + state.t * state.t;
    cf.require_domain(rho);

    PointGeometry pg;
    std::tie(pg.k1, pg.k2) = euclidean_curvatures(state, xpp);
    const double u = cf.u(rho);
    const double du = cf.du(rho);
    const double e_minus = std::exp(-u);
    pg.support_euclid = -(state.x - state.xp * state.t) / std::sqrt(1.0 + state.xp * state.xp);
    pg.support_conf = std::exp(u) * pg.support_euclid;
    pg.kbar1 = e_minus * (pg.k1 - 2.0 * du * pg.support_euclid);
    pg.kbar2 = e_minus * (pg.k2 - 2.0 * du * pg.support_euclid);
    pg.mean_curvature = pg.kbar1 + pg.kbar2;
    pg.sigma = 1.0 + 2.0 * du * rho;
    const double diff = pg.kbar1 - pg.kbar2;
    pg.traceless_sq = 0.5 * diff * diff;
    return pg;
}

double boundary_geodesic_curvature(const ConformalFactor& cf, double r) {
    const double r_pos = sigma_positivity_radius(cf);
    if (!(r > 0.0) || !(r < r_pos)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "boundary radius " << r << " outside (0, " << r_pos
            << "), where sigma is positive";
        throw DomainError(msg.str(), r);
    }
    const double t = r * r;
    return sigma(cf, t) / (std::exp(cf.u(t)) * r);
}

double latitude_geodesic_curvature(const ConformalFactor& cf, const GraphState& state) {
    require_positive_x(state.x);
    const double rho = state.x * state.x + state.t * state.t;
    cf.require_domain(rho);
    const double sq = std::sqrt(1.0 + state.xp * state.xp);
    const double f = state.xp / (state.x * sq);
    const double normal_derivative = -2.0 * cf.du(rho) * (state.x * state.xp + state.t) / sq;
    return std::exp(-cf.u(rho)) * (f - normal_derivative);
}

}  // namespace cmcgap
