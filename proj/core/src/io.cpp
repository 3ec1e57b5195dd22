#include "cmcgap/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cmcgap/errors.hpp"

namespace cmcgap::io {

Json to_json(const ConformalFactor& cf) {
    Json j;
    j["kind"] = std::string(to_string(cf.kind()));
    if (cf.kind() == MetricKind::custom) {
        j["poly"] = cf.coefficients();
        if (std::isfinite(cf.domain_limit())) {
            j["domain_limit"] = cf.domain_limit();
        }
    }
    return j;
}

ConformalFactor metric_from_json(const Json& j) {
    if (!j.is_object()) {
        throw ConfigError("metric: expected a JSON object");
    }
    if (!j.contains("kind") || !j["kind"].is_string()) {
        throw ConfigError("metric.kind: missing or not a string");
    }
    const MetricKind kind = metric_kind_from_string(j["kind"].get<std::string>());
    if (kind != MetricKind::custom) {
        if (j.contains("poly")) {
            throw ConfigError("metric.poly: only allowed with kind \"custom\"");
        }
        return ConformalFactor::builtin(kind);
    }
    if (!j.contains("poly") || !j["poly"].is_array() || j["poly"].empty()) {
        throw ConfigError("metric.poly: custom metric needs a non-empty coefficient array");
    }
    std::vector<double> coeffs;
    for (const auto& c : j["poly"]) {
        if (!c.is_number()) {
            throw ConfigError("metric.poly: coefficients must be numbers");
        }
        coeffs.push_back(c.get<double>());
    }
    double limit = std::numeric_limits<double>::infinity();
    if (j.contains("domain_limit")) {
        if (!j["domain_limit"].is_number() || !(j["domain_limit"].get<double>() > 0.0)) {
            throw ConfigError("metric.domain_limit: must be a positive number");
        }
        limit = j["domain_limit"].get<double>();
    }
    try {
        return ConformalFactor::polynomial(std::move(coeffs), limit);
    } catch (const Error& e) {
        throw ConfigError(std::string("metric.poly: ") + e.what());
    }
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const Json& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(config.dump()));
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv_metadata(std::ostream& os, const Json& meta) {
    for (const auto& [key, value] : meta.items()) {
        os << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
           << '\n';
    }
}

Json to_json(const ProfileCurve& curve) {
    Json j;
    j["metric"] = to_json(curve.metric);
    j["mean_curvature"] = curve.mean_curvature;
    j["tol"] = curve.tol;
    j["truncation"] = std::string(to_string(curve.truncation));
    Json t = Json::array(), x = Json::array(), xp = Json::array();
    for (const auto& s : curve.states) {
        t.push_back(s.t);
        x.push_back(s.x);
        xp.push_back(s.xp);
    }
    j["t"] = std::move(t);
    j["x"] = std::move(x);
    j["xp"] = std::move(xp);
    return j;
}

Json to_json(const ArclengthCurve& curve) {
    Json j;
    j["metric"] = to_json(curve.metric);
    j["mean_curvature"] = curve.mean_curvature;
    j["tol"] = curve.tol;
    j["truncation"] = std::string(to_string(curve.truncation));
    Json s = Json::array(), x = Json::array(), z = Json::array(), th = Json::array();
    for (const auto& st : curve.states) {
        s.push_back(st.s);
        x.push_back(st.x);
        z.push_back(st.z);
        th.push_back(st.theta);
    }
    j["s"] = std::move(s);
    j["x"] = std::move(x);
    j["z"] = std::move(z);
    j["theta"] = std::move(th);
    return j;
}

void write_csv(std::ostream& os, const ProfileCurve& curve) {
    os << "param,x,xp_or_theta,z\n";
    for (const auto& s : curve.states) {
        os << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.xp) << ','
           << format_double(s.t) << '\n';
    }
}

void write_csv(std::ostream& os, const ArclengthCurve& curve) {
    os << "param,x,xp_or_theta,z\n";
    for (const auto& s : curve.states) {
        os << format_double(s.s) << ',' << format_double(s.x) << ',' << format_double(s.theta)
           << ',' << format_double(s.z) << '\n';
    }
}

std::string csv_row(const PointGeometry& pg) {
    std::string row;
    for (double v : {pg.k1, pg.k2, pg.kbar1, pg.kbar2, pg.mean_curvature, pg.support_euclid,
                     pg.support_conf, pg.sigma, pg.traceless_sq}) {
        if (!row.empty()) {
            row += ',';
        }
        row += format_double(v);
    }
    return row;
}

Json to_json(const PointGeometry& pg) {
    return Json{{"k1", pg.k1},
                {"k2", pg.k2},
                {"kbar1", pg.kbar1},
                {"kbar2", pg.kbar2},
                {"mean_curvature", pg.mean_curvature},
                {"support_euclid", pg.support_euclid},
                {"support_conf", pg.support_conf},
                {"sigma", pg.sigma},
                {"traceless_sq", pg.traceless_sq}};
}

Json to_json(const GapReport& report) {
    Json j;
    j["verdict"] = report.holds() ? "holds" : "fails";
    j["strict"] = report.verdict == GapVerdict::holds_strictly;
    j["detail"] = std::string(to_string(report.verdict));
    j["samples"] = report.samples.size();
    std::size_t sigma_violations = 0;
    for (const auto& s : report.samples) {
        sigma_violations += s.sigma_violation ? 1 : 0;
    }
    j["sigma_violations"] = sigma_violations;
    j["equality_at"] = report.equality_at;
    j["fails_at"] = report.fails_at;
    return j;
}

void write_csv(std::ostream& os, const GapReport& report) {
    os << "param,functional,lambda1,lambda2,lhs,rhs,second_ok,pass,equality,sigma_violation\n";
    for (const auto& s : report.samples) {
        os << format_double(s.param) << ',' << format_double(s.functional) << ','
           << format_double(s.lambda1) << ',' << format_double(s.lambda2) << ','
           << format_double(s.lhs) << ',' << format_double(s.rhs) << ',' << int(s.second_ok)
           << ',' << int(s.pass) << ',' << int(s.equality) << ',' << int(s.sigma_violation)
           << '\n';
    }
}

void write_csv(std::ostream& os, const PhiTable& table) {
    os << "s,phi,dphi,d2phi,t\n";
    const auto s = table.s_grid();
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << format_double(s[i]) << ',' << format_double(table.phi()[i]) << ','
           << format_double(table.dphi()[i]) << ',' << format_double(table.d2phi()[i]) << ','
           << format_double(table.t_grid()[i]) << '\n';
    }
}

Json to_json(const numerics::Bracket& b) {
    return Json{{"lo", b.lo}, {"hi", b.hi}, {"f_lo", b.f_lo}, {"f_hi", b.f_hi}};
}

namespace {

Json history_json(const std::vector<numerics::Bracket>& history) {
    Json h = Json::array();
    for (const auto& b : history) {
        h.push_back(to_json(b));
    }
    return h;
}

Json curve_summary(const ProfileCurve& curve) {
    Json j;
    j["samples"] = curve.states.size();
    if (!curve.empty()) {
        j["t_min"] = curve.t_min();
        j["t_max"] = curve.t_max();
    }
    j["truncation"] = std::string(to_string(curve.truncation));
    return j;
}

}  // namespace

Json to_json(const ShootingResult& r) {
    Json j;
    j["parameter"] = r.parameter;
    j["residual"] = r.residual;
    j["radius"] = r.radius;
    j["bracket"] = to_json(r.bracket);
    j["evaluations"] = r.evaluations;
    j["history"] = history_json(r.history);
    j["curve"] = curve_summary(r.curve);
    return j;
}

Json to_json(const GapInterval& g) {
    return Json{{"x0", g.x0},
                {"epsilon", g.epsilon},
                {"functional_at_end", g.functional_at_end},
                {"end", std::string(to_string(g.end))},
                {"truncation", std::string(to_string(g.truncation))}};
}

Json to_json(const TorusResult& r) {
    Json j;
    j["x1"] = r.x1;
    j["x2"] = r.x2;
    j["residual"] = r.residual;
    j["bracket"] = to_json(r.bracket);
    j["evaluations"] = r.evaluations;
    j["history"] = history_json(r.history);
    j["curve_samples"] = r.curve.states.size();
    return j;
}

Json to_json(const CombinedExample& e) {
    Json j;
    j["x0"] = e.x0;
    j["delta"] = e.delta;
    j["epsilon"] = e.epsilon;
    j["xi"] = e.xi;
    j["r"] = e.radius;
    j["boundary_curvature"] = e.boundary_curvature;
    j["gap"] = to_json(e.report);
    j["convex_search"] = to_json(e.convex);
    j["gap_interval"] = to_json(e.gap);
    return j;
}

}  // namespace cmcgap::io
