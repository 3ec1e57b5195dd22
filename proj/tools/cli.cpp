#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmcgap/convexity.hpp"
#include "cmcgap/curvature.hpp"
#include "cmcgap/errors.hpp"
#include "cmcgap/gap.hpp"
#include "cmcgap/io.hpp"
#include "cmcgap/metric.hpp"
#include "cmcgap/profile.hpp"
#include "cmcgap/shooting.hpp"

namespace cmcgap::cli {

namespace {

using io::Json;

// Keys that change where or how results are written, never what is computed.
constexpr const char* kPresentationKeys[] = {"threads", "output", "format"};

struct Binding {
    CLI::Option* option = nullptr;
    std::function<void(Json&)> apply;
};

struct Command {
    CLI::App* app = nullptr;
    std::vector<Binding> bindings;
    std::string config_path;

    void number(const std::string& flag, const std::string& key, const std::string& help) {
        auto v = std::make_shared<double>(0.0);
        bindings.push_back({app->add_option(flag, *v, help), [v, key](Json& c) { c[key] = *v; }});
    }
    void integer(const std::string& flag, const std::string& key, const std::string& help) {
        auto v = std::make_shared<long long>(0);
        bindings.push_back({app->add_option(flag, *v, help), [v, key](Json& c) { c[key] = *v; }});
    }
    void numbers(const std::string& flag, const std::string& key, const std::string& help) {
        auto v = std::make_shared<std::vector<double>>();
        auto* opt = app->add_option(flag, *v, help)->delimiter(',');
        bindings.push_back({opt, [v, key](Json& c) { c[key] = *v; }});
    }
    void text(const std::string& flag, const std::string& key, const std::string& help) {
        auto v = std::make_shared<std::string>();
        bindings.push_back({app->add_option(flag, *v, help), [v, key](Json& c) { c[key] = *v; }});
    }
    void flag(const std::string& flag, const std::string& key, const std::string& help) {
        auto v = std::make_shared<bool>(false);
        bindings.push_back({app->add_flag(flag, *v, help), [v, key](Json& c) { c[key] = *v; }});
    }

    void common() {
        app->add_option("--config", config_path, "JSON config file; command-line flags override it");
        text("--format", "format", "output format: json (default), csv or table");
        text("--output,-o", "output", "write results to this file instead of stdout");
    }

    void metric_flags() {
        auto kind = std::make_shared<std::string>();
        auto poly = std::make_shared<std::vector<double>>();
        auto limit = std::make_shared<double>(0.0);
        auto raw = std::make_shared<std::string>();
        auto* o_raw = app->add_option("--metric-json", *raw,
                                      R"(metric as JSON, e.g. {"kind":"custom","poly":[0,-0.125]})");
        auto* o_kind = app->add_option(
            "--metric", *kind, "conformal factor: euclidean, hyperbolic, spherical, gaussian, custom");
        auto* o_poly = app->add_option("--poly", *poly,
                                       "custom factor u(t) = c0 + c1 t + ..., comma separated")
                           ->delimiter(',');
        auto* o_limit = app->add_option("--domain-limit", *limit,
                                        "custom factor: radius of the ball where it is defined");
        bindings.push_back({nullptr, [=](Json& c) {
                                if (o_raw->count() > 0) {
                                    try {
                                        c["metric"] = Json::parse(*raw);
                                    } catch (const Json::parse_error& e) {
                                        throw ConfigError(std::string("--metric-json: ") + e.what());
                                    }
                                }
                                if (o_kind->count() > 0) {
                                    c["metric"] = Json{{"kind", *kind}};
                                }
                                if (o_poly->count() > 0) {
                                    if (!c.contains("metric")) {
                                        c["metric"] = Json{{"kind", "custom"}};
                                    }
                                    c["metric"]["poly"] = *poly;
                                }
                                if (o_limit->count() > 0) {
                                    c["metric"]["domain_limit"] = *limit;
                                }
                            }});
    }

    void threads() { integer("--threads", "threads", "worker threads (results do not depend on it)"); }
};

// ---- config access -------------------------------------------------------------

double get_number(const Json& c, const char* key, double fallback) {
    if (!c.contains(key)) {
        return fallback;
    }
    if (!c[key].is_number()) {
        throw ConfigError(std::string(key) + ": expected a number");
    }
    const double v = c[key].get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError(std::string(key) + ": must be finite");
    }
    return v;
}

double get_positive(const Json& c, const char* key, double fallback) {
    const double v = get_number(c, key, fallback);
    if (!(v > 0.0)) {
        throw ConfigError(std::string(key) + ": must be positive");
    }
    return v;
}

std::size_t get_count(const Json& c, const char* key, std::size_t fallback, std::size_t min) {
    if (!c.contains(key)) {
        return fallback;
    }
    if (!c[key].is_number_integer() || c[key].get<long long>() < static_cast<long long>(min)) {
        throw ConfigError(std::string(key) + ": expected an integer >= " + std::to_string(min));
    }
    return c[key].get<std::size_t>();
}

bool get_bool(const Json& c, const char* key, bool fallback) {
    if (!c.contains(key)) {
        return fallback;
    }
    if (!c[key].is_boolean()) {
        throw ConfigError(std::string(key) + ": expected true or false");
    }
    return c[key].get<bool>();
}

std::string get_string(const Json& c, const char* key, const std::string& fallback) {
    if (!c.contains(key)) {
        return fallback;
    }
    if (!c[key].is_string()) {
        throw ConfigError(std::string(key) + ": expected a string");
    }
    return c[key].get<std::string>();
}

std::vector<double> get_numbers(const Json& c, const char* key) {
    std::vector<double> out;
    if (!c.contains(key)) {
        return out;
    }
    const Json& v = c[key];
    if (v.is_number()) {
        return {v.get<double>()};
    }
    if (!v.is_array()) {
        throw ConfigError(std::string(key) + ": expected a number or an array of numbers");
    }
    for (const auto& e : v) {
        if (!e.is_number()) {
            throw ConfigError(std::string(key) + ": expected an array of numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

ConformalFactor get_metric(const Json& c) {
    if (!c.contains("metric")) {
        return ConformalFactor::euclidean();
    }
    return io::metric_from_json(c["metric"]);
}

void require_gaussian(const Json& c) {
    if (c.contains("metric") && get_metric(c).kind() != MetricKind::gaussian) {
        throw ConfigError("metric: this command works in the gaussian factor only");
    }
}

unsigned get_threads(const Json& c) {
    return static_cast<unsigned>(get_count(c, "threads", 1, 1));
}

IntegrationOptions get_integration(const Json& c) {
    IntegrationOptions io;
    io.tol = get_positive(c, "tol", io.tol);
    io.slope_cap = get_positive(c, "slope_cap", io.slope_cap);
    io.axis_eps = get_positive(c, "axis_eps", io.axis_eps);
    io.sample_step = get_number(c, "sample_step", io.sample_step);
    if (io.sample_step < 0.0) {
        throw ConfigError("sample_step: must be non-negative");
    }
    return io;
}

// ---- output --------------------------------------------------------------------

struct Output {
    Json meta;
    Json config;
    Json result;
    std::string csv;    // preformatted csv body, if the command has one
    std::string table;  // preformatted human-readable table, if the command has one
    int code = ok;
};

std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows,
             bool nine_digits) {
    auto scalar = [&](const Json& v) -> std::string {
        if (v.is_number_float()) {
            const double d = v.get<double>();
            return nine_digits ? fmt9(d) : io::format_double(d);
        }
        if (v.is_string()) {
            return v.get<std::string>();
        }
        return v.dump();
    };
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            flatten(v, prefix.empty() ? k : prefix + "." + k, rows, nine_digits);
        }
    } else if (j.is_array()) {
        if (j.size() > 8 || (!j.empty() && j.front().is_structured())) {
            rows.emplace_back(prefix, "[" + std::to_string(j.size()) + " entries]");
        } else {
            std::string joined;
            for (const auto& v : j) {
                joined += (joined.empty() ? "" : " ") + scalar(v);
            }
            rows.emplace_back(prefix, "[" + joined + "]");
        }
    } else {
        rows.emplace_back(prefix, scalar(j));
    }
}

void emit(const Output& o, const std::string& format, std::ostream& os) {
    if (format == "json") {
        Json doc;
        doc["meta"] = o.meta;
        doc["config"] = o.config;
        doc["result"] = o.result;
        os << doc.dump(2) << '\n';
        return;
    }
    if (format == "csv") {
        io::write_csv_metadata(os, o.meta);
        if (!o.csv.empty()) {
            os << o.csv;
            return;
        }
        std::vector<std::pair<std::string, std::string>> rows;
        flatten(o.result, "", rows, false);
        os << "key,value\n";
        for (const auto& [k, v] : rows) {
            os << k << ',' << v << '\n';
        }
        return;
    }
    for (const auto& [k, v] : o.meta.items()) {
        os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    os << '\n';
    if (!o.table.empty()) {
        os << o.table;
        return;
    }
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(o.result, "", rows, true);
    std::size_t width = 0;
    for (const auto& r : rows) {
        width = std::max(width, r.first.size());
    }
    for (const auto& [k, v] : rows) {
        os << k << std::string(width + 2 - k.size(), ' ') << v << '\n';
    }
}

// ---- commands --------------------------------------------------------------------

Output metric_info(const Json& c) {
    const ConformalFactor cf = get_metric(c);
    const double r_pos = sigma_positivity_radius(cf);
    std::vector<double> radii = get_numbers(c, "r");
    if (radii.empty()) {
        const std::size_t n = get_count(c, "grid", 11, 2);
        double r_max = 1.0;
        if (std::isfinite(r_pos)) {
            r_max = r_pos;
        }
        if (std::isfinite(cf.domain_limit())) {
            r_max = std::min(r_max, 0.95 * cf.domain_limit());
        }
        for (std::size_t i = 0; i < n; ++i) {
            radii.push_back(r_max * static_cast<double>(i) / static_cast<double>(n - 1));
        }
    }
    for (double r : radii) {
        if (!(r >= 0.0)) {
            throw ConfigError("r: radii must be non-negative");
        }
        if (!cf.in_domain(r * r)) {
            throw ConfigError("r: " + fmt9(r) + " is outside the domain of the conformal factor");
        }
    }

    Output o;
    o.result["metric"] = io::to_json(cf);
    o.result["positivity_radius"] = r_pos;
    o.result["domain_limit"] = cf.domain_limit();
    Json table = Json::array();
    std::ostringstream csv;
    std::ostringstream human;
    csv << "r,u,sigma,distance\n";
    human << "positivity radius: " << fmt9(r_pos) << "\n\n";
    human << "r                u                sigma            distance\n";
    for (double r : radii) {
        const double rho = r * r;
        const double u = cf.u(rho);
        const double s = sigma(cf, rho);
        const double d = conformal_distance(cf, r);
        table.push_back(Json{{"r", r}, {"u", u}, {"sigma", s}, {"distance", d}});
        csv << io::format_double(r) << ',' << io::format_double(u) << ',' << io::format_double(s)
            << ',' << io::format_double(d) << '\n';
        char line[128];
        std::snprintf(line, sizeof line, "%-16.9g %-16.9g %-16.9g %-16.9g\n", r, u, s, d);
        human << line;
    }
    o.result["table"] = std::move(table);
    o.csv = csv.str();
    o.table = human.str();
    return o;
}

ProfileCurve graph_curve(const Json& c, const ConformalFactor& cf) {
    const double x0 = get_number(c, "x0", 1.0);
    const double xp0 = get_number(c, "xp0", 0.0);
    const double H = get_number(c, "H", 0.0);
    const double t_end = get_number(c, "t_end", 2.0);
    if (!(x0 > 0.0)) {
        throw ConfigError("x0: must be positive");
    }
    const IntegrationOptions io = get_integration(c);
    if (get_bool(c, "even", false)) {
        if (xp0 != 0.0) {
            throw ConfigError("even: requires xp0 = 0");
        }
        if (!(t_end > 0.0)) {
            throw ConfigError("t_end: must be positive for a symmetric curve");
        }
        return integrate_even(cf, H, x0, t_end, io);
    }
    return integrate(cf, H, x0, xp0, t_end, io);
}

Output integrate_cmd(const Json& c) {
    const ConformalFactor cf = get_metric(c);
    const std::string mode = get_string(c, "mode", "graph");
    Output o;
    std::ostringstream csv;
    if (mode == "graph") {
        const ProfileCurve curve = graph_curve(c, cf);
        o.result["truncation"] = std::string(to_string(curve.truncation));
        o.result["t_min"] = curve.t_min();
        o.result["t_max"] = curve.t_max();
        const double x0 = get_number(c, "x0", 1.0);
        if (cf.kind() == MetricKind::euclidean && get_number(c, "H", 0.0) == 0.0 &&
            get_number(c, "xp0", 0.0) == 0.0) {
            double err = 0.0;
            for (const auto& s : curve.states) {
                err = std::max(err, std::abs(s.x - x0 * std::cosh(s.t / x0)));
            }
            o.result["self_check"] = Json{{"reference", "x0 cosh(t / x0)"}, {"max_error", err}};
        }
        o.result["curve"] = io::to_json(curve);
        io::write_csv(csv, curve);
        o.code = curve.truncation == Truncation::none ? ok : truncated;
    } else if (mode == "arclength") {
        const double x0 = get_number(c, "x0", 1.0);
        if (!(x0 > 0.0)) {
            throw ConfigError("x0: must be positive");
        }
        const ArcState start = to_arclength(
            GraphState{0.0, x0, get_number(c, "xp0", 0.0)}, 0.0);
        const double max_s = get_positive(c, "max_s", get_positive(c, "t_end", 2.0));
        const ArclengthCurve curve =
            integrate_arclength(cf, get_number(c, "H", 0.0), start, max_s, get_integration(c));
        o.result["truncation"] = std::string(to_string(curve.truncation));
        o.result["s_max"] = curve.states.back().s;
        o.result["curve"] = io::to_json(curve);
        io::write_csv(csv, curve);
        o.code = curve.truncation == Truncation::none ? ok : truncated;
    } else {
        throw ConfigError("mode: expected graph or arclength");
    }
    o.csv = csv.str();
    return o;
}

Output gap_check(const Json& c) {
    const ConformalFactor cf = get_metric(c);
    const ProfileCurve curve = graph_curve(c, cf);
    const GapReport report = scan_gap(curve, get_number(c, "gap_tol", 1e-8), get_threads(c));
    Output o;
    o.result["truncation"] = std::string(to_string(curve.truncation));
    o.result["t_min"] = curve.t_min();
    o.result["t_max"] = curve.t_max();
    o.result["report"] = io::to_json(report);
    std::ostringstream csv;
    io::write_csv(csv, report);
    o.csv = csv.str();
    if (!report.holds()) {
        o.code = gap_violation;
    } else if (curve.truncation != Truncation::none) {
        o.code = truncated;
    }
    return o;
}

Output phi_table(const Json& c) {
    const ConformalFactor cf = get_metric(c);
    const double s_max = get_positive(c, "s_max", 1.0);
    const std::size_t n = get_count(c, "n", 2048, 2);
    const PhiTable table = build_phi(cf, s_max, n);
    Output o;
    o.result["metric"] = io::to_json(cf);
    o.result["s_max"] = s_max;
    o.result["n"] = n;
    o.result["phi_at_s_max"] = table.phi().back();
    o.result["s"] = std::vector<double>(table.s_grid().begin(), table.s_grid().end());
    o.result["phi"] = std::vector<double>(table.phi().begin(), table.phi().end());
    o.result["dphi"] = std::vector<double>(table.dphi().begin(), table.dphi().end());
    std::ostringstream csv;
    io::write_csv(csv, table);
    o.csv = csv.str();
    std::ostringstream human;
    human << "s                phi              dphi\n";
    for (std::size_t i = 0; i < n; ++i) {
        char line[96];
        std::snprintf(line, sizeof line, "%-16.9g %-16.9g %-16.9g\n", table.s_grid()[i],
                      table.phi()[i], table.dphi()[i]);
        human << line;
    }
    o.table = human.str();
    return o;
}

ShootingOptions shooting_options(const Json& c) {
    ShootingOptions so;
    so.tol = get_positive(c, "tol", so.tol);
    return so;
}

Output find_free_boundary(const Json& c) {
    const ConformalFactor cf = get_metric(c);
    const ShootingResult r =
        free_boundary_param(cf, get_number(c, "H", 0.0), get_positive(c, "x0", 1.0),
                            get_number(c, "lo", 0.5), get_number(c, "hi", 2.0), shooting_options(c));
    Output o;
    o.result = io::to_json(r);
    return o;
}

Output find_torus(const Json& c) {
    require_gaussian(c);
    TorusOptions to;
    to.tol = get_positive(c, "tol", to.tol);
    to.max_length = get_positive(c, "max_length", to.max_length);
    const TorusResult r = angenent_waist(get_number(c, "lo", 0.3), get_number(c, "hi", 0.6), to);
    Output o;
    o.result = io::to_json(r);
    const double lo = 7.0 / 16.0 - 3.0 / 98.0;
    const double hi = 7.0 / 16.0 + 3.0 / 98.0;
    o.result["reference_interval"] = Json::array({lo, hi});
    o.result["x1_in_reference_interval"] = r.x1 > lo && r.x1 < hi;
    o.result["x2_beyond_sqrt2"] = r.x2 > std::numbers::sqrt2;
    return o;
}

Output gap_interval_cmd(const Json& c) {
    require_gaussian(c);
    std::vector<double> x0s = get_numbers(c, "x0");
    if (x0s.empty()) {
        x0s = {0.45};
    }
    const auto results = gap_interval_sweep(x0s, get_number(c, "gap_tol", 1e-8), get_threads(c));
    Output o;
    o.result["threshold"] = shrinker_x0_threshold();
    Json arr = Json::array();
    for (const auto& g : results) {
        arr.push_back(io::to_json(g));
    }
    o.result["intervals"] = std::move(arr);
    return o;
}

Output example(const Json& c) {
    require_gaussian(c);
    const CombinedExample e =
        combined_example(get_number(c, "x0", 0.45), get_positive(c, "min_curvature", 1e-6),
                         get_number(c, "gap_tol", 1e-8), get_threads(c));
    Output o;
    o.result = io::to_json(e);
    std::ostringstream csv;
    io::write_csv(csv, e.report);
    o.csv = csv.str();
    if (!e.report.holds()) {
        o.code = gap_violation;
    }
    return o;
}

Json tolerances(const Json& c) {
    Json t = Json::object();
    for (const char* key : {"tol", "gap_tol", "min_curvature"}) {
        if (c.contains(key)) {
            t[key] = c[key];
        }
    }
    return t;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Conformal CMC rotation surfaces: profiles, gap condition, convexity potential "
                 "and shooting searches"};
    app.set_version_flag("--version", std::string("cmcgap ") + CMCGAP_VERSION);
    app.require_subcommand(1);

    struct Entry {
        Command cmd;
        std::function<Output(const Json&)> fn;
    };
    std::vector<std::unique_ptr<Entry>> entries;
    auto add = [&](const char* name, const char* help, std::function<Output(const Json&)> fn) -> Command& {
        auto e = std::make_unique<Entry>();
        e->cmd.app = app.add_subcommand(name, help);
        e->fn = std::move(fn);
        e->cmd.common();
        entries.push_back(std::move(e));
        return entries.back()->cmd;
    };
    auto curve_flags = [](Command& c) {
        c.metric_flags();
        c.number("--x0", "x0", "profile radius at t = 0 (default 1)");
        c.number("--xp0", "xp0", "profile slope at t = 0 (default 0)");
        c.number("--H", "H", "conformal mean curvature (default 0)");
        c.number("--t-end", "t_end", "end of the integration span (default 2)");
        c.number("--tol", "tol", "integrator tolerance (default 1e-10)");
        c.flag("--even", "even", "integrate t >= 0 and mirror (requires xp0 = 0)");
        c.number("--sample-step", "sample_step", "extra output samples every step (default none)");
        c.number("--slope-cap", "slope_cap", "truncate when |x'| exceeds this (default 1e6)");
        c.number("--axis-eps", "axis_eps", "truncate when x drops to this (default 1e-4)");
    };

    {
        Command& c = add("metric-info", "sigma positivity radius and sigma / distance tables",
                         metric_info);
        c.metric_flags();
        c.numbers("--r", "r", "radii to tabulate (comma separated); default is a grid");
        c.integer("--grid", "grid", "number of grid radii when --r is absent (default 11)");
    }
    {
        Command& c = add("integrate", "integrate a profile curve; exit 3 when truncated", integrate_cmd);
        curve_flags(c);
        c.text("--mode", "mode", "graph (default) or arclength");
        c.number("--max-s", "max_s", "arclength mode: length to integrate (default t-end)");
    }
    {
        Command& c = add("gap-check", "evaluate the gap condition along a profile; exit 4 on failure",
                         gap_check);
        curve_flags(c);
        c.number("--gap-tol", "gap_tol", "slack in lhs <= rhs (default 1e-8)");
        c.threads();
    }
    {
        Command& c = add("phi-table", "tabulate the convexity potential Phi", phi_table);
        c.metric_flags();
        c.number("--s-max", "s_max", "upper end of the table (default 1)");
        c.integer("--n", "n", "grid points (default 2048)");
    }
    {
        Command& c = add("find-free-boundary",
                         "solve x(d) = x'(d) d for a symmetric profile; exit 5 without a root",
                         find_free_boundary);
        c.metric_flags();
        c.number("--x0", "x0", "profile radius at t = 0 (default 1)");
        c.number("--H", "H", "conformal mean curvature (default 0)");
        c.number("--lo", "lo", "search interval start (default 0.5)");
        c.number("--hi", "hi", "search interval end (default 2)");
        c.number("--tol", "tol", "bracket width (default 1e-12)");
    }
    {
        Command& c = add("find-torus", "closed shrinker profile by shooting in the waist radius",
                         find_torus);
        c.metric_flags();
        c.number("--lo", "lo", "waist bracket start (default 0.3)");
        c.number("--hi", "hi", "waist bracket end (default 0.6)");
        c.number("--tol", "tol", "bracket width (default 1e-12)");
        c.number("--max-length", "max_length", "arclength budget per shot (default 20)");
    }
    {
        Command& c = add("gap-interval", "symmetric interval where the shrinker gap condition holds",
                         gap_interval_cmd);
        c.metric_flags();
        c.numbers("--x0", "x0", "one or more x0 values, comma separated (default 0.45)");
        c.number("--gap-tol", "gap_tol", "slack in |F| <= 1 (default 1e-8)");
        c.threads();
    }
    {
        Command& c = add("example", "shrinker cut at xi = min(delta, epsilon) with its gap report",
                         example);
        c.metric_flags();
        c.number("--x0", "x0", "profile radius at t = 0 (default 0.45)");
        c.number("--min-curvature", "min_curvature", "boundary convexity threshold (default 1e-6)");
        c.number("--gap-tol", "gap_tol", "slack in lhs <= rhs (default 1e-8)");
        c.threads();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : config_error;
    }

    for (const auto& entry : entries) {
        if (!entry->cmd.app->parsed()) {
            continue;
        }
        const Command& cmd = entry->cmd;
        try {
            Json config = Json::object();
            if (!cmd.config_path.empty()) {
                std::ifstream in(cmd.config_path);
                if (!in) {
                    throw ConfigError("--config: cannot open " + cmd.config_path);
                }
                try {
                    config = Json::parse(in);
                } catch (const Json::parse_error& e) {
                    throw ConfigError("--config: " + std::string(e.what()));
                }
                if (!config.is_object()) {
                    throw ConfigError("--config: expected a JSON object");
                }
            }
            for (const auto& b : cmd.bindings) {
                if (b.option == nullptr || b.option->count() > 0) {
                    b.apply(config);
                }
            }
            const std::string format = get_string(config, "format", "json");
            if (format != "json" && format != "csv" && format != "table") {
                throw ConfigError("format: expected json, csv or table");
            }
            const std::string output = get_string(config, "output", "");

            Json echoed = config;
            for (const char* key : kPresentationKeys) {
                echoed.erase(key);
            }
            if (echoed.contains("metric")) {
                echoed["metric"] = io::to_json(get_metric(echoed));
            }

            Output result = entry->fn(config);
            result.config = echoed;
            result.meta["tool"] = "cmcgap";
            result.meta["version"] = CMCGAP_VERSION;
            result.meta["command"] = cmd.app->get_name();
            result.meta["config_hash"] = io::config_hash(echoed);
            result.meta["tolerances"] = tolerances(config);

            if (output.empty()) {
                emit(result, format, out);
            } else {
                std::ofstream file(output);
                if (!file) {
                    throw ConfigError("output: cannot write " + output);
                }
                emit(result, format, file);
            }
            if (result.code == truncated) {
                err << "integration truncated: " << result.result.value("truncation", "") << '\n';
            }
            return result.code;
        } catch (const ConfigError& e) {
            err << "config error: " << e.what() << '\n';
            return config_error;
        } catch (const PreconditionError& e) {
            err << "config error: " << e.what() << '\n';
            return config_error;
        } catch (const DomainError& e) {
            err << "config error: " << e.what() << '\n';
            return config_error;
        } catch (const NoRootError& e) {
            err << "no root: " << e.what() << '\n';
            return no_root;
        } catch (const SingularAxisError& e) {
            err << "integration truncated: " << e.what() << '\n';
            return truncated;
        } catch (const ToleranceError& e) {
            err << "integration failed: " << e.what() << '\n';
            return truncated;
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return failure;
        }
    }
    return failure;
}

}  // namespace cmcgap::cli
