#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cmcgap/convexity.hpp"
#include "cmcgap/curvature.hpp"
#include "cmcgap/gap.hpp"
#include "cmcgap/metric.hpp"
#include "cmcgap/profile.hpp"
#include "cmcgap/shooting.hpp"

// Serialization. JSON objects keep insertion order; CSV is comma separated with a
// header row, LF line ends, optional '#' metadata lines first and %.17g numbers.

namespace cmcgap::io {

using Json = nlohmann::ordered_json;

/// {"kind": "gaussian"} or {"kind": "custom", "poly": [c0, c1, ...], "domain_limit": a}.
Json to_json(const ConformalFactor& cf);
/// Throws ConfigError naming the offending field.
ConformalFactor metric_from_json(const Json& j);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
/// 16 hex digits of fnv1a64 over the compact dump of `config`.
std::string config_hash(const Json& config);

/// %.17g
std::string format_double(double v);

/// Writes each key of `meta` as a "# key: value" line.
void write_csv_metadata(std::ostream& os, const Json& meta);

Json to_json(const ProfileCurve& curve);
Json to_json(const ArclengthCurve& curve);
/// Columns param, x, xp_or_theta, z (graph: t, x, x', t; arclength: s, x, theta, z).
void write_csv(std::ostream& os, const ProfileCurve& curve);
void write_csv(std::ostream& os, const ArclengthCurve& curve);

inline constexpr std::string_view kPointGeometryHeader =
    "k1,k2,kbar1,kbar2,mean_curvature,support_euclid,support_conf,sigma,traceless_sq";
std::string csv_row(const PointGeometry& pg);
Json to_json(const PointGeometry& pg);

/// Verdict is "holds" or "fails"; "strict" distinguishes holds_strictly.
Json to_json(const GapReport& report);
/// One row per sample: param, functional, lambda1, lambda2, lhs, rhs, second_ok, pass, equality, sigma_violation.
void write_csv(std::ostream& os, const GapReport& report);

/// Columns s, phi, dphi, d2phi, t.
void write_csv(std::ostream& os, const PhiTable& table);

Json to_json(const numerics::Bracket& b);
/// Includes the bracket history; the curve is summarized (span, sample count).
Json to_json(const ShootingResult& r);
Json to_json(const GapInterval& g);
Json to_json(const TorusResult& r);
Json to_json(const CombinedExample& e);

}  // namespace cmcgap::io
