#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fuzzyeval/errors.hpp"
#include "fuzzyeval/metrics/report.hpp"
#include "fuzzyeval/reference_rubric_data.hpp"

namespace fuzzyeval::normalizer {

enum class ScaleShape { higher_better, lower_better, band };

inline std::string_view to_string(ScaleShape s) {
  switch (s) {
    case ScaleShape::higher_better:
      return "higher-better";
    case ScaleShape::lower_better:
      return "lower-better";
    case ScaleShape::band:
      return "band";
  }
  return "";
}

/// Piecewise-linear map from one raw metric to a sub-score in [0,1].
///
/// higher-better with k thresholds reaches level i/(k-1) at threshold i;
/// lower-better is its mirror image. band rises on [t0,t1], is 1 on [t1,t2]
/// and falls on [t2,t3].
struct ScoringScale {
  std::string metric;
  ScaleShape shape = ScaleShape::higher_better;
  std::vector<double> breakpoints;
  double points = 1.0;

  double sub_score(double v) const {
    const auto& t = breakpoints;
    if (shape == ScaleShape::band) {
      if (v <= t[0] || v >= t[3]) return 0.0;
      if (v < t[1]) return (v - t[0]) / (t[1] - t[0]);
      if (v <= t[2]) return 1.0;
      return (t[3] - v) / (t[3] - t[2]);
    }
    double up = 0.0;
    const std::size_t k = t.size();
    if (v >= t[k - 1]) {
      up = 1.0;
    } else if (v > t[0]) {
      std::size_t i = 0;
      while (v > t[i + 1]) ++i;
      const double lo = static_cast<double>(i) / static_cast<double>(k - 1);
      const double frac = (v - t[i]) / (t[i + 1] - t[i]);
      up = lo + frac / static_cast<double>(k - 1);
    }
    return shape == ScaleShape::higher_better ? up : 1.0 - up;
  }

  bool operator==(const ScoringScale&) const = default;
};

struct CriterionProfile {
  std::string criterion;
  std::vector<ScoringScale> scales;

  bool operator==(const CriterionProfile&) const = default;
};

/// Metrics each built-in criterion may draw on. Criteria outside this table
/// may use any metric.
inline const std::vector<std::string_view>* column_metrics(std::string_view criterion) {
  static const std::vector<std::string_view> clean{
      "total_lines",          "comment_lines",         "comment_ratio",
      "avg_fields_per_class", "avg_params_per_method", "class_count",
      "avg_methods_per_class", "avg_lines_per_method", "serialization_use_count"};
  static const std::vector<std::string_view> functionality{
      "collections_use_count",       "own_interface_count", "builtin_interface_impl_count",
      "interface_use_count",         "own_exception_count", "builtin_exception_use_count",
      "exception_use_count",         "comparator_use_count", "stream_use_count"};
  static const std::vector<std::string_view> inheritance{"override_count", "overload_group_count",
                                                         "override_overload_count", "inherited_class_count"};
  if (criterion == "clean_code") return &clean;
  if (criterion == "functionality") return &functionality;
  if (criterion == "inheritance") return &inheritance;
  return nullptr;
}

/// Throws ConfigError (path relative to `base`) when a scale or profile breaks its invariants.
inline void validate(const ScoringScale& s, const std::string& base = {}) {
  const auto n = s.breakpoints.size();
  if (n < 2 || n > 4) throw ConfigError("scale needs 2 to 4 breakpoints", base + "/breakpoints");
  if (s.shape == ScaleShape::band && n != 4) throw ConfigError("band scale needs exactly 4 breakpoints", base + "/breakpoints");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(s.breakpoints[i - 1] < s.breakpoints[i])) {
      throw ConfigError("breakpoints must be strictly increasing", base + "/breakpoints");
    }
  }
  if (!(s.points >= 0.0)) throw ConfigError("points must be >= 0", base + "/points");
}

inline void validate(const CriterionProfile& p, const std::string& base = {}) {
  if (p.scales.empty()) throw ConfigError("profile has no scales", base + "/scales");
  double total = 0.0;
  const auto* allowed = column_metrics(p.criterion);
  for (std::size_t i = 0; i < p.scales.size(); ++i) {
    const auto& s = p.scales[i];
    const std::string where = base + "/scales/" + std::to_string(i);
    validate(s, where);
    if (allowed && std::find(allowed->begin(), allowed->end(), s.metric) == allowed->end()) {
      throw ConfigError("metric '" + s.metric + "' does not belong to criterion '" + p.criterion + "'", where + "/metric");
    }
    total += s.points;
  }
  if (!(total > 0.0)) throw ConfigError("total points must be > 0", base + "/scales");
}

/// Criterion score on [0,100]: 100 * sum(points * sub) / sum(points).
/// Metrics the report does not know are read as 0 and noted in `warnings`.
inline double score_criterion(const metrics::MetricsReport& report, const CriterionProfile& profile,
                              std::vector<std::string>* warnings = nullptr) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& s : profile.scales) {
    auto raw = metrics::metric_value(report, s.metric);
    if (!raw) {
      if (warnings) warnings->push_back("unknown metric '" + s.metric + "' read as 0");
      raw = 0.0;
    }
    num += s.points * s.sub_score(*raw);
    den += s.points;
  }
  if (den <= 0.0) return 0.0;
  return std::clamp(100.0 * num / den, 0.0, 100.0);
}

// --- serialization ---------------------------------------------------------

inline ScaleShape parse_shape(const std::string& s, const std::string& path) {
  if (s == "higher-better") return ScaleShape::higher_better;
  if (s == "lower-better") return ScaleShape::lower_better;
  if (s == "band") return ScaleShape::band;
  throw ConfigError("unknown scale shape '" + s + "'", path);
}

inline std::vector<CriterionProfile> parse_profiles(const nlohmann::json& j, const std::string& base = "/profiles") {
  if (!j.is_array()) throw ConfigError("expected an array of profiles", base);
  std::vector<CriterionProfile> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = base + "/" + std::to_string(i);
    const auto& pj = j[i];
    if (!pj.is_object() || !pj.contains("criterion") || !pj["criterion"].is_string()) {
      throw ConfigError("profile needs a string 'criterion'", where);
    }
    CriterionProfile p;
    p.criterion = pj["criterion"].get<std::string>();
    if (!pj.contains("scales") || !pj["scales"].is_array()) throw ConfigError("profile needs a 'scales' array", where);
    for (std::size_t k = 0; k < pj["scales"].size(); ++k) {
      const auto& sj = pj["scales"][k];
      const std::string sw = where + "/scales/" + std::to_string(k);
      if (!sj.is_object()) throw ConfigError("scale must be an object", sw);
      ScoringScale s;
      if (!sj.contains("metric") || !sj["metric"].is_string()) throw ConfigError("scale needs a string 'metric'", sw);
      s.metric = sj["metric"].get<std::string>();
      if (!sj.contains("shape") || !sj["shape"].is_string()) throw ConfigError("scale needs a string 'shape'", sw);
      s.shape = parse_shape(sj["shape"].get<std::string>(), sw + "/shape");
      if (!sj.contains("breakpoints") || !sj["breakpoints"].is_array()) {
        throw ConfigError("scale needs a 'breakpoints' array", sw);
      }
      for (const auto& b : sj["breakpoints"]) {
        if (!b.is_number()) throw ConfigError("breakpoints must be numbers", sw + "/breakpoints");
        s.breakpoints.push_back(b.get<double>());
      }
      if (sj.contains("points")) {
        if (!sj["points"].is_number()) throw ConfigError("points must be a number", sw + "/points");
        s.points = sj["points"].get<double>();
      }
      p.scales.push_back(std::move(s));
    }
    validate(p, where);
    for (const auto& prev : out) {
      if (prev.criterion == p.criterion) throw ConfigError("duplicate profile for '" + p.criterion + "'", where);
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline nlohmann::json profiles_to_json(const std::vector<CriterionProfile>& profiles) {
  auto arr = nlohmann::json::array();
  for (const auto& p : profiles) {
    auto scales = nlohmann::json::array();
    for (const auto& s : p.scales) {
      scales.push_back({{"metric", s.metric},
                        {"shape", std::string(to_string(s.shape))},
                        {"breakpoints", s.breakpoints},
                        {"points", s.points}});
    }
    arr.push_back({{"criterion", p.criterion}, {"scales", std::move(scales)}});
  }
  return arr;
}

/// Shipped profiles, read from the `profiles` section of the bundled reference rubric.
inline const std::vector<CriterionProfile>& default_profiles() {
  static const std::vector<CriterionProfile> profiles =
      parse_profiles(nlohmann::json::parse(kReferenceRubricJson).at("profiles"));
  return profiles;
}

inline const CriterionProfile* find_profile(const std::vector<CriterionProfile>& profiles, std::string_view criterion) {
  for (const auto& p : profiles) {
    if (p.criterion == criterion) return &p;
  }
  return nullptr;
}

}  // namespace fuzzyeval::normalizer
