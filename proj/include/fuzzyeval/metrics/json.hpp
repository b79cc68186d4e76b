#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <utility>
#include <variant>

#include "fuzzyeval/errors.hpp"
#include "fuzzyeval/metrics/report.hpp"

namespace fuzzyeval::metrics {

namespace detail {

using Field = std::variant<std::int64_t MetricsReport::*, double MetricsReport::*>;

inline const std::vector<std::pair<const char*, Field>>& report_fields() {
  using R = MetricsReport;
  static const std::vector<std::pair<const char*, Field>> fields{
      {"files_scanned", &R::files_scanned},
      {"total_lines", &R::total_lines},
      {"comment_lines", &R::comment_lines},
      {"class_count", &R::class_count},
      {"method_count", &R::method_count},
      {"avg_methods_per_class", &R::avg_methods_per_class},
      {"avg_fields_per_class", &R::avg_fields_per_class},
      {"avg_params_per_method", &R::avg_params_per_method},
      {"avg_lines_per_method", &R::avg_lines_per_method},
      {"inherited_class_count", &R::inherited_class_count},
      {"override_count", &R::override_count},
      {"overload_group_count", &R::overload_group_count},
      {"own_interface_count", &R::own_interface_count},
      {"builtin_interface_impl_count", &R::builtin_interface_impl_count},
      {"own_exception_count", &R::own_exception_count},
      {"builtin_exception_use_count", &R::builtin_exception_use_count},
      {"collections_use_count", &R::collections_use_count},
      {"comparator_use_count", &R::comparator_use_count},
      {"stream_use_count", &R::stream_use_count},
      {"serialization_use_count", &R::serialization_use_count},
  };
  return fields;
}

}  // namespace detail

/// Stable field order; the same report always dumps to the same bytes.
inline nlohmann::ordered_json report_to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["metrics_version"] = kMetricsVersion;
  for (const auto& [name, field] : detail::report_fields()) {
    std::visit([&, n = name](auto member) { j[n] = r.*member; }, field);
  }
  j["warnings"] = r.warnings;
  return j;
}

inline MetricsReport report_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("metrics report must be an object", "");
  if (!j.contains("metrics_version") || j["metrics_version"] != kMetricsVersion) {
    throw ConfigError("unsupported metrics_version (expected 1)", "/metrics_version");
  }
  MetricsReport r;
  for (const auto& [name, field] : detail::report_fields()) {
    const std::string path = std::string("/") + name;
    if (!j.contains(name)) throw ConfigError(std::string("missing '") + name + "'", path);
    const auto& v = j[name];
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(r.*member)>;
          if constexpr (std::is_same_v<T, std::int64_t>) {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError("expected a count >= 0", path);
          } else {
            if (!v.is_number() || v.get<double>() < 0.0) throw ConfigError("expected a number >= 0", path);
          }
          r.*member = v.get<T>();
        },
        field);
  }
  if (j.contains("warnings")) {
    if (!j["warnings"].is_array()) throw ConfigError("'warnings' must be an array", "/warnings");
    for (const auto& w : j["warnings"]) {
      if (!w.is_string()) throw ConfigError("warnings must be strings", "/warnings");
      r.warnings.push_back(w.get<std::string>());
    }
  }
  return r;
}

}  // namespace fuzzyeval::metrics
