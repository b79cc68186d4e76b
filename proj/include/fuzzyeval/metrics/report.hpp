#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzyeval::metrics {

inline constexpr int kMetricsVersion = 1;

/// Raw source-tree metrics, one field per code-evaluation parameter.
///
/// `method_count` is the denominator of the per-method averages; it is kept
/// so two reports can be merged exactly.
struct MetricsReport {
  std::int64_t files_scanned = 0;
  std::int64_t total_lines = 0;
  std::int64_t comment_lines = 0;
  std::int64_t class_count = 0;
  std::int64_t method_count = 0;
  double avg_methods_per_class = 0.0;
  double avg_fields_per_class = 0.0;
  double avg_params_per_method = 0.0;
  double avg_lines_per_method = 0.0;
  std::int64_t inherited_class_count = 0;
  std::int64_t override_count = 0;
  std::int64_t overload_group_count = 0;
  std::int64_t own_interface_count = 0;
  std::int64_t builtin_interface_impl_count = 0;
  std::int64_t own_exception_count = 0;
  std::int64_t builtin_exception_use_count = 0;
  std::int64_t collections_use_count = 0;
  std::int64_t comparator_use_count = 0;
  std::int64_t stream_use_count = 0;
  std::int64_t serialization_use_count = 0;
  std::vector<std::string> warnings;

  bool operator==(const MetricsReport&) const = default;
};

/// Names accepted by `metric_value`: every numeric report field plus a few
/// derived quantities that pair related counts.
inline const std::vector<std::string_view>& metric_names() {
  static const std::vector<std::string_view> names{
      "files_scanned",         "total_lines",
      "comment_lines",         "class_count",
      "method_count",          "avg_methods_per_class",
      "avg_fields_per_class",  "avg_params_per_method",
      "avg_lines_per_method",  "inherited_class_count",
      "override_count",        "overload_group_count",
      "own_interface_count",   "builtin_interface_impl_count",
      "own_exception_count",   "builtin_exception_use_count",
      "collections_use_count", "comparator_use_count",
      "stream_use_count",      "serialization_use_count",
      // derived
      "comment_ratio",         "interface_use_count",
      "exception_use_count",   "override_overload_count",
  };
  return names;
}

inline std::optional<double> metric_value(const MetricsReport& r, std::string_view name) {
  auto d = [](std::int64_t v) { return static_cast<double>(v); };
  if (name == "files_scanned") return d(r.files_scanned);
  if (name == "total_lines") return d(r.total_lines);
  if (name == "comment_lines") return d(r.comment_lines);
  if (name == "class_count") return d(r.class_count);
  if (name == "method_count") return d(r.method_count);
  if (name == "avg_methods_per_class") return r.avg_methods_per_class;
  if (name == "avg_fields_per_class") return r.avg_fields_per_class;
  if (name == "avg_params_per_method") return r.avg_params_per_method;
  if (name == "avg_lines_per_method") return r.avg_lines_per_method;
  if (name == "inherited_class_count") return d(r.inherited_class_count);
  if (name == "override_count") return d(r.override_count);
  if (name == "overload_group_count") return d(r.overload_group_count);
  if (name == "own_interface_count") return d(r.own_interface_count);
  if (name == "builtin_interface_impl_count") return d(r.builtin_interface_impl_count);
  if (name == "own_exception_count") return d(r.own_exception_count);
  if (name == "builtin_exception_use_count") return d(r.builtin_exception_use_count);
  if (name == "collections_use_count") return d(r.collections_use_count);
  if (name == "comparator_use_count") return d(r.comparator_use_count);
  if (name == "stream_use_count") return d(r.stream_use_count);
  if (name == "serialization_use_count") return d(r.serialization_use_count);
  if (name == "comment_ratio") {
    return r.total_lines == 0 ? 0.0 : d(r.comment_lines) / d(r.total_lines);
  }
  if (name == "interface_use_count") return d(r.own_interface_count + r.builtin_interface_impl_count);
  if (name == "exception_use_count") return d(r.own_exception_count + r.builtin_exception_use_count);
  if (name == "override_overload_count") return d(r.override_count + r.overload_group_count);
  return std::nullopt;
}

/// Report of the union of two disjoint trees: counts add, averages combine
/// weighted by their denominators.
inline MetricsReport merge(const MetricsReport& a, const MetricsReport& b) {
  MetricsReport out;
  auto wmean = [](double x, std::int64_t nx, double y, std::int64_t ny) {
    const auto n = nx + ny;
    return n == 0 ? 0.0 : (x * static_cast<double>(nx) + y * static_cast<double>(ny)) / static_cast<double>(n);
  };
  out.files_scanned = a.files_scanned + b.files_scanned;
  out.total_lines = a.total_lines + b.total_lines;
  out.comment_lines = a.comment_lines + b.comment_lines;
  out.class_count = a.class_count + b.class_count;
  out.method_count = a.method_count + b.method_count;
  out.avg_methods_per_class = wmean(a.avg_methods_per_class, a.class_count, b.avg_methods_per_class, b.class_count);
  out.avg_fields_per_class = wmean(a.avg_fields_per_class, a.class_count, b.avg_fields_per_class, b.class_count);
  out.avg_params_per_method = wmean(a.avg_params_per_method, a.method_count, b.avg_params_per_method, b.method_count);
  out.avg_lines_per_method = wmean(a.avg_lines_per_method, a.method_count, b.avg_lines_per_method, b.method_count);
  out.inherited_class_count = a.inherited_class_count + b.inherited_class_count;
  out.override_count = a.override_count + b.override_count;
  out.overload_group_count = a.overload_group_count + b.overload_group_count;
  out.own_interface_count = a.own_interface_count + b.own_interface_count;
  out.builtin_interface_impl_count = a.builtin_interface_impl_count + b.builtin_interface_impl_count;
  out.own_exception_count = a.own_exception_count + b.own_exception_count;
  out.builtin_exception_use_count = a.builtin_exception_use_count + b.builtin_exception_use_count;
  out.collections_use_count = a.collections_use_count + b.collections_use_count;
  out.comparator_use_count = a.comparator_use_count + b.comparator_use_count;
  out.stream_use_count = a.stream_use_count + b.stream_use_count;
  out.serialization_use_count = a.serialization_use_count + b.serialization_use_count;
  out.warnings = a.warnings;
  out.warnings.insert(out.warnings.end(), b.warnings.begin(), b.warnings.end());
  return out;
}

}  // namespace fuzzyeval::metrics
