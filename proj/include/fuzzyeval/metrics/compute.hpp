#pragma once

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "fuzzyeval/metrics/classes.hpp"
#include "fuzzyeval/metrics/report.hpp"
#include "fuzzyeval/metrics/scan.hpp"

namespace fuzzyeval::metrics {

/// Identifier lists behind the usage counts. Matching is by exact identifier.
struct NameLists {
  std::set<std::string, std::less<>> collections{
      "List",         "ArrayList",  "LinkedList", "Map",         "HashMap",       "TreeMap",    "LinkedHashMap",
      "Set",          "HashSet",    "TreeSet",    "LinkedHashSet", "Queue",       "Deque",      "ArrayDeque",
      "PriorityQueue", "Collection", "Collections", "Arrays",    "Stack",         "Vector",     "Iterator",
      "SortedMap",    "SortedSet",  "EnumMap",    "EnumSet",     "Hashtable"};
  std::set<std::string, std::less<>> comparators{"Comparator", "Comparable"};
  std::set<std::string, std::less<>> streams{"Stream",     "IntStream",      "LongStream", "DoubleStream",
                                             "Collectors", "StreamSupport",  "stream",     "parallelStream"};
  std::set<std::string, std::less<>> builtin_exceptions{
      "Throwable", "Exception", "Error", "RuntimeException", "IOException", "FileNotFoundException",
      "UncheckedIOException", "EOFException", "NotSerializableException", "IllegalArgumentException",
      "IllegalStateException", "NullPointerException", "ArithmeticException", "ArrayIndexOutOfBoundsException",
      "IndexOutOfBoundsException", "StringIndexOutOfBoundsException", "NumberFormatException",
      "ClassNotFoundException", "ClassCastException", "CloneNotSupportedException", "InterruptedException",
      "UnsupportedOperationException", "InputMismatchException", "NoSuchElementException",
      "ConcurrentModificationException", "SQLException", "ParseException", "DateTimeException",
      "DateTimeParseException", "TimeoutException", "ExecutionException", "SecurityException",
      "NegativeArraySizeException", "AssertionError", "StackOverflowError", "OutOfMemoryError"};
  std::set<std::string, std::less<>> builtin_interfaces{
      "Comparable", "Comparator", "Serializable", "Externalizable", "Cloneable", "Runnable", "Callable",
      "Iterable",   "Iterator",   "AutoCloseable", "Closeable",     "Collection", "List",     "Set",
      "Map",        "Queue",      "Deque",         "Function",      "BiFunction", "Supplier", "Consumer",
      "BiConsumer", "Predicate",  "EventListener", "ActionListener", "CharSequence"};
};

struct ExtractorOptions {
  ScanOptions scan;
  NameLists names;
};

namespace detail {

struct UsageCounts {
  std::int64_t collections = 0;
  std::int64_t comparators = 0;
  std::int64_t streams = 0;
  std::int64_t builtin_exceptions = 0;
};

/// Identifier occurrences outside package/import statements. Built-in
/// exceptions count only where thrown, declared or caught: after `new`, in
/// `throws` clauses and inside `catch (...)`.
inline void count_usage(const SourceUnit& u, const NameLists& names, const std::set<std::string, std::less<>>& own,
                        UsageCounts& c) {
  std::vector<const Token*> toks;
  for (const auto& t : u.tokens) {
    if (t.significant()) toks.push_back(&t);
  }
  auto text = [&](std::size_t k) { return k < toks.size() ? toks[k]->text(u.text) : std::string_view{}; };
  auto builtin_exc = [&](std::string_view s) { return names.builtin_exceptions.count(s) && !own.count(s); };

  bool in_throws = false;
  int catch_depth = 0;  // paren depth inside catch (...), 0 when outside
  bool after_new = false;
  for (std::size_t k = 0; k < toks.size(); ++k) {
    const auto t = text(k);
    const auto kind = toks[k]->kind;
    if (kind == TokenKind::keyword && (t == "import" || t == "package")) {
      while (k < toks.size() && text(k) != ";") ++k;
      continue;
    }
    if (kind == TokenKind::identifier) {
      if (names.collections.count(t)) ++c.collections;
      if (names.comparators.count(t)) ++c.comparators;
      if (names.streams.count(t)) ++c.streams;
    }

    if (catch_depth > 0) {
      if (t == "(") ++catch_depth;
      if (t == ")") --catch_depth;
      if (kind == TokenKind::identifier && builtin_exc(t) && text(k + 1) != ".") ++c.builtin_exceptions;
      continue;
    }
    if (kind == TokenKind::keyword && t == "catch" && text(k + 1) == "(") {
      catch_depth = 1;
      ++k;
      continue;
    }
    if (kind == TokenKind::keyword && t == "throws") {
      in_throws = true;
      continue;
    }
    if (in_throws) {
      if (t == "{" || t == ";") {
        in_throws = false;
      } else if (kind == TokenKind::identifier && builtin_exc(t) && text(k + 1) != ".") {
        ++c.builtin_exceptions;
      }
      continue;
    }
    if (kind == TokenKind::keyword && t == "new") {
      after_new = true;
      continue;
    }
    if (after_new) {
      if (kind == TokenKind::identifier && text(k + 1) == ".") continue;  // qualified name
      if (t == ".") continue;
      if (kind == TokenKind::identifier && builtin_exc(t)) ++c.builtin_exceptions;
      after_new = false;
    }
  }
}

inline bool exception_like(const std::string& n) {
  auto ends = [&](std::string_view suf) { return n.size() >= suf.size() && n.compare(n.size() - suf.size(), suf.size(), suf) == 0; };
  return ends("Exception") || ends("Error") || n == "Throwable";
}

}  // namespace detail

/// Aggregates units and extracted classes into a report. Interfaces and
/// annotation types do not count as classes; their methods stay out of the
/// per-class averages. Order of `units` and `classes` does not matter.
inline MetricsReport compute_metrics(const std::vector<SourceUnit>& units, const std::vector<ClassRecord>& classes,
                                     const NameLists& names = {}) {
  MetricsReport r;
  r.files_scanned = static_cast<std::int64_t>(units.size());
  for (const auto& u : units) {
    r.total_lines += static_cast<std::int64_t>(u.line_count);
    r.comment_lines += static_cast<std::int64_t>(u.comment_line_count);
  }

  std::set<std::string, std::less<>> own_types;
  std::set<std::string, std::less<>> own_interfaces;
  for (const auto& c : classes) {
    own_types.insert(c.name);
    if (c.kind == TypeKind::interface_) own_interfaces.insert(c.name);
  }

  std::int64_t fields = 0;
  std::int64_t params = 0;
  std::int64_t body_lines = 0;
  for (const auto& c : classes) {
    r.override_count += static_cast<std::int64_t>(c.overridden_method_count);
    r.overload_group_count += static_cast<std::int64_t>(c.overloaded_method_group_count);
    if (c.kind == TypeKind::interface_) ++r.own_interface_count;
    for (const auto& i : c.interfaces_implemented) {
      if (!c.is_interface && names.builtin_interfaces.count(i) && !own_types.count(i)) ++r.builtin_interface_impl_count;
    }
    if (c.uses_serialization) ++r.serialization_use_count;
    if (c.is_interface) continue;
    ++r.class_count;
    if (c.superclass) ++r.inherited_class_count;
    fields += static_cast<std::int64_t>(c.field_count);
    for (const auto& m : c.methods) {
      ++r.method_count;
      params += static_cast<std::int64_t>(m.parameter_count);
      body_lines += static_cast<std::int64_t>(m.body_line_count);
    }
  }

  // Own exceptions: declared classes named like one or deriving from one.
  std::set<std::string, std::less<>> exceptions;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& c : classes) {
      if (c.is_interface || exceptions.count(c.name)) continue;
      const bool base = c.superclass && (exceptions.count(*c.superclass) ||
                                         (names.builtin_exceptions.count(*c.superclass) && !own_types.count(*c.superclass)));
      if (detail::exception_like(c.name) || base) {
        exceptions.insert(c.name);
        grew = true;
      }
    }
  }
  r.own_exception_count = static_cast<std::int64_t>(exceptions.size());

  detail::UsageCounts usage;
  for (const auto& u : units) detail::count_usage(u, names, own_types, usage);
  r.collections_use_count = usage.collections;
  r.comparator_use_count = usage.comparators;
  r.stream_use_count = usage.streams;
  r.builtin_exception_use_count = usage.builtin_exceptions;

  auto ratio = [](std::int64_t a, std::int64_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
  r.avg_methods_per_class = ratio(r.method_count, r.class_count);
  r.avg_fields_per_class = ratio(fields, r.class_count);
  r.avg_params_per_method = ratio(params, r.method_count);
  r.avg_lines_per_method = ratio(body_lines, r.method_count);
  return r;
}

/// scan_tree, extract_classes and compute_metrics in one go; scan and parse
/// warnings land in the report.
inline MetricsReport analyze_project(const std::filesystem::path& root, const ExtractorOptions& opt = {}) {
  auto scan = scan_tree(root, opt.scan);
  auto ex = extract_classes(scan.units);
  auto report = compute_metrics(scan.units, ex.classes, opt.names);
  report.warnings = std::move(scan.warnings);
  report.warnings.insert(report.warnings.end(), ex.warnings.begin(), ex.warnings.end());
  return report;
}

}  // namespace fuzzyeval::metrics
