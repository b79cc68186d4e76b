#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyeval/metrics/scan.hpp"
#include "fuzzyeval/metrics/tokenizer.hpp"

namespace fuzzyeval::metrics {

enum class Visibility { public_, protected_, package_, private_ };

inline std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::public_: return "public";
    case Visibility::protected_: return "protected";
    case Visibility::package_: return "package";
    case Visibility::private_: return "private";
  }
  return "";
}

enum class TypeKind { class_, interface_, enum_, record_, annotation };

struct MethodRecord {
  std::string name;
  std::size_t parameter_count = 0;
  std::size_t body_line_count = 0;  // '{' line through '}' line; 0 without a body
  bool has_override_marker = false;
  Visibility visibility = Visibility::package_;

  bool operator==(const MethodRecord&) const = default;
};

struct ClassRecord {
  std::string name;
  TypeKind kind = TypeKind::class_;
  std::optional<std::string> superclass;
  std::vector<std::string> interfaces_implemented;
  std::size_t field_count = 0;
  std::vector<MethodRecord> methods;  // constructors excluded
  bool is_interface = false;
  std::size_t overridden_method_count = 0;
  std::size_t overloaded_method_group_count = 0;
  bool uses_serialization = false;

  std::string path;
  std::size_t line = 0;
  std::size_t begin = 0;  // byte span of the declaration, keyword through '}'
  std::size_t end = 0;

  bool operator==(const ClassRecord&) const = default;
};

struct Extraction {
  std::vector<ClassRecord> classes;
  std::vector<std::string> warnings;
};

namespace detail {

class ShallowParser {
 public:
  ShallowParser(const SourceUnit& unit, Extraction& out) : unit_(unit), out_(out) {
    for (const auto& t : unit.tokens) {
      if (t.significant()) toks_.push_back(t);
    }
  }

  void run() {
    std::size_t p = 0;
    while (p < toks_.size()) {
      if (is_kw(p, "package") || is_kw(p, "import")) {
        while (p < toks_.size() && !is(p, ";")) ++p;
        ++p;
      } else if (type_start(p)) {
        p = parse_type(p);
      } else {
        ++p;
      }
    }
  }

 private:
  const SourceUnit& unit_;
  Extraction& out_;
  std::vector<Token> toks_;

  std::string_view text(std::size_t p) const { return p < toks_.size() ? toks_[p].text(unit_.text) : std::string_view{}; }
  bool is(std::size_t p, std::string_view s) const { return p < toks_.size() && text(p) == s; }
  bool is_kw(std::size_t p, std::string_view s) const {
    return p < toks_.size() && toks_[p].kind == TokenKind::keyword && text(p) == s;
  }
  bool is_ident(std::size_t p) const { return p < toks_.size() && toks_[p].kind == TokenKind::identifier; }
  std::size_t line(std::size_t p) const { return p < toks_.size() ? toks_[p].line : (toks_.empty() ? 1 : toks_.back().line); }

  void warn(std::size_t p, const std::string& msg) {
    out_.warnings.push_back(unit_.path + ":" + std::to_string(line(p)) + ": " + msg);
  }

  bool type_start(std::size_t p) const {
    if (p > 0 && (is(p - 1, ".") || is(p - 1, ":"))) return false;
    if (is_kw(p, "class") || is_kw(p, "interface") || is_kw(p, "enum")) return true;
    if (is(p, "@") && is_kw(p + 1, "interface")) return true;
    return is_ident(p) && text(p) == "record" && is_ident(p + 1) && (is(p + 2, "(") || is(p + 2, "<"));
  }

  static bool opener(std::string_view s) { return s == "(" || s == "[" || s == "{"; }
  static bool closer(std::string_view s) { return s == ")" || s == "]" || s == "}"; }

  /// Index just past the bracket that closes the one at p.
  std::size_t skip_balanced(std::size_t p) {
    int depth = 0;
    for (std::size_t q = p; q < toks_.size(); ++q) {
      if (opener(text(q))) ++depth;
      if (closer(text(q)) && --depth == 0) return q + 1;
    }
    warn(p, "unbalanced '" + std::string(text(p)) + "'");
    return toks_.size();
  }

  std::size_t skip_angles(std::size_t p) {
    int depth = 0;
    for (std::size_t q = p; q < toks_.size(); ++q) {
      if (is(q, "<")) ++depth;
      if (is(q, ">") && --depth == 0) return q + 1;
      if (is(q, "{") || is(q, ";")) break;
    }
    warn(p, "unbalanced type parameters");
    return p + 1;
  }

  std::size_t skip_annotation(std::size_t p, std::string* name) {
    ++p;  // '@'
    std::string last;
    while (is_ident(p) || (p < toks_.size() && toks_[p].kind == TokenKind::keyword)) {
      last = std::string(text(p));
      ++p;
      if (!is(p, ".")) break;
      ++p;
    }
    if (name) *name = last;
    if (is(p, "(")) p = skip_balanced(p);
    return p;
  }

  /// Reads one type reference; stores its simple name.
  std::size_t read_type(std::size_t p, std::string& name) {
    while (is(p, "@")) p = skip_annotation(p, nullptr);
    while (is_ident(p)) {
      name = std::string(text(p));
      ++p;
      if (is(p, "<")) p = skip_angles(p);
      if (!is(p, ".")) break;
      ++p;
    }
    return p;
  }

  std::size_t read_type_list(std::size_t p, std::vector<std::string>& names) {
    while (p < toks_.size()) {
      std::string n;
      const auto q = read_type(p, n);
      if (q == p) break;
      names.push_back(n);
      p = q;
      if (!is(p, ",")) break;
      ++p;
    }
    return p;
  }

  /// Top-level comma-separated entries between the parens at p.
  std::size_t count_params(std::size_t p, std::size_t& count) {
    const std::size_t close = skip_balanced(p) - 1;
    int depth = 0;
    int angle = 0;
    std::size_t commas = 0;
    for (std::size_t q = p + 1; q < close; ++q) {
      const auto t = text(q);
      if (opener(t)) ++depth;
      if (closer(t)) --depth;
      if (t == "<") ++angle;
      if (t == ">" && angle > 0) --angle;
      if (t == "," && depth == 0 && angle == 0) ++commas;
    }
    count = close > p + 1 ? commas + 1 : 0;
    return close + 1;
  }

  std::size_t parse_type(std::size_t p) {
    ClassRecord rec;
    rec.path = unit_.path;
    rec.line = line(p);
    rec.begin = toks_[p].begin;
    if (is(p, "@")) {
      rec.kind = TypeKind::annotation;
      p += 2;
    } else {
      const auto kw = text(p);
      rec.kind = kw == "class" ? TypeKind::class_
                 : kw == "interface" ? TypeKind::interface_
                 : kw == "enum" ? TypeKind::enum_
                 : TypeKind::record_;
      ++p;
    }
    rec.is_interface = rec.kind == TypeKind::interface_ || rec.kind == TypeKind::annotation;
    if (!is_ident(p)) {
      warn(p, "type declaration without a name");
      return p;
    }
    rec.name = std::string(text(p++));

    while (p < toks_.size() && !is(p, "{")) {
      if (is(p, "<")) {
        p = skip_angles(p);
      } else if (is(p, "(") && rec.kind == TypeKind::record_) {
        p = count_params(p, rec.field_count);
      } else if (is_kw(p, "extends")) {
        std::vector<std::string> names;
        p = read_type_list(p + 1, names);
        if (rec.is_interface) {
          rec.interfaces_implemented.insert(rec.interfaces_implemented.end(), names.begin(), names.end());
        } else if (!names.empty()) {
          rec.superclass = names.front();
        }
      } else if (is_kw(p, "implements")) {
        p = read_type_list(p + 1, rec.interfaces_implemented);
      } else if (is(p, ";") || is(p, "}")) {
        warn(p, "declaration of '" + rec.name + "' has no body");
        return p + 1;
      } else {
        ++p;  // permits lists and anything unexpected
      }
    }
    if (p >= toks_.size()) {
      warn(p, "declaration of '" + rec.name + "' has no body");
      return p;
    }

    const std::size_t slot = out_.classes.size();
    out_.classes.emplace_back();
    p = parse_body(p + 1, rec);
    rec.end = p > 0 && p <= toks_.size() ? toks_[p - 1].end : unit_.text.size();

    std::map<std::string, std::size_t> arity;
    for (const auto& m : rec.methods) {
      ++arity[m.name];
      if (m.has_override_marker) ++rec.overridden_method_count;
    }
    for (const auto& [n, c] : arity) rec.overloaded_method_group_count += c >= 2 ? 1 : 0;
    for (const auto& i : rec.interfaces_implemented) {
      if (i == "Serializable" || i == "Externalizable") rec.uses_serialization = true;
    }
    out_.classes[slot] = std::move(rec);
    return p;
  }

  static bool modifier(std::string_view s) {
    return s == "public" || s == "protected" || s == "private" || s == "static" || s == "final" || s == "abstract" ||
           s == "synchronized" || s == "native" || s == "transient" || s == "volatile" || s == "strictfp" ||
           s == "default" || s == "sealed";
  }

  std::size_t parse_body(std::size_t p, ClassRecord& rec) {
    if (rec.kind == TypeKind::enum_) {
      int depth = 0;
      for (; p < toks_.size(); ++p) {
        if (depth == 0 && (is(p, ";") || is(p, "}"))) break;
        if (opener(text(p))) ++depth;
        if (closer(text(p))) --depth;
      }
      if (is(p, ";")) ++p;
    }

    while (p < toks_.size()) {
      if (is(p, "}")) return p + 1;
      if (is(p, ";")) {
        ++p;
        continue;
      }
      std::optional<Visibility> vis;
      bool override_marker = false;
      while (p < toks_.size()) {
        const auto t = text(p);
        if (is(p, "@") && !is_kw(p + 1, "interface")) {
          std::string ann;
          p = skip_annotation(p, &ann);
          override_marker = override_marker || ann == "Override";
        } else if (modifier(t) && toks_[p].kind != TokenKind::punct) {
          if (t == "public") vis = Visibility::public_;
          if (t == "protected") vis = Visibility::protected_;
          if (t == "private") vis = Visibility::private_;
          ++p;
        } else if (t == "non" && is(p + 1, "-") && text(p + 2) == "sealed") {
          p += 3;
        } else {
          break;
        }
      }
      if (p >= toks_.size()) break;
      if (type_start(p)) {
        p = parse_type(p);
        continue;
      }
      if (is(p, "{")) {
        p = skip_balanced(p);
        continue;
      }
      if (is(p, "}")) continue;
      p = parse_member(p, rec, vis, override_marker);
    }
    warn(p, "unterminated body of '" + rec.name + "'");
    return toks_.size();
  }

  std::size_t parse_member(std::size_t start, ClassRecord& rec, std::optional<Visibility> vis, bool override_marker) {
    std::size_t q = start;
    int depth = 0;
    for (; q < toks_.size(); ++q) {
      const auto t = text(q);
      if (depth == 0 && (t == "(" || t == "=" || t == ";" || t == "{" || t == "}")) break;
      if (opener(t)) ++depth;
      if (closer(t)) --depth;
    }
    if (q >= toks_.size()) return q;
    const auto stop = text(q);
    if (stop == "}") {
      warn(q, "incomplete member declaration in '" + rec.name + "'");
      return q;
    }
    if (stop == "{") return skip_balanced(q);  // compact constructor or similar
    if (stop == "(") return parse_method(start, q, rec, vis, override_marker);
    return parse_field(start, rec);
  }

  std::size_t parse_method(std::size_t start, std::size_t paren, ClassRecord& rec, std::optional<Visibility> vis,
                           bool override_marker) {
    if (paren == start || !is_ident(paren - 1)) {
      warn(paren, "unrecognised member in '" + rec.name + "'");
      return skip_balanced(paren);
    }
    MethodRecord m;
    m.name = std::string(text(paren - 1));
    m.has_override_marker = override_marker;
    m.visibility = vis.value_or(rec.is_interface ? Visibility::public_ : Visibility::package_);
    std::size_t p = count_params(paren, m.parameter_count);
    int depth = 0;
    for (; p < toks_.size(); ++p) {
      if (depth == 0 && (is(p, "{") || is(p, ";"))) break;
      if (is(p, "}") && depth == 0) break;
      if (opener(text(p))) ++depth;
      if (closer(text(p))) --depth;
    }
    if (is(p, "{")) {
      const auto open_line = line(p);
      const auto after = skip_balanced(p);
      m.body_line_count = line(after - 1) - open_line + 1;
      p = after;
    } else if (is(p, ";")) {
      ++p;
    }
    const bool constructor = m.name == rec.name && !rec.is_interface && paren - 1 == start_of_name(start, paren);
    if (!constructor) rec.methods.push_back(std::move(m));
    return p;
  }

  /// A constructor has nothing but optional type parameters before its name.
  std::size_t start_of_name(std::size_t start, std::size_t paren) {
    std::size_t p = start;
    if (is(p, "<")) p = skip_angles(p);
    return p == paren - 1 ? paren - 1 : toks_.size();
  }

  std::size_t parse_field(std::size_t p, ClassRecord& rec) {
    int depth = 0;
    int angle = 0;
    bool init = false;
    std::size_t declarators = 1;
    for (; p < toks_.size(); ++p) {
      const auto t = text(p);
      if (depth == 0 && (t == ";" || t == "}")) break;
      if (opener(t)) ++depth;
      if (closer(t)) --depth;
      if (depth != 0) continue;
      if (!init && t == "<") ++angle;
      if (!init && t == ">" && angle > 0) --angle;
      if (t == "=") init = true;
      if (t == "," && angle == 0) {
        ++declarators;
        init = false;
      }
      if (t == "serialVersionUID") rec.uses_serialization = true;
    }
    rec.field_count += declarators;
    return is(p, ";") ? p + 1 : p;
  }
};

}  // namespace detail

/// Shallow parse of one unit: type declarations (nested member types
/// included, local and anonymous classes not), their members and markers.
inline Extraction extract_classes(const SourceUnit& unit) {
  Extraction out;
  detail::ShallowParser(unit, out).run();
  return out;
}

inline Extraction extract_classes(const std::vector<SourceUnit>& units) {
  Extraction all;
  for (const auto& u : units) {
    auto e = extract_classes(u);
    for (auto& c : e.classes) all.classes.push_back(std::move(c));
    for (auto& w : e.warnings) all.warnings.push_back(std::move(w));
  }
  return all;
}

}  // namespace fuzzyeval::metrics
