#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fuzzyeval/errors.hpp"
#include "fuzzyeval/fuzzy/hedge.hpp"
#include "fuzzyeval/fuzzy/linguistic_variable.hpp"
#include "fuzzyeval/normalizer/normalizer.hpp"
#include "fuzzyeval/reference_rubric_data.hpp"
#include "fuzzyeval/rubric/rubric.hpp"

// Rubric config documents (JSON, `rubric_version: 1`):
//
//   {
//     "rubric_version": 1, "name": "...", "exhaustive": true,
//     "rule_source": "table" | "weighted",
//     "inference": {"conjunction": "min" | "product", "resolution": 1001},
//     "criteria": [{"name", "title", "weight", "domain": [lo, hi],
//                   "terms": [{"label", "mf": "triangular" | "trapezoidal", "params": [...]}]}],
//     "output": {"name", "title", "domain", "terms"},
//     "rules": [{"id": 1, "if": {"<criterion>": "[hedge ...] <term>"}, "then": "[hedge ...] <term>"}],
//     "profiles": [...]
//   }
//
// Errors carry a JSON pointer to the offending node.

namespace fuzzyeval::rubric {

inline constexpr int kRubricVersion = 1;

namespace detail {

using nlohmann::json;

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) throw ConfigError(std::string("missing '") + key + "'", path);
  return obj.at(key);
}

inline std::string require_string(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string", path + "/" + key);
  return v.get<std::string>();
}

inline fuzzy::Interval parse_domain(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("domain must be [lo, hi]", path);
  }
  fuzzy::Interval d{j[0].get<double>(), j[1].get<double>()};
  if (!(d.lo < d.hi)) throw ConfigError("domain must have lo < hi", path);
  return d;
}

inline LinguisticVariable parse_variable(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("variable must be an object", path);
  const auto name = require_string(j, "name", path);
  const auto domain = parse_domain(require(j, "domain", path), path + "/domain");
  const auto& terms_j = require(j, "terms", path);
  if (!terms_j.is_array() || terms_j.empty()) throw ConfigError("'terms' must be a non-empty array", path + "/terms");
  std::vector<fuzzy::FuzzySet> terms;
  for (std::size_t i = 0; i < terms_j.size(); ++i) {
    const std::string tp = path + "/terms/" + std::to_string(i);
    const auto& tj = terms_j[i];
    auto label = require_string(tj, "label", tp);
    auto kind_s = require_string(tj, "mf", tp);
    fuzzy::MfKind kind;
    if (kind_s == "triangular") {
      kind = fuzzy::MfKind::triangular;
    } else if (kind_s == "trapezoidal") {
      kind = fuzzy::MfKind::trapezoidal;
    } else {
      throw ConfigError("unknown membership function '" + kind_s + "'", tp + "/mf");
    }
    const auto& pj = require(tj, "params", tp);
    if (!pj.is_array()) throw ConfigError("'params' must be an array", tp + "/params");
    std::vector<double> params;
    for (const auto& p : pj) {
      if (!p.is_number()) throw ConfigError("'params' must hold numbers", tp + "/params");
      params.push_back(p.get<double>());
    }
    try {
      terms.push_back({std::move(label), fuzzy::MembershipFunction::from_params(kind, params)});
    } catch (const ContractError& e) {
      throw ConfigError(e.what(), tp + "/params");
    }
  }
  try {
    return LinguisticVariable(name, domain, std::move(terms));
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), path);
  }
}

/// "[hedge ...] term". An exact term match wins, so a term named "Very Low"
/// is not read as the hedge "very" applied to "Low"; leading hedge words are
/// peeled one at a time until the remainder names a term.
inline fuzzy::Clause parse_term_ref(const LinguisticVariable& var, std::string_view text, const std::string& path) {
  std::vector<fuzzy::HedgeKind> words;
  std::string_view rest = text;
  while (true) {
    if (var.index_of(rest)) return fuzzy::Clause{var.name(), std::string(rest), fuzzy::Hedge(std::move(words))};
    const auto sp = rest.find(' ');
    if (sp == std::string_view::npos) break;
    auto word = fuzzy::parse_hedge_word(rest.substr(0, sp));
    if (!word) break;
    words.push_back(*word);
    rest.remove_prefix(sp + 1);
    while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  }
  throw ConfigError("'" + std::string(text) + "' is not a term of '" + var.name() + "'", path);
}

inline std::string term_ref_to_string(const fuzzy::Clause& c) {
  return c.hedge.empty() ? c.term : c.hedge.to_string() + " " + c.term;
}

}  // namespace detail

/// Builds and validates a rubric from a parsed config document. Missing
/// `profiles` fall back to the shipped defaults.
inline Rubric parse_rubric(const nlohmann::json& doc) {
  using detail::require;
  using detail::require_string;
  if (!doc.is_object()) throw ConfigError("rubric document must be an object", "");
  const auto& ver = require(doc, "rubric_version", "");
  if (!ver.is_number_integer() || ver.get<int>() != kRubricVersion) {
    throw ConfigError("unsupported rubric_version (expected 1)", "/rubric_version");
  }

  const std::string name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : "";
  const std::string description =
      doc.contains("description") && doc["description"].is_string() ? doc["description"].get<std::string>() : "";
  bool exhaustive = false;
  if (doc.contains("exhaustive")) {
    if (!doc["exhaustive"].is_boolean()) throw ConfigError("'exhaustive' must be a boolean", "/exhaustive");
    exhaustive = doc["exhaustive"].get<bool>();
  }
  RuleSource source = RuleSource::table;
  if (doc.contains("rule_source")) {
    const auto s = doc["rule_source"].is_string() ? doc["rule_source"].get<std::string>() : "";
    if (s == "table") {
      source = RuleSource::table;
    } else if (s == "weighted") {
      source = RuleSource::weighted;
    } else {
      throw ConfigError("rule_source must be \"table\" or \"weighted\"", "/rule_source");
    }
  }

  fuzzy::InferenceOptions inference;
  if (doc.contains("inference")) {
    const auto& ij = doc["inference"];
    if (!ij.is_object()) throw ConfigError("'inference' must be an object", "/inference");
    if (ij.contains("conjunction")) {
      const auto s = ij["conjunction"].is_string() ? ij["conjunction"].get<std::string>() : "";
      if (s == "min") {
        inference.conjunction = fuzzy::TNorm::minimum;
      } else if (s == "product") {
        inference.conjunction = fuzzy::TNorm::product;
      } else {
        throw ConfigError("conjunction must be \"min\" or \"product\"", "/inference/conjunction");
      }
    }
    if (ij.contains("resolution")) {
      if (!ij["resolution"].is_number_integer() || ij["resolution"].get<long long>() < 2) {
        throw ConfigError("resolution must be an integer >= 2", "/inference/resolution");
      }
      inference.resolution = ij["resolution"].get<std::size_t>();
    }
  }

  const auto& cj = require(doc, "criteria", "");
  if (!cj.is_array() || cj.empty()) throw ConfigError("'criteria' must be a non-empty array", "/criteria");
  std::vector<Criterion> criteria;
  for (std::size_t i = 0; i < cj.size(); ++i) {
    const std::string cp = "/criteria/" + std::to_string(i);
    auto var = detail::parse_variable(cj[i], cp);
    Weight weight = Weight::medium;
    if (cj[i].contains("weight")) {
      const auto ws = cj[i]["weight"].is_string() ? cj[i]["weight"].get<std::string>() : "";
      auto w = parse_weight(ws);
      if (!w) throw ConfigError("weight must be Low, Medium or High", cp + "/weight");
      weight = *w;
    }
    std::string title = cj[i].contains("title") && cj[i]["title"].is_string() ? cj[i]["title"].get<std::string>()
                                                                              : var.name();
    for (const auto& prev : criteria) {
      if (prev.name == var.name()) throw ConfigError("duplicate criterion '" + var.name() + "'", cp + "/name");
    }
    std::string cname = var.name();
    criteria.push_back(Criterion{std::move(cname), std::move(title), std::move(var), weight});
  }

  const auto& oj = require(doc, "output", "");
  auto output = detail::parse_variable(oj, "/output");
  std::string output_title =
      oj.contains("title") && oj["title"].is_string() ? oj["title"].get<std::string>() : output.name();
  for (const auto& c : criteria) {
    if (c.name == output.name()) throw ConfigError("output shares a name with a criterion", "/output/name");
  }

  std::vector<Rule> rules;
  if (source == RuleSource::table) {
    if (!doc.contains("rules")) throw ConfigError("missing 'rules' (rule_source is \"table\")", "/rules");
    const auto& rj = doc["rules"];
    if (!rj.is_array() || rj.empty()) throw ConfigError("'rules' must be a non-empty array", "/rules");
    for (std::size_t i = 0; i < rj.size(); ++i) {
      const std::string rp = "/rules/" + std::to_string(i);
      const auto& r = rj[i];
      const auto& idj = require(r, "id", rp);
      if (!idj.is_number_integer() || idj.get<long long>() < 1) throw ConfigError("rule id must be a positive integer", rp + "/id");
      Rule rule;
      rule.id = idj.get<int>();
      const auto& ifj = require(r, "if", rp);
      if (!ifj.is_object() || ifj.empty()) throw ConfigError("'if' must be a non-empty object", rp + "/if");
      for (const auto& [key, val] : ifj.items()) {
        if (std::none_of(criteria.begin(), criteria.end(), [&](const Criterion& c) { return c.name == key; })) {
          throw ConfigError("unknown criterion '" + key + "'", rp + "/if/" + key);
        }
      }
      // Clause order follows criteria order regardless of document order.
      for (const auto& c : criteria) {
        if (!ifj.contains(c.name)) continue;
        const auto& tv = ifj[c.name];
        if (!tv.is_string()) throw ConfigError("term must be a string", rp + "/if/" + c.name);
        rule.antecedents.push_back(detail::parse_term_ref(c.variable, tv.get<std::string>(), rp + "/if/" + c.name));
      }
      const auto then = require_string(r, "then", rp);
      rule.consequent = detail::parse_term_ref(output, then, rp + "/then");
      rules.push_back(std::move(rule));
    }
  } else {
    rules = generate_weighted_rules(criteria, output);
  }

  validate_rule_base(criteria, output, rules);
  if (exhaustive) check_exhaustive(criteria, rules);

  std::vector<normalizer::CriterionProfile> profiles;
  if (doc.contains("profiles")) {
    profiles = normalizer::parse_profiles(doc["profiles"], "/profiles");
  } else {
    profiles = normalizer::default_profiles();
  }

  return Rubric{.name = name,
                .description = description,
                .criteria = std::move(criteria),
                .output = std::move(output),
                .output_title = std::move(output_title),
                .rules = std::move(rules),
                .rule_source = source,
                .exhaustive = exhaustive,
                .inference = inference,
                .profiles = std::move(profiles)};
}

/// Line and column (1-based) of a byte offset in `text`.
inline std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Parses JSON text, reporting syntax errors with line:column.
inline nlohmann::json parse_rubric_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      e.what());
  }
}

inline Rubric parse_rubric_text(std::string_view text) { return parse_rubric(parse_rubric_json(text)); }

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Rubric load_rubric_file(const std::filesystem::path& path) { return parse_rubric_text(read_text_file(path)); }

/// The bundled reference rubric: three criteria, 36 rules, calibrated partitions.
inline const Rubric& load_reference_rubric() {
  static const Rubric rubric = parse_rubric_text(kReferenceRubricJson);
  return rubric;
}

namespace detail {

inline nlohmann::json variable_to_json(const LinguisticVariable& v, const std::string& title) {
  auto terms = nlohmann::json::array();
  for (const auto& t : v.terms()) {
    auto params = nlohmann::json::array();
    for (double p : t.mf.params()) params.push_back(p);
    terms.push_back({{"label", t.label}, {"mf", std::string(fuzzy::to_string(t.mf.kind()))}, {"params", params}});
  }
  return {{"name", v.name()}, {"title", title}, {"domain", {v.domain().lo, v.domain().hi}}, {"terms", terms}};
}

}  // namespace detail

/// Config document for a rubric; parse_rubric(rubric_to_json(r)) == r.
inline nlohmann::json rubric_to_json(const Rubric& r) {
  nlohmann::json doc;
  doc["rubric_version"] = kRubricVersion;
  doc["name"] = r.name;
  doc["description"] = r.description;
  doc["exhaustive"] = r.exhaustive;
  doc["rule_source"] = r.rule_source == RuleSource::table ? "table" : "weighted";
  doc["inference"] = {{"conjunction", r.inference.conjunction == fuzzy::TNorm::minimum ? "min" : "product"},
                      {"resolution", r.inference.resolution}};
  auto criteria = nlohmann::json::array();
  for (const auto& c : r.criteria) {
    auto cj = detail::variable_to_json(c.variable, c.title);
    cj["weight"] = std::string(to_string(c.weight));
    criteria.push_back(std::move(cj));
  }
  doc["criteria"] = std::move(criteria);
  doc["output"] = detail::variable_to_json(r.output, r.output_title);
  if (r.rule_source == RuleSource::table) {
    auto rules = nlohmann::json::array();
    for (const auto& rule : r.rules) {
      nlohmann::json ifj = nlohmann::json::object();
      for (const auto& c : rule.antecedents) ifj[c.variable] = detail::term_ref_to_string(c);
      rules.push_back({{"id", rule.id}, {"if", ifj}, {"then", detail::term_ref_to_string(rule.consequent)}});
    }
    doc["rules"] = std::move(rules);
  }
  doc["profiles"] = normalizer::profiles_to_json(r.profiles);
  return doc;
}

}  // namespace fuzzyeval::rubric
