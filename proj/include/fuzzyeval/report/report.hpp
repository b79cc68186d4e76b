#pragma once

#include <nlohmann/json.hpp>

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>

#include "fuzzyeval/errors.hpp"
#include "fuzzyeval/metrics/json.hpp"
#include "fuzzyeval/rubric/config.hpp"

namespace fuzzyeval::report {

inline constexpr int kReportVersion = 1;

/// Everything one evaluation produced. `project` is opaque caller data
/// (paths, course and student fields) carried through unchanged.
struct EvaluationReport {
  nlohmann::json project = nlohmann::json::object();
  std::string rubric;
  std::optional<metrics::MetricsReport> metrics;
  rubric::EvaluationResult result;

  bool operator==(const EvaluationReport&) const = default;
};

/// "if clean_code is High and ... then project_success is Very Good"
inline std::string rule_text(const fuzzy::Rule& r) {
  std::string s = "if ";
  for (std::size_t k = 0; k < r.antecedents.size(); ++k) {
    if (k) s += " and ";
    s += r.antecedents[k].variable + " is " + rubric::detail::term_ref_to_string(r.antecedents[k]);
  }
  return s + " then " + r.consequent.variable + " is " + rubric::detail::term_ref_to_string(r.consequent);
}

inline const fuzzy::Rule* find_rule(const rubric::Rubric& r, int id) {
  for (const auto& rule : r.rules) {
    if (rule.id == id) return &rule;
  }
  return nullptr;
}

inline nlohmann::ordered_json to_json(const EvaluationReport& rep, const rubric::Rubric* rub = nullptr) {
  nlohmann::ordered_json j;
  j["report_version"] = kReportVersion;
  j["project"] = rep.project;
  j["rubric"] = rep.rubric;
  if (rep.metrics) j["metrics"] = metrics::report_to_json(*rep.metrics);
  auto scores = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rep.result.criterion_scores) scores[k] = v;
  j["criterion_scores"] = scores;
  auto fired = nlohmann::ordered_json::array();
  for (const auto& f : rep.result.fired_rules) {
    nlohmann::ordered_json fj{{"id", f.rule_id}, {"strength", f.strength}};
    if (rub) {
      if (const auto* rule = find_rule(*rub, f.rule_id)) fj["rule"] = rule_text(*rule);
    }
    fired.push_back(std::move(fj));
  }
  j["fired_rules"] = fired;
  j["success_score"] = rep.result.success_score;
  j["label"] = rep.result.label;
  const auto& agg = rep.result.aggregate;
  j["aggregate"] = {{"domain", {agg.domain().lo, agg.domain().hi}}, {"membership", std::vector<double>(agg.membership().begin(), agg.membership().end())}};
  return j;
}

inline std::string dump(const EvaluationReport& rep, const rubric::Rubric* rub = nullptr) {
  return to_json(rep, rub).dump(2) + "\n";
}

inline EvaluationReport from_json(const nlohmann::json& j) {
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ConfigError(std::string("missing '") + key + "'", std::string("/") + key);
    return j[key];
  };
  if (!j.is_object()) throw ConfigError("report must be an object", "");
  if (need("report_version") != kReportVersion) throw ConfigError("unsupported report_version", "/report_version");
  EvaluationReport rep;
  rep.project = need("project");
  rep.rubric = need("rubric").get<std::string>();
  if (j.contains("metrics")) rep.metrics = metrics::report_from_json(j["metrics"]);
  for (const auto& [k, v] : need("criterion_scores").items()) rep.result.criterion_scores[k] = v.get<double>();
  for (const auto& f : need("fired_rules")) {
    rep.result.fired_rules.push_back({f.at("id").get<int>(), f.at("strength").get<double>()});
  }
  rep.result.success_score = need("success_score").get<double>();
  rep.result.label = need("label").get<std::string>();
  const auto& agg = need("aggregate");
  const auto& dom = agg.at("domain");
  rep.result.aggregate = fuzzy::SampledSet({dom.at(0).get<double>(), dom.at(1).get<double>()},
                                           agg.at("membership").get<std::vector<double>>());
  return rep;
}

namespace detail {

inline std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace detail

/// Sections: Project, Criterion scores, Fired rules, Result.
inline std::string to_markdown(const EvaluationReport& rep, const rubric::Rubric* rub = nullptr) {
  std::ostringstream md;
  md << "# Evaluation report\n\n## Project\n\n";
  if (rep.project.is_object() && !rep.project.empty()) {
    for (const auto& [k, v] : rep.project.items()) md << "- " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  } else {
    md << "- (none)\n";
  }
  md << "- rubric: " << rep.rubric << "\n";
  if (rep.metrics) {
    md << "- files scanned: " << rep.metrics->files_scanned << "\n- classes: " << rep.metrics->class_count
       << "\n- lines: " << rep.metrics->total_lines << "\n";
  }

  md << "\n## Criterion scores\n\n| Criterion | Score |\n|---|---|\n";
  auto title = [&](const std::string& name) {
    if (rub) {
      if (const auto* c = rub->find_criterion(name)) return c->title;
    }
    return name;
  };
  if (rub) {
    for (const auto& c : rub->criteria) {
      auto it = rep.result.criterion_scores.find(c.name);
      if (it != rep.result.criterion_scores.end()) md << "| " << c.title << " | " << detail::fmt(it->second) << " |\n";
    }
  } else {
    for (const auto& [k, v] : rep.result.criterion_scores) md << "| " << title(k) << " | " << detail::fmt(v) << " |\n";
  }

  md << "\n## Fired rules\n\n| Rule | Strength |\n|---|---|\n";
  for (const auto& f : rep.result.fired_rules) {
    md << "| " << f.rule_id;
    if (rub) {
      if (const auto* rule = find_rule(*rub, f.rule_id)) md << ": " << rule_text(*rule);
    }
    md << " | " << detail::fmt(f.strength, 3) << " |\n";
  }

  md << "\n## Result\n\n- score: " << detail::fmt(rep.result.success_score) << "\n- label: " << rep.result.label << "\n";
  if (rep.metrics && !rep.metrics->warnings.empty()) {
    md << "\n## Warnings\n\n";
    for (const auto& w : rep.metrics->warnings) md << "- " << w << "\n";
  }
  return md.str();
}

}  // namespace fuzzyeval::report
