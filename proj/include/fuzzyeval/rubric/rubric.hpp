#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyeval/errors.hpp"
#include "fuzzyeval/fuzzy/inference.hpp"
#include "fuzzyeval/fuzzy/linguistic_variable.hpp"
#include "fuzzyeval/fuzzy/rule.hpp"
#include "fuzzyeval/normalizer/normalizer.hpp"

namespace fuzzyeval::rubric {

using fuzzy::LinguisticVariable;
using fuzzy::Rule;

enum class Weight { low = 1, medium = 2, high = 3 };

inline std::string_view to_string(Weight w) {
  switch (w) {
    case Weight::low:
      return "Low";
    case Weight::medium:
      return "Medium";
    case Weight::high:
      return "High";
  }
  return "";
}

inline std::optional<Weight> parse_weight(std::string_view s) {
  if (s == "Low") return Weight::low;
  if (s == "Medium") return Weight::medium;
  if (s == "High") return Weight::high;
  return std::nullopt;
}

/// An evaluation criterion. `variable.name()` equals `name`; `title` is the
/// human-readable label ("Clean Code").
struct Criterion {
  std::string name;
  std::string title;
  LinguisticVariable variable;
  Weight weight = Weight::medium;

  bool operator==(const Criterion&) const = default;
};

enum class RuleSource { table, weighted };

/// A complete, validated evaluation rubric. Immutable once built; share it
/// freely between threads.
struct Rubric {
  std::string name;
  std::string description;
  std::vector<Criterion> criteria;
  LinguisticVariable output;
  std::string output_title;
  std::vector<Rule> rules;
  RuleSource rule_source = RuleSource::table;
  bool exhaustive = false;
  fuzzy::InferenceOptions inference;
  std::vector<normalizer::CriterionProfile> profiles;

  std::vector<LinguisticVariable> input_variables() const {
    std::vector<LinguisticVariable> vars;
    vars.reserve(criteria.size());
    for (const auto& c : criteria) vars.push_back(c.variable);
    return vars;
  }

  const Criterion* find_criterion(std::string_view n) const {
    for (const auto& c : criteria) {
      if (c.name == n) return &c;
    }
    return nullptr;
  }

  bool operator==(const Rubric&) const = default;
};

/// Crisp criterion scores for one project, each on [0,100].
struct ProjectScores {
  double clean_code = 0.0;
  double functionality = 0.0;
  double inheritance = 0.0;

  fuzzy::CrispInputs to_inputs() const {
    return {{"clean_code", clean_code}, {"functionality", functionality}, {"inheritance", inheritance}};
  }
};

struct EvaluationResult {
  fuzzy::CrispInputs criterion_scores;
  double success_score = 0.0;
  /// Rules with positive firing strength, in rule order.
  std::vector<fuzzy::RuleFiring> fired_rules;
  fuzzy::SampledSet aggregate = fuzzy::SampledSet::empty({0.0, 1.0}, 2);
  std::string label;

  bool operator==(const EvaluationResult&) const = default;
};

// --- rule base checks ------------------------------------------------------

/// Unique ids, known variables/terms, one clause per criterion at most. Throws ConfigError.
inline void validate_rule_base(const std::vector<Criterion>& criteria, const LinguisticVariable& output,
                               const std::vector<Rule>& rules) {
  std::vector<LinguisticVariable> vars;
  for (const auto& c : criteria) vars.push_back(c.variable);
  fuzzy::validate_rules(vars, output, rules);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (rules[j].id == rules[i].id) {
        throw ConfigError("duplicate rule id " + std::to_string(rules[i].id), "/rules/" + std::to_string(i) + "/id");
      }
    }
    const auto& ants = rules[i].antecedents;
    for (std::size_t a = 0; a < ants.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        if (ants[a].variable == ants[b].variable) {
          throw ConfigError("rule " + std::to_string(rules[i].id) + " names '" + ants[a].variable + "' twice",
                            "/rules/" + std::to_string(i) + "/if");
        }
      }
    }
  }
}

/// Encodes a term combination (one term index per criterion) as a mixed-radix integer.
inline std::size_t combination_key(const std::vector<std::size_t>& idx, const std::vector<Criterion>& criteria) {
  std::size_t key = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) key = key * criteria[k].variable.terms().size() + idx[k];
  return key;
}

/// Exhaustive means: every rule names every criterion without hedges, and
/// each combination of terms appears exactly once. Throws ConfigError naming
/// the first duplicate or missing combination.
inline void check_exhaustive(const std::vector<Criterion>& criteria, const std::vector<Rule>& rules) {
  std::size_t total = 1;
  for (const auto& c : criteria) total *= c.variable.terms().size();
  std::vector<int> owner(total, 0);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto& r = rules[i];
    const std::string where = "/rules/" + std::to_string(i);
    if (r.antecedents.size() != criteria.size()) {
      throw ConfigError("exhaustive rubric requires every rule to name every criterion", where + "/if");
    }
    std::vector<std::size_t> idx(criteria.size());
    for (std::size_t k = 0; k < criteria.size(); ++k) {
      const auto& clause = r.antecedents[k];
      if (clause.variable != criteria[k].name) {
        throw ConfigError("clause order must follow criteria order", where + "/if");
      }
      if (!clause.hedge.empty()) throw ConfigError("exhaustive rubric rules may not use hedges", where + "/if");
      idx[k] = *criteria[k].variable.index_of(clause.term);
    }
    const auto key = combination_key(idx, criteria);
    if (owner[key] != 0) {
      throw ConfigError("rules " + std::to_string(owner[key]) + " and " + std::to_string(r.id) +
                            " cover the same term combination",
                        where);
    }
    owner[key] = r.id;
  }
  for (std::size_t key = 0; key < total; ++key) {
    if (owner[key] != 0) continue;
    std::string combo;
    std::size_t rem = key;
    std::vector<std::string> parts(criteria.size());
    for (std::size_t k = criteria.size(); k-- > 0;) {
      const auto n = criteria[k].variable.terms().size();
      parts[k] = criteria[k].variable.terms()[rem % n].label;
      rem /= n;
    }
    for (const auto& p : parts) combo += (combo.empty() ? "" : ", ") + p;
    throw ConfigError("no rule covers (" + combo + ")", "/rules");
  }
}

/// A pair of rules where `better` dominates `worse` term-wise on every
/// criterion yet concludes on a strictly worse output term.
struct MonotonicityViolation {
  int better = 0;
  int worse = 0;

  bool operator==(const MonotonicityViolation&) const = default;
};

/// Pairwise scan of hedge-free, fully specified rules. Reports, never repairs.
inline std::vector<MonotonicityViolation> find_monotonicity_violations(const std::vector<Criterion>& criteria,
                                                                      const LinguisticVariable& output,
                                                                      const std::vector<Rule>& rules) {
  struct Row {
    int id;
    std::vector<std::size_t> idx;
    std::size_t out;
  };
  std::vector<Row> rows;
  for (const auto& r : rules) {
    if (r.antecedents.size() != criteria.size() || !r.consequent.hedge.empty()) continue;
    Row row{r.id, {}, *output.index_of(r.consequent.term)};
    bool plain = true;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
      const auto& c = r.antecedents[k];
      if (!c.hedge.empty() || c.variable != criteria[k].name) plain = false;
      if (plain) row.idx.push_back(*criteria[k].variable.index_of(c.term));
    }
    if (plain) rows.push_back(std::move(row));
  }
  std::vector<MonotonicityViolation> out;
  for (const auto& a : rows) {
    for (const auto& b : rows) {
      if (a.idx == b.idx) continue;
      bool dominates = true;
      for (std::size_t k = 0; k < a.idx.size(); ++k) dominates = dominates && a.idx[k] >= b.idx[k];
      if (dominates && a.out < b.out) out.push_back({a.id, b.id});
    }
  }
  return out;
}

// --- weighted rule generation ----------------------------------------------

/// Output term index for one antecedent combination under weighted generation.
///
/// index = round_half_up((m - 1) * sum(w_k * i_k / (n_k - 1)) / sum(w_k)),
/// with weights Low=1, Medium=2, High=3, i_k the term index on criterion k
/// (worst = 0), n_k its term count and m the output term count. Evaluated in
/// exact integer arithmetic.
inline std::size_t weighted_consequent_index(const std::vector<Criterion>& criteria,
                                             const std::vector<std::size_t>& term_index, std::size_t output_terms) {
  std::int64_t lcm = 1;
  for (const auto& c : criteria) lcm = std::lcm(lcm, static_cast<std::int64_t>(c.variable.terms().size() - 1));
  std::int64_t num = 0;
  std::int64_t weight_sum = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto w = static_cast<std::int64_t>(criteria[k].weight);
    const auto span = static_cast<std::int64_t>(criteria[k].variable.terms().size() - 1);
    num += w * static_cast<std::int64_t>(term_index[k]) * (lcm / span);
    weight_sum += w;
  }
  num *= static_cast<std::int64_t>(output_terms - 1);
  const std::int64_t den = lcm * weight_sum;
  return static_cast<std::size_t>((2 * num + den) / (2 * den));
}

/// Exhaustive rule base over all term combinations, consequent from
/// `weighted_consequent_index`. Rule ids run from 1 in odometer order with the
/// last criterion varying fastest.
inline std::vector<Rule> generate_weighted_rules(const std::vector<Criterion>& criteria,
                                                 const LinguisticVariable& output) {
  if (criteria.empty()) throw ConfigError("weighted rule generation needs at least one criterion", "/criteria");
  for (const auto& c : criteria) {
    if (c.variable.terms().size() < 2) {
      throw ConfigError("criterion '" + c.name + "' needs at least two terms for weighted generation", "/criteria");
    }
  }
  if (output.terms().empty()) throw ConfigError("output variable has no terms", "/output");

  std::vector<Rule> rules;
  std::vector<std::size_t> idx(criteria.size(), 0);
  int id = 1;
  while (true) {
    Rule r;
    r.id = id++;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
      r.antecedents.push_back({criteria[k].name, criteria[k].variable.terms()[idx[k]].label, {}});
    }
    const auto out = weighted_consequent_index(criteria, idx, output.terms().size());
    r.consequent = {output.name(), output.terms()[out].label, {}};
    rules.push_back(std::move(r));

    std::size_t k = criteria.size();
    while (k > 0) {
      --k;
      if (++idx[k] < criteria[k].variable.terms().size()) break;
      idx[k] = 0;
      if (k == 0) return rules;
    }
  }
}

// --- evaluation ------------------------------------------------------------

/// Output term with the largest membership at `x`; ties go to the better (later) term.
inline std::string best_label(const LinguisticVariable& output, double x) {
  std::size_t best = 0;
  double best_mu = -1.0;
  for (std::size_t i = 0; i < output.terms().size(); ++i) {
    const double mu = output.terms()[i].mf(x);
    if (mu >= best_mu) {
      best_mu = mu;
      best = i;
    }
  }
  return output.terms()[best].label;
}

/// Runs the rubric's inference on crisp criterion scores. `resolution`
/// overrides the rubric's default when non-zero.
inline EvaluationResult evaluate(const Rubric& rubric, const fuzzy::CrispInputs& scores, std::size_t resolution = 0) {
  for (const auto& c : rubric.criteria) {
    auto it = scores.find(c.name);
    if (it == scores.end()) throw ConfigError("no score supplied for criterion '" + c.name + "'");
  }
  auto options = rubric.inference;
  if (resolution != 0) options.resolution = resolution;
  const auto vars = rubric.input_variables();
  auto trace = fuzzy::infer(vars, rubric.output, rubric.rules, scores, options);

  EvaluationResult result{.criterion_scores = {}, .success_score = 0.0, .fired_rules = {},
                          .aggregate = std::move(trace.aggregate), .label = {}};
  for (const auto& c : rubric.criteria) result.criterion_scores[c.name] = c.variable.clamp(scores.find(c.name)->second);
  for (const auto& f : trace.firings) {
    if (f.strength > 0.0) result.fired_rules.push_back(f);
  }
  result.success_score = fuzzy::defuzzify_centroid(result.aggregate);
  result.label = best_label(rubric.output, result.success_score);
  return result;
}

inline EvaluationResult evaluate_project(const ProjectScores& scores, const Rubric& rubric, std::size_t resolution = 0) {
  for (double v : {scores.clean_code, scores.functionality, scores.inheritance}) {
    if (!(v >= 0.0 && v <= 100.0)) throw ContractError("criterion scores must lie in [0,100]");
  }
  return evaluate(rubric, scores.to_inputs(), resolution);
}

}  // namespace fuzzyeval::rubric
