#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fuzzyeval/errors.hpp"
#include "fuzzyeval/fuzzy/linguistic_variable.hpp"
#include "fuzzyeval/fuzzy/rule.hpp"
#include "fuzzyeval/fuzzy/sampled_set.hpp"

namespace fuzzyeval::fuzzy {

/// T-norm used to AND antecedent degrees together.
enum class TNorm { minimum, product };

inline constexpr std::size_t kDefaultResolution = 1001;

struct InferenceOptions {
  TNorm conjunction = TNorm::minimum;
  std::size_t resolution = kDefaultResolution;

  bool operator==(const InferenceOptions&) const = default;
};

struct RuleFiring {
  int rule_id = 0;
  double strength = 0.0;

  bool operator==(const RuleFiring&) const = default;
};

/// Result of one Mamdani cycle: one firing entry per rule (in rule order,
/// zeros included) and the max-aggregate of the clipped consequents.
struct InferenceTrace {
  std::vector<RuleFiring> firings;
  SampledSet aggregate;

  bool operator==(const InferenceTrace&) const = default;
};

using CrispInputs = std::map<std::string, double, std::less<>>;

namespace detail {

inline const LinguisticVariable* find_variable(std::span<const LinguisticVariable> vars, std::string_view name) {
  for (const auto& v : vars) {
    if (v.name() == name) return &v;
  }
  return nullptr;
}

}  // namespace detail

/// Checks that every clause names a known variable and term. Throws ConfigError.
inline void validate_rules(std::span<const LinguisticVariable> inputs, const LinguisticVariable& output,
                           std::span<const Rule> rules) {
  if (rules.empty()) throw ConfigError("rule base is empty");
  for (const auto& r : rules) {
    const std::string where = "rule " + std::to_string(r.id);
    if (r.antecedents.empty()) throw ConfigError(where + " has no antecedents");
    for (const auto& c : r.antecedents) {
      const auto* v = detail::find_variable(inputs, c.variable);
      if (!v) throw ConfigError(where + " references unknown variable '" + c.variable + "'");
      if (!v->index_of(c.term)) {
        throw ConfigError(where + " references unknown term '" + c.term + "' of '" + c.variable + "'");
      }
    }
    if (r.consequent.variable != output.name()) {
      throw ConfigError(where + " concludes on '" + r.consequent.variable + "', expected '" + output.name() + "'");
    }
    if (!output.index_of(r.consequent.term)) {
      throw ConfigError(where + " references unknown output term '" + r.consequent.term + "'");
    }
  }
}

/// Degree to which a rule's antecedent holds for the given crisp inputs.
inline double firing_strength(const Rule& rule, std::span<const LinguisticVariable> inputs, const CrispInputs& crisp,
                              TNorm conjunction) {
  double strength = 1.0;
  for (const auto& c : rule.antecedents) {
    const auto* v = detail::find_variable(inputs, c.variable);
    if (!v) throw ConfigError("rule " + std::to_string(rule.id) + " references unknown variable '" + c.variable + "'");
    auto it = crisp.find(c.variable);
    if (it == crisp.end()) throw ConfigError("no crisp input supplied for '" + c.variable + "'");
    const double degree = c.hedge(v->term(c.term).mf(v->clamp(it->second)));
    strength = conjunction == TNorm::minimum ? std::min(strength, degree) : strength * degree;
  }
  return strength;
}

/// Mamdani inference: AND antecedents with the chosen T-norm, clip each
/// consequent at its firing strength (min implication), aggregate with max.
///
/// Throws ConfigError for an invalid rule base or missing input and
/// InferenceError when no rule fires.
inline InferenceTrace infer(std::span<const LinguisticVariable> inputs, const LinguisticVariable& output,
                            std::span<const Rule> rules, const CrispInputs& crisp, const InferenceOptions& options = {}) {
  validate_rules(inputs, output, rules);
  if (options.resolution < 2) throw ContractError("resolution must be at least 2");

  const Interval dom = output.domain();
  const std::size_t n = options.resolution;

  std::vector<RuleFiring> firings;
  firings.reserve(rules.size());
  std::vector<double> agg(n, 0.0);
  bool any_fired = false;

  for (const auto& r : rules) {
    const double strength = firing_strength(r, inputs, crisp, options.conjunction);
    firings.push_back({r.id, strength});
    if (strength <= 0.0) continue;
    any_fired = true;
    const auto& mf = output.term(r.consequent.term).mf;
    for (std::size_t i = 0; i < n; ++i) {
      const double mu = r.consequent.hedge(mf(SampledSet::x_at(dom, n, i)));
      agg[i] = std::max(agg[i], std::min(strength, mu));
    }
  }
  if (!any_fired) throw InferenceError("no rule fired");
  return InferenceTrace{std::move(firings), SampledSet(dom, std::move(agg))};
}

/// Discrete centroid sum(x_i * mu_i) / sum(mu_i). Throws InferenceError on an all-zero set.
inline double defuzzify_centroid(const SampledSet& s) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < s.resolution(); ++i) {
    num += s.x(i) * s.mu(i);
    den += s.mu(i);
  }
  if (den <= 0.0) throw InferenceError("empty aggregate");
  return std::clamp(num / den, s.domain().lo, s.domain().hi);
}

}  // namespace fuzzyeval::fuzzy
