#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fuzzyeval/metrics/compute.hpp"
#include "fuzzyeval/normalizer/normalizer.hpp"
#include "fuzzyeval/rubric/rubric.hpp"

namespace fuzzyeval {

/// Crisp input per rubric criterion, from that criterion's profile. Throws
/// ConfigError when a criterion has no profile.
inline fuzzy::CrispInputs criterion_scores(const metrics::MetricsReport& report, const rubric::Rubric& r,
                                           std::vector<std::string>* warnings = nullptr) {
  fuzzy::CrispInputs out;
  for (const auto& c : r.criteria) {
    const auto* p = normalizer::find_profile(r.profiles, c.name);
    if (!p) throw ConfigError("no scoring profile for criterion '" + c.name + "'", "/profiles");
    out[c.name] = normalizer::score_criterion(report, *p, warnings);
  }
  return out;
}

struct ScoredProject {
  metrics::MetricsReport metrics;
  fuzzy::CrispInputs scores;
};

/// Extraction and normalization; inference is left to the caller so a rule
/// base that does not fire can still show the scores it was given.
inline ScoredProject score_tree(const std::filesystem::path& root, const rubric::Rubric& r,
                                const metrics::ExtractorOptions& opt = {}) {
  ScoredProject out;
  out.metrics = metrics::analyze_project(root, opt);
  out.scores = criterion_scores(out.metrics, r, &out.metrics.warnings);
  return out;
}

}  // namespace fuzzyeval
