#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzyeval/errors.hpp"
#include "fuzzyeval/fuzzy/membership.hpp"
#include "fuzzyeval/fuzzy/sampled_set.hpp"

namespace fuzzyeval::fuzzy {

/// A named term of a linguistic variable.
struct FuzzySet {
  std::string label;
  MembershipFunction mf;

  bool operator==(const FuzzySet&) const = default;
};

/// Membership degree of one term for a given crisp input.
struct TermDegree {
  std::string label;
  double degree = 0.0;

  bool operator==(const TermDegree&) const = default;
};

using Fuzzified = std::vector<TermDegree>;

inline std::optional<double> degree_of(const Fuzzified& f, std::string_view label) {
  for (const auto& td : f) {
    if (td.label == label) return td.degree;
  }
  return std::nullopt;
}

/// Variable whose values are words. Terms are ordered from worst to best.
///
/// Construction validates that labels are unique, that every breakpoint lies
/// in the domain and that the terms cover the domain (every point has some
/// term with positive membership).
class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, Interval domain, std::vector<FuzzySet> terms)
      : name_(std::move(name)), domain_(domain), terms_(std::move(terms)) {
    validate();
  }

  const std::string& name() const noexcept { return name_; }
  const Interval& domain() const noexcept { return domain_; }
  const std::vector<FuzzySet>& terms() const noexcept { return terms_; }

  /// Index of `label` in the term order, or nullopt.
  std::optional<std::size_t> index_of(std::string_view label) const {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].label == label) return i;
    }
    return std::nullopt;
  }

  const FuzzySet& term(std::string_view label) const {
    auto idx = index_of(label);
    if (!idx) throw ConfigError("variable '" + name_ + "' has no term '" + std::string(label) + "'");
    return terms_[*idx];
  }

  double clamp(double x) const noexcept { return std::clamp(x, domain_.lo, domain_.hi); }

  /// One degree per term, in term order. Out-of-domain inputs are clamped.
  Fuzzified fuzzify(double x) const {
    x = clamp(x);
    Fuzzified out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.label, t.mf(x)});
    return out;
  }

  bool operator==(const LinguisticVariable&) const = default;

 private:
  void validate() const {
    if (!(domain_.lo < domain_.hi)) throw ConfigError("variable '" + name_ + "': domain must have lo < hi");
    if (terms_.empty()) throw ConfigError("variable '" + name_ + "' has no terms");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      if (t.label.empty()) throw ConfigError("variable '" + name_ + "': empty term label");
      for (std::size_t j = 0; j < i; ++j) {
        if (terms_[j].label == t.label) {
          throw ConfigError("variable '" + name_ + "': duplicate term '" + t.label + "'");
        }
      }
      if (t.mf.left() < domain_.lo || t.mf.right() > domain_.hi) {
        throw ConfigError("variable '" + name_ + "': term '" + t.label + "' breakpoints leave the domain");
      }
    }
    // Coverage only fails where every term is zero; candidates are the
    // breakpoints themselves and the midpoints between consecutive ones.
    std::vector<double> probes{domain_.lo, domain_.hi};
    for (const auto& t : terms_) {
      for (double p : t.mf.params()) probes.push_back(p);
    }
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    const std::size_t n = probes.size();
    for (std::size_t i = 0; i + 1 < n; ++i) probes.push_back(0.5 * (probes[i] + probes[i + 1]));
    for (double x : probes) {
      bool covered = std::any_of(terms_.begin(), terms_.end(), [x](const FuzzySet& t) { return t.mf(x) > 0.0; });
      if (!covered) {
        throw ConfigError("variable '" + name_ + "': no term covers x = " + std::to_string(x));
      }
    }
  }

  std::string name_;
  Interval domain_;
  std::vector<FuzzySet> terms_;
};

inline Fuzzified fuzzify(const LinguisticVariable& v, double x) { return v.fuzzify(x); }

}  // namespace fuzzyeval::fuzzy
