#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fuzzyeval/errors.hpp"

namespace fuzzyeval::fuzzy {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  double width() const noexcept { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// A fuzzy set discretized on `resolution` uniformly spaced points spanning
/// `domain`, endpoints included. Sample i sits at
/// lo + (hi - lo) * i / (resolution - 1).
class SampledSet {
 public:
  SampledSet(Interval domain, std::vector<double> membership)
      : domain_(domain), mu_(std::move(membership)) {
    if (!(domain_.lo < domain_.hi)) throw ContractError("sampled set domain must have lo < hi");
    if (mu_.size() < 2) throw ContractError("sampled set needs at least 2 samples");
    for (double m : mu_) {
      if (!(m >= 0.0 && m <= 1.0)) throw ContractError("sampled membership must lie in [0,1]");
    }
  }

  /// All-zero set.
  static SampledSet empty(Interval domain, std::size_t resolution) {
    return SampledSet(domain, std::vector<double>(resolution, 0.0));
  }

  template <class Fn>
  static SampledSet sample(Interval domain, std::size_t resolution, Fn&& mu) {
    if (resolution < 2) throw ContractError("resolution must be at least 2");
    std::vector<double> values(resolution);
    for (std::size_t i = 0; i < resolution; ++i) values[i] = mu(x_at(domain, resolution, i));
    return SampledSet(domain, std::move(values));
  }

  static double x_at(Interval domain, std::size_t resolution, std::size_t i) noexcept {
    if (i + 1 == resolution) return domain.hi;
    return domain.lo + domain.width() * static_cast<double>(i) / static_cast<double>(resolution - 1);
  }

  const Interval& domain() const noexcept { return domain_; }
  std::size_t resolution() const noexcept { return mu_.size(); }
  std::span<const double> membership() const noexcept { return mu_; }
  double x(std::size_t i) const noexcept { return x_at(domain_, mu_.size(), i); }
  double mu(std::size_t i) const noexcept { return mu_[i]; }
  double step() const noexcept { return domain_.width() / static_cast<double>(mu_.size() - 1); }

  double height() const noexcept { return *std::max_element(mu_.begin(), mu_.end()); }
  bool is_empty() const noexcept { return height() <= 0.0; }

  bool same_grid(const SampledSet& other) const noexcept {
    return domain_ == other.domain_ && mu_.size() == other.mu_.size();
  }

  bool operator==(const SampledSet&) const = default;

 private:
  Interval domain_;
  std::vector<double> mu_;
};

namespace detail {

template <class Op>
SampledSet combine(const SampledSet& a, const SampledSet& b, Op op) {
  if (!a.same_grid(b)) throw ContractError("sampled sets must share domain and resolution");
  std::vector<double> out(a.resolution());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a.mu(i), b.mu(i));
  return SampledSet(a.domain(), std::move(out));
}

}  // namespace detail

inline SampledSet set_union(const SampledSet& a, const SampledSet& b) {
  return detail::combine(a, b, [](double x, double y) { return std::max(x, y); });
}

inline SampledSet set_intersection(const SampledSet& a, const SampledSet& b) {
  return detail::combine(a, b, [](double x, double y) { return std::min(x, y); });
}

/// Crisp set {x : mu(x) >= alpha} as disjoint closed intervals, in increasing
/// order. Each interval runs from the first to the last sample of a maximal
/// run of qualifying samples, so an isolated sample yields a point interval.
inline std::vector<Interval> alpha_cut(const SampledSet& s, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ContractError("alpha must satisfy 0 < alpha <= 1");
  std::vector<Interval> cut;
  const std::size_t n = s.resolution();
  std::size_t i = 0;
  while (i < n) {
    if (s.mu(i) < alpha) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && s.mu(j + 1) >= alpha) ++j;
    cut.push_back({s.x(i), s.x(j)});
    i = j + 1;
  }
  return cut;
}

/// Support: samples with positive membership.
inline std::vector<Interval> support(const SampledSet& s) {
  std::vector<Interval> out;
  const std::size_t n = s.resolution();
  std::size_t i = 0;
  while (i < n) {
    if (s.mu(i) <= 0.0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && s.mu(j + 1) > 0.0) ++j;
    out.push_back({s.x(i), s.x(j)});
    i = j + 1;
  }
  return out;
}

/// True when x falls inside one of the (sorted, disjoint) intervals.
inline bool covers(std::span<const Interval> intervals, double x) {
  return std::any_of(intervals.begin(), intervals.end(), [x](const Interval& iv) { return iv.contains(x); });
}

}  // namespace fuzzyeval::fuzzy
