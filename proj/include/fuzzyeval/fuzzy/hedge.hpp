#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyeval/errors.hpp"

namespace fuzzyeval::fuzzy {

enum class HedgeKind { very, more_or_less, negation };

inline std::string_view to_string(HedgeKind kind) {
  switch (kind) {
    case HedgeKind::very:
      return "very";
    case HedgeKind::more_or_less:
      return "more-or-less";
    case HedgeKind::negation:
      return "not";
  }
  return "";
}

inline std::optional<HedgeKind> parse_hedge_word(std::string_view word) {
  if (word == "very") return HedgeKind::very;
  if (word == "more-or-less") return HedgeKind::more_or_less;
  if (word == "not") return HedgeKind::negation;
  return std::nullopt;
}

inline double apply_atomic(HedgeKind kind, double u) {
  switch (kind) {
    case HedgeKind::very:
      return u * u;
    case HedgeKind::more_or_less:
      return std::sqrt(u);
    case HedgeKind::negation:
      return 1.0 - u;
  }
  return u;
}

/// A linguistic modifier, possibly composed.
///
/// Words are kept in reading order: "not very" is {negation, very}. The
/// innermost (rightmost) word applies first, so "not very" maps u to 1 - u^2.
/// An empty hedge is the identity.
class Hedge {
 public:
  Hedge() = default;
  explicit Hedge(std::vector<HedgeKind> words) : words_(std::move(words)) {}
  Hedge(std::initializer_list<HedgeKind> words) : words_(words) {}

  /// `outer` wrapped around `inner`: compose(not, very) == "not very".
  static Hedge compose(HedgeKind outer, const Hedge& inner) {
    std::vector<HedgeKind> words{outer};
    words.insert(words.end(), inner.words_.begin(), inner.words_.end());
    return Hedge(std::move(words));
  }

  bool empty() const noexcept { return words_.empty(); }
  const std::vector<HedgeKind>& words() const noexcept { return words_; }

  double operator()(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) {
      throw ContractError("hedge input must lie in [0,1], got " + std::to_string(u));
    }
    for (auto it = words_.rbegin(); it != words_.rend(); ++it) u = apply_atomic(*it, u);
    return u;
  }

  std::string to_string() const {
    std::string out;
    for (auto w : words_) {
      if (!out.empty()) out += ' ';
      out += fuzzy::to_string(w);
    }
    return out;
  }

  bool operator==(const Hedge&) const = default;

 private:
  std::vector<HedgeKind> words_;
};

inline double apply_hedge(const Hedge& h, double u) { return h(u); }

}  // namespace fuzzyeval::fuzzy
