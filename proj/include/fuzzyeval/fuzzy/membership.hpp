#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>

#include "fuzzyeval/errors.hpp"

namespace fuzzyeval::fuzzy {

enum class MfKind { triangular, trapezoidal };

inline std::string_view to_string(MfKind kind) {
  return kind == MfKind::triangular ? "triangular" : "trapezoidal";
}

/// Piecewise-linear membership function over a real domain.
///
/// A triangle (a, b, c) is stored internally as the trapezoid (a, b, b, c) so
/// both shapes share one evaluation path; `kind()` and `params()` still report
/// the shape the caller constructed.
class MembershipFunction {
 public:
  static MembershipFunction triangular(double a, double b, double c) {
    return MembershipFunction(MfKind::triangular, {a, b, b, c});
  }

  static MembershipFunction trapezoidal(double a, double b, double c, double d) {
    return MembershipFunction(MfKind::trapezoidal, {a, b, c, d});
  }

  /// Builds from 3 (triangular) or 4 (trapezoidal) breakpoints.
  static MembershipFunction from_params(MfKind kind, std::span<const double> params) {
    if (kind == MfKind::triangular) {
      if (params.size() != 3) throw ContractError("triangular membership function needs 3 breakpoints");
      return triangular(params[0], params[1], params[2]);
    }
    if (params.size() != 4) throw ContractError("trapezoidal membership function needs 4 breakpoints");
    return trapezoidal(params[0], params[1], params[2], params[3]);
  }

  MfKind kind() const noexcept { return kind_; }

  /// Breakpoints as constructed: 3 for a triangle, 4 for a trapezoid.
  std::span<const double> params() const noexcept {
    if (kind_ == MfKind::triangular) return params_view_;
    return pts_;
  }

  double left() const noexcept { return pts_[0]; }
  double right() const noexcept { return pts_[3]; }
  double core_begin() const noexcept { return pts_[1]; }
  double core_end() const noexcept { return pts_[2]; }

  /// Degree of membership of x.
  ///
  /// Rising flank on [a, b), core on [b, c], falling flank on (c, d]. A
  /// zero-width flank (a == b or c == d) is a vertical edge: the breakpoint
  /// itself takes the core value, so there is never a 0/0.
  double operator()(double x) const noexcept {
    const auto [a, b, c, d] = pts_;
    if (x < a || x > d) return 0.0;
    if (x >= b && x <= c) return 1.0;
    if (x < b) return (x - a) / (b - a);
    return (d - x) / (d - c);
  }

  bool operator==(const MembershipFunction& other) const noexcept {
    return kind_ == other.kind_ && pts_ == other.pts_;
  }

 private:
  MembershipFunction(MfKind kind, std::array<double, 4> pts) : kind_(kind), pts_(pts) {
    for (double p : pts_) {
      if (!std::isfinite(p)) throw ContractError("membership breakpoints must be finite");
    }
    if (!(pts_[0] <= pts_[1] && pts_[1] <= pts_[2] && pts_[2] <= pts_[3])) {
      throw ContractError("membership breakpoints must be non-decreasing");
    }
    params_view_ = {pts_[0], pts_[1], pts_[3]};
  }

  MfKind kind_;
  std::array<double, 4> pts_;
  std::array<double, 3> params_view_{};
};

}  // namespace fuzzyeval::fuzzy
