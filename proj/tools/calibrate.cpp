// Grid search over the Average, Good and Very Good output terms of the bundled
// rubric against the four reference cases. Prints the best candidates and the
// residuals of the shipped partition.

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "fuzzyeval/rubric/config.hpp"

using namespace fuzzyeval;

namespace {

struct Case {
  rubric::ProjectScores in;
  double target;
  double tolerance;
};

const std::array<Case, 4> kCases{{
    {{61, 74, 68}, 63.27, 2.0},
    {{100, 82, 84}, 92.0, 5.0},
    {{67, 34, 100}, 64.0, 5.0},
    {{100, 63, 100}, 91.0, 5.0},
}};

// Firing strengths do not depend on the output partition, so each case
// reduces to one clip level per output term.
using Clips = std::map<std::string, double>;

Clips clip_levels(const rubric::Rubric& rub, const rubric::ProjectScores& s) {
  const auto vars = rub.input_variables();
  Clips out;
  for (const auto& r : rub.rules) {
    const double w = fuzzy::firing_strength(r, vars, s.to_inputs(), rub.inference.conjunction);
    if (w > 0.0) out[r.consequent.term] = std::max(out[r.consequent.term], w);
  }
  return out;
}

struct Partition {
  std::array<double, 4> average;
  std::array<double, 3> good;
  std::array<double, 2> very_good;  // left foot, shoulder; flat to 100
};

std::string describe(const Partition& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "A(%g,%g,%g,%g) G(%g,%g,%g) VG(%g,%g,100,100)", p.average[0], p.average[1],
                p.average[2], p.average[3], p.good[0], p.good[1], p.good[2], p.very_good[0], p.very_good[1]);
  return buf;
}

class Scorer {
 public:
  Scorer(const rubric::Rubric& rub, std::size_t resolution) : rub_(rub), n_(resolution) {
    for (const auto& c : kCases) clips_.push_back(clip_levels(rub, c.in));
    for (const auto& t : rub.output.terms()) fixed_.emplace(t.label, t.mf);
  }

  double centroid(std::size_t k, const Partition& p) const {
    const auto a = fuzzy::MembershipFunction::trapezoidal(p.average[0], p.average[1], p.average[2], p.average[3]);
    const auto g = fuzzy::MembershipFunction::triangular(p.good[0], p.good[1], p.good[2]);
    const auto vg = fuzzy::MembershipFunction::trapezoidal(p.very_good[0], p.very_good[1], 100, 100);
    std::vector<std::pair<const fuzzy::MembershipFunction*, double>> parts;
    for (const auto& [term, w] : clips_[k]) {
      const fuzzy::MembershipFunction* mf = term == "Average" ? &a : term == "Good" ? &g : term == "Very Good" ? &vg : &fixed_.at(term);
      parts.emplace_back(mf, w);
    }
    double num = 0.0, den = 0.0;
    const auto dom = rub_.output.domain();
    for (std::size_t i = 0; i < n_; ++i) {
      const double x = fuzzy::SampledSet::x_at(dom, n_, i);
      double m = 0.0;
      for (const auto& [mf, w] : parts) m = std::max(m, std::min(w, (*mf)(x)));
      num += x * m;
      den += m;
    }
    return den > 0.0 ? num / den : std::nan("");
  }

  // Largest residual in units of each case's tolerance.
  double error(const Partition& p, std::array<double, 4>* scores = nullptr) const {
    double worst = 0.0;
    for (std::size_t k = 0; k < kCases.size(); ++k) {
      const double s = centroid(k, p);
      if (scores) (*scores)[k] = s;
      worst = std::max(worst, std::abs(s - kCases[k].target) / kCases[k].tolerance);
    }
    return worst;
  }

  double case_error(std::size_t k, const Partition& p) const {
    return std::abs(centroid(k, p) - kCases[k].target) / kCases[k].tolerance;
  }

  const Clips& clips(std::size_t k) const { return clips_[k]; }

 private:
  const rubric::Rubric& rub_;
  std::size_t n_;
  std::vector<Clips> clips_;
  std::map<std::string, fuzzy::MembershipFunction> fixed_;
};

Partition shipped(const rubric::Rubric& rub) {
  auto params = [&](const char* label) { return rub.output.term(label).mf.params(); };
  const auto a = params("Average");
  const auto g = params("Good");
  const auto vg = params("Very Good");
  return {{a[0], a[1], a[2], a[3]}, {g[0], g[1], g[2]}, {vg[0], vg[1]}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid search for the output partition of the bundled rubric", "fuzzyeval-calibrate"};
  double step = 5.0;
  std::size_t top = 5;
  std::size_t resolution = 1001;
  app.add_option("--step", step, "Grid spacing in output units")->check(CLI::Range(1.0, 25.0));
  app.add_option("--top", top, "Candidates to print");
  app.add_option("--resolution", resolution, "Samples over the output domain")->check(CLI::Range(101, 100001));
  CLI11_PARSE(app, argc, argv);

  const auto& rub = rubric::load_reference_rubric();
  const Scorer scorer(rub, resolution);

  std::printf("clip levels per case:\n");
  for (std::size_t k = 0; k < kCases.size(); ++k) {
    std::printf("  (%g, %g, %g):", kCases[k].in.clean_code, kCases[k].in.functionality, kCases[k].in.inheritance);
    for (const auto& [t, w] : scorer.clips(k)) std::printf(" %s %.3f", t.c_str(), w);
    std::printf("\n");
  }

  std::vector<double> grid;
  for (double x = 30.0; x <= 100.0 + 1e-9; x += step) grid.push_back(x);

  // (67, 34, 100) only fires Average; (100, 82, 84) and (100, 63, 100) only Very Good.
  // Screen those terms alone before combining.
  const Partition base = shipped(rub);
  std::vector<std::array<double, 4>> averages;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j)
      for (std::size_t k = j; k < grid.size(); ++k)
        for (std::size_t l = k + 1; l < grid.size(); ++l) {
          Partition p = base;
          p.average = {grid[i], grid[j], grid[k], grid[l]};
          if (scorer.case_error(2, p) <= 1.0) averages.push_back(p.average);
        }
  std::vector<std::array<double, 2>> very_goods;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      Partition p = base;
      p.very_good = {grid[i], grid[j]};
      if (scorer.case_error(1, p) <= 1.0 && scorer.case_error(3, p) <= 1.0) very_goods.push_back(p.very_good);
    }

  struct Ranked {
    double error;
    double squares;
    Partition p;
  };
  std::vector<Ranked> passing;
  std::size_t tried = 0;
  for (const auto& a : averages) {
    for (const auto& vg : very_goods) {
      for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j)
          for (std::size_t k = j + 1; k < grid.size(); ++k) {
            // Neighbouring terms overlap and stay in order.
            if (grid[i] > a[3] || vg[0] > grid[k]) continue;
            if (!(a[0] < grid[i] && grid[i] < vg[0] && a[2] < grid[j] && grid[j] < vg[1])) continue;
            const Partition p{a, {grid[i], grid[j], grid[k]}, vg};
            ++tried;
            std::array<double, 4> s{};
            const double e = scorer.error(p, &s);
            if (e > 1.0) continue;
            double sq = 0.0;
            for (std::size_t c = 0; c < kCases.size(); ++c) sq += std::pow((s[c] - kCases[c].target) / kCases[c].tolerance, 2);
            passing.push_back({e, sq, p});
          }
    }
  }
  std::sort(passing.begin(), passing.end(), [](const Ranked& x, const Ranked& y) {
    return x.error != y.error ? x.error < y.error : x.squares < y.squares;
  });

  std::printf("\ngrid step %g: %zu Average shapes and %zu Very Good shapes pass their own cases\n", step,
              averages.size(), very_goods.size());
  std::printf("%zu combined partitions tried, %zu within every tolerance\n", tried, passing.size());
  for (std::size_t i = 0; i < std::min(top, passing.size()); ++i) {
    std::printf("  %zu. error %.3f  %s\n", i + 1, passing[i].error, describe(passing[i].p).c_str());
  }

  std::array<double, 4> scores{};
  const double e = scorer.error(base, &scores);
  const auto rank = std::count_if(passing.begin(), passing.end(), [&](const Ranked& r) { return r.error < e - 1e-12; });
  std::printf("\nshipped: %s\n", describe(base).c_str());
  for (std::size_t k = 0; k < kCases.size(); ++k) {
    std::printf("  (%g, %g, %g) -> %.2f, target %.2f, residual %+.2f (tolerance %g)\n", kCases[k].in.clean_code,
                kCases[k].in.functionality, kCases[k].in.inheritance, scores[k], kCases[k].target,
                scores[k] - kCases[k].target, kCases[k].tolerance);
  }
  std::printf("  error %.3f, rank %zu of %zu passing candidates\n", e, static_cast<std::size_t>(rank) + 1, passing.size());
  return e <= 1.0 ? 0 : 1;
}
