#pragma once

#include <string>
#include <vector>

#include "fuzzyeval/fuzzy/hedge.hpp"

namespace fuzzyeval::fuzzy {

/// "variable is [hedge] term".
struct Clause {
  std::string variable;
  std::string term;
  Hedge hedge;

  bool operator==(const Clause&) const = default;
};

/// IF clause AND clause ... THEN consequent.
struct Rule {
  int id = 0;
  std::vector<Clause> antecedents;
  Clause consequent;

  bool operator==(const Rule&) const = default;
};

}  // namespace fuzzyeval::fuzzy
