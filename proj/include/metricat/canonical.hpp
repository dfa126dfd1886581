#pragma once

#include <vector>

#include "metricat/budget.hpp"
#include "metricat/space.hpp"

namespace metricat {

struct CanonicalForm {
  Space space;
  /// order[k] is the original point placed at position k.
  std::vector<std::size_t> order;
};

/// Deterministic representative of the isometry class of `space`.
///
/// Points are first split into classes by iterated distance-profile
/// refinement (an isometry invariant). The search then fills positions in
/// class order, individualizing one point at a time and refining again,
/// and keeps the permutation whose upper-triangle sequence (column by
/// column) is lexicographically smallest. Candidates that are twins of an
/// already explored sibling are skipped. Throws BudgetExceeded when the
/// space exceeds `budget.max_points` or the search exceeds `budget.max_nodes`.
CanonicalForm canonical_form(const Space& space, const Budget& budget = {});

bool isomorphic(const Space& a, const Space& b, const Budget& budget = {});

/// Lexicographic order on canonical spaces: by size, then by the
/// column-major upper triangle.
bool canonical_less(const Space& a, const Space& b);

}  // namespace metricat
