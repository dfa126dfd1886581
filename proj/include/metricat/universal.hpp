#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "metricat/budget.hpp"
#include "metricat/colimit.hpp"

namespace metricat {

enum class UniversalFailure { SquareNotEpsCommutative, NoMediator, NotUnique };

const char* to_string(UniversalFailure failure);

struct UniversalCounterexample {
  UniversalFailure kind;
  /// Index into the test family and the target itself; unset for a square failure.
  std::optional<std::size_t> target_index;
  SpacePtr target;
  std::vector<std::size_t> f_prime;  // C -> target
  std::vector<std::size_t> g_prime;  // B -> target
  /// Up to two mediating maps found (two means uniqueness failed).
  std::vector<std::vector<std::size_t>> mediators;
};

struct UniversalReport {
  bool pass = true;
  std::uint64_t cospans_checked = 0;
  std::optional<UniversalCounterexample> counterexample;
};

/// Brute-force check of the eps-pushout universal property of `candidate`
/// over the span (f, g). First the candidate square itself must commute up
/// to eps. Then for every target D in `targets` and every cospan
/// g' : B -> D, f' : C -> D with hom_dist(f'∘g, g'∘f) <= eps, the maps
/// t : apex -> D with t∘leg_f = f' and t∘leg_g = g' are enumerated; exactly
/// one must exist. Cospans are generated g' first, then f', each in
/// lexicographic order, and the first failure in (target, g', f') order is
/// reported. Targets are checked in parallel when exec is Parallel; the
/// report is identical either way.
UniversalReport verify_universal(const EpsPushoutResult& candidate, const MetMap& f, const MetMap& g,
                                 const std::vector<SpacePtr>& targets, const Budget& budget = {},
                                 Exec exec = Exec::Serial);

/// Same check for an eps-coequalizer of f, g : A -> B: every h' : B -> D
/// with h'∘f ~eps h'∘g must factor uniquely as t∘leg.
UniversalReport verify_coequalizer(const Coequalizer& candidate, const MetMap& f, const MetMap& g,
                                   const std::vector<SpacePtr>& targets, const Budget& budget = {});

}  // namespace metricat
