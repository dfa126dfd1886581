#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metricat/budget.hpp"
#include "metricat/space.hpp"

namespace metricat {

/// Finite stand-in for "all small objects": the squares of the purity
/// testers and the maps of is_eps_mono range over these spaces.
struct TestFamily {
  std::vector<SpacePtr> spaces;
  std::size_t size_cap = 0;

  /// Drops spaces above `size_cap`, replaces each by its canonical form,
  /// removes isometric duplicates and sorts canonically.
  static TestFamily make(const std::vector<SpacePtr>& spaces, std::size_t size_cap, const Budget& budget = {});
};

struct InjectivityResult {
  bool injective = true;
  /// A map g : A -> K with no h : B -> K such that h∘f ~eps g.
  std::optional<std::vector<std::size_t>> witness;
};

/// K is eps-injective to f : A -> B when every g : A -> K has some
/// h : B -> K with hom_dist(h∘f, g) <= eps.
InjectivityResult is_eps_injective(const SpacePtr& k, const MetMap& f, const ExtRat& eps, const Budget& budget = {});

/// max over g : A -> K of min over h : B -> K of hom_dist(h∘f, g), with
/// max over no g = 0 and min over no h = INF. K is eps-injective to f
/// exactly when eps >= this value, so approximate injectivity (every
/// eps > 0) holds exactly when it is 0.
ExtRat injectivity_defect(const SpacePtr& k, const MetMap& f, const Budget& budget = {});

struct InjReport {
  SpacePtr subject;
  std::vector<MetMap> morphisms;
  ExtRat eps;
  std::vector<InjectivityResult> verdicts;  // one per morphism

  bool pass() const;
};

struct InjClassResult {
  std::vector<InjReport> reports;  // one per candidate
  std::vector<std::size_t> members; // indices of candidates that pass
};

/// Filters `candidates` down to the objects eps-injective to every map in `maps`.
InjClassResult inj_class(const std::vector<MetMap>& maps, const ExtRat& eps, const std::vector<SpacePtr>& candidates,
                         const Budget& budget = {}, Exec exec = Exec::Serial);

struct ApproxInjectivity {
  std::vector<std::pair<ExtRat, bool>> grid;  // verdict per grid value
  bool grid_pass = true;
  ExtRat defect;       // see injectivity_defect
  bool exact = false;  // defect == 0
};

/// Evaluates eps-injectivity on a strictly positive, strictly descending
/// grid and also decides approximate injectivity exactly via the defect.
/// Throws std::invalid_argument on a malformed grid.
ApproxInjectivity is_approx_injective(const SpacePtr& k, const MetMap& f, const std::vector<ExtRat>& grid,
                                      const Budget& budget = {});

struct SplitResult {
  bool split = false;
  std::optional<std::vector<std::size_t>> retraction;  // p : L -> K
};

/// f : K -> L is eps-split when some p : L -> K has hom_dist(p∘f, id_K) <= eps.
SplitResult is_eps_split(const MetMap& f, const ExtRat& eps, const Budget& budget = {});

enum class PurityVariant { Pure, Weak, Bare };

const char* to_string(PurityVariant variant);
PurityVariant parse_purity_variant(const std::string& text);

/// A square u : A -> K, v : B -> L, g : A -> B with no filler t : B -> K.
struct Square {
  SpacePtr a;
  SpacePtr b;
  std::vector<std::size_t> g;
  std::vector<std::size_t> u;
  std::vector<std::size_t> v;
};

struct PurityResult {
  bool pure = true;
  std::uint64_t squares_checked = 0;
  std::optional<Square> counterexample;
};

/// Purity of f : K -> L relative to `family`. For all A, B in the family
/// and all g : A -> B, u : A -> K, v : B -> L:
///   Pure: if hom_dist(f∘u, v∘g) <= eps then some t : B -> K has hom_dist(t∘g, u) <= eps;
///   Weak: same squares, filler within 2·eps;
///   Bare: only squares with f∘u = v∘g, filler within eps.
/// Since the filler does not depend on v, each (g, u) is tested once: if
/// some admissible v exists, a filler must exist. `squares_checked` counts
/// those (g, u) pairs.
PurityResult purity(const MetMap& f, const ExtRat& eps, PurityVariant variant, const TestFamily& family,
                    const Budget& budget = {});

/// Purity at every value of a finite grid.
bool is_grid_ap_pure(const MetMap& f, const std::vector<ExtRat>& grid, PurityVariant variant,
                     const TestFamily& family, const Budget& budget = {});

}  // namespace metricat
