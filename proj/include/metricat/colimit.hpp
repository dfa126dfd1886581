#pragma once

#include <vector>

#include "metricat/budget.hpp"
#include "metricat/space.hpp"

namespace metricat {

/// Cocone over a span f : A -> B, g : A -> C whose square commutes up to eps:
/// hom_dist(leg_f ∘ g, leg_g ∘ f) <= eps.
struct EpsPushoutResult {
  SpacePtr apex;
  MetMap leg_f;  // C -> apex
  MetMap leg_g;  // B -> apex
  ExtRat eps;
};

/// Ordinary pushout: glue f(a) with g(a) in B + C, give each glued class
/// the smallest distance between its representatives, close under shortest
/// paths and identify classes at distance 0. The square commutes exactly.
/// Throws MismatchedEndpoints unless dom(f) == dom(g).
EpsPushoutResult pushout(const MetMap& f, const MetMap& g);

/// eps-pushout. For eps > 0, every distance d(f(a), g(a)) in B + C is
/// lowered to eps and the result is reflected to a metric; eps = 0 is the
/// ordinary pushout.
EpsPushoutResult eps_pushout(const MetMap& f, const MetMap& g, const ExtRat& eps);

/// The bridge construction behind eps_pushout with a separate bridge length
/// per point of A. With every weight equal to 0 this reproduces pushout().
EpsPushoutResult bridged_pushout(const MetMap& f, const MetMap& g, const std::vector<ExtRat>& bridge,
                                 const ExtRat& eps);

struct Coequalizer {
  SpacePtr apex;
  MetMap leg;  // B -> apex
  ExtRat eps;
};

/// eps-coequalizer of a parallel pair f, g : A -> B, obtained from the
/// square over A + B with the copairings (f, id_B) and (g, id_B). The A
/// summand is bridged at eps; the B summand is glued exactly, so both legs
/// of the square coincide and give `leg`, with leg∘f ~eps leg∘g.
Coequalizer eps_coequalizer(const MetMap& f, const MetMap& g, const ExtRat& eps);

struct Arrow {
  std::size_t src;
  std::size_t dst;
  MetMap map;
};

/// Finite diagram. Each arrow's map goes objects[src] -> objects[dst].
struct FinDiagram {
  std::vector<SpacePtr> objects;
  std::vector<Arrow> arrows;

  /// Throws MismatchedEndpoints if an arrow's endpoints disagree with its indices.
  void check() const;
};

struct Colimit {
  SpacePtr apex;
  std::vector<MetMap> legs;  // objects[i] -> apex
  ExtRat eps;
};

/// eps-colimit: the eps-coequalizer of the standard pair
///   ⨆_{e : i -> j} D(i) ⇉ ⨆_i D(i)
/// (one map injects D(i) directly, the other goes through D(e) into D(j)).
/// Throws BudgetExceeded when the object coproduct exceeds budget.max_points.
Colimit eps_colimit(const FinDiagram& diagram, const ExtRat& eps, const Budget& budget = {});

/// The canonical map colim_eps D -> colim_delta D for delta <= eps, sending
/// the class of a point to the class of the same point. Throws
/// std::invalid_argument when delta > eps.
MetMap comparison(const FinDiagram& diagram, const ExtRat& eps, const ExtRat& delta, const Budget& budget = {});

/// Same map between already computed colimits of one diagram.
MetMap comparison(const Colimit& from, const Colimit& to);

struct Cylinder {
  SpacePtr space;   // C_K
  SpacePtr doubled; // K + K
  MetMap c;         // K + K -> C_K
};

/// Cylinder object: K + K with d(x', x'') = eps for every x, reflected.
/// Cross distances come out as d(x', y'') = d(x, y) + eps.
Cylinder cylinder(const SpacePtr& k, const ExtRat& eps);

}  // namespace metricat
