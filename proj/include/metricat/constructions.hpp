#pragma once

#include <vector>

#include "metricat/budget.hpp"
#include "metricat/space.hpp"

namespace metricat {

struct Coproduct {
  SpacePtr space;
  std::vector<MetMap> injections;
};

/// Disjoint union; summands keep their distances, points in different
/// summands are at distance INF. Points are laid out summand by summand.
Coproduct coproduct(const std::vector<SpacePtr>& spaces);

struct Product {
  SpacePtr space;
  std::vector<MetMap> projections;
};

/// Cartesian product with the max-metric. Tuples are ordered
/// lexicographically with the first factor most significant; the empty
/// product is the one-point space. Throws SizeOverflow past budget.max_points.
Product product(const std::vector<SpacePtr>& spaces, const Budget& budget = {});

/// Copairing [maps...]: coproduct -> common codomain.
MetMap copair(const Coproduct& sum, const std::vector<MetMap>& maps);

/// Pairing <maps...>: common domain -> product.
MetMap pair_into(const Product& prod, const std::vector<MetMap>& maps);

/// Every induced subspace of `space` with at most `size_cap` points,
/// deduplicated up to isometry, in canonical order.
std::vector<SpacePtr> subspaces_up_to_iso(const Space& space, std::size_t size_cap, const Budget& budget = {});

/// f is an eps-monomorphism relative to `test_spaces`: for every C in the
/// family and all g, h : C -> dom(f) with f∘g = f∘h, hom_dist(g, h) <= eps.
bool is_eps_mono(const MetMap& f, const ExtRat& eps, const std::vector<SpacePtr>& test_spaces,
                 const Budget& budget = {});

/// Default family for is_eps_mono: subspaces of dom(f) up to `size_cap` points.
bool is_eps_mono(const MetMap& f, const ExtRat& eps, std::size_t size_cap = 3, const Budget& budget = {});

}  // namespace metricat
