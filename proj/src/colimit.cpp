#include "metricat/colimit.hpp"

#include <numeric>
#include <stdexcept>

#include "metricat/constructions.hpp"
#include "metricat/errors.hpp"
#include "metricat/reflect.hpp"

namespace metricat {

namespace {

void require_span(const MetMap& f, const MetMap& g) {
  if (!same_space(f.dom_ptr(), g.dom_ptr())) throw MismatchedEndpoints("span legs have different domains");
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller index becomes the root, so roots are class minima.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

EpsPushoutResult assemble(const MetMap& f, const MetMap& g, const Reflection& r, const ExtRat& eps) {
  const std::size_t nb = f.cod().size();
  const std::size_t nc = g.cod().size();
  auto apex = share(r.space);
  std::vector<std::size_t> from_b(nb), from_c(nc);
  for (std::size_t b = 0; b < nb; ++b) from_b[b] = r.projection[b];
  for (std::size_t c = 0; c < nc; ++c) from_c[c] = r.projection[nb + c];
  return EpsPushoutResult{apex, MetMap::unchecked(g.cod_ptr(), apex, std::move(from_c)),
                          MetMap::unchecked(f.cod_ptr(), apex, std::move(from_b)), eps};
}

}  // namespace

EpsPushoutResult pushout(const MetMap& f, const MetMap& g) {
  require_span(f, g);
  const Space& b = f.cod();
  const Space& c = g.cod();
  const std::size_t nb = b.size(), n = nb + c.size();
  DisjointSets sets(n);
  for (std::size_t a = 0; a < f.dom().size(); ++a) sets.unite(f(a), nb + g(a));

  // Glued classes, numbered in order of their smallest member.
  std::vector<std::size_t> class_of(n);
  std::vector<std::size_t> root_class(n, SIZE_MAX);
  std::size_t classes = 0;
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t root = sets.find(x);
    if (root_class[root] == SIZE_MAX) root_class[root] = classes++;
    class_of[x] = root_class[root];
  }

  // Induced semimetric: smallest distance between representatives.
  Semimetric quotient(classes);
  auto dist = [&](std::size_t x, std::size_t y) -> ExtRat {
    if (x < nb && y < nb) return b.d(x, y);
    if (x >= nb && y >= nb) return c.d(x - nb, y - nb);
    return ExtRat::inf();
  };
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) quotient.lower(class_of[x], class_of[y], dist(x, y));
  }
  Reflection r = reflect(quotient);
  for (std::size_t x = 0; x < n; ++x) class_of[x] = r.projection[class_of[x]];
  r.projection = std::move(class_of);
  return assemble(f, g, r, ExtRat());
}

EpsPushoutResult bridged_pushout(const MetMap& f, const MetMap& g, const std::vector<ExtRat>& bridge,
                                 const ExtRat& eps) {
  require_span(f, g);
  if (bridge.size() != f.dom().size()) throw std::invalid_argument("bridged_pushout: one bridge length per point");
  const Space& b = f.cod();
  const Space& c = g.cod();
  const std::size_t nb = b.size(), n = nb + c.size();
  Semimetric s(n);
  for (std::size_t x = 0; x < nb; ++x) {
    for (std::size_t y = x + 1; y < nb; ++y) s.set(x, y, b.d(x, y));
  }
  for (std::size_t x = 0; x < c.size(); ++x) {
    for (std::size_t y = x + 1; y < c.size(); ++y) s.set(nb + x, nb + y, c.d(x, y));
  }
  for (std::size_t a = 0; a < f.dom().size(); ++a) s.lower(f(a), nb + g(a), bridge[a]);
  return assemble(f, g, reflect(s), eps);
}

EpsPushoutResult eps_pushout(const MetMap& f, const MetMap& g, const ExtRat& eps) {
  if (eps.is_zero()) return pushout(f, g);
  return bridged_pushout(f, g, std::vector<ExtRat>(f.dom().size(), eps), eps);
}

Coequalizer eps_coequalizer(const MetMap& f, const MetMap& g, const ExtRat& eps) {
  if (!same_space(f.dom_ptr(), g.dom_ptr()) || !same_space(f.cod_ptr(), g.cod_ptr())) {
    throw MismatchedEndpoints("eps_coequalizer: maps are not parallel");
  }
  const SpacePtr& a = f.dom_ptr();
  const SpacePtr& b = f.cod_ptr();
  Coproduct sum = coproduct({a, b});
  MetMap id = MetMap::identity(b);
  MetMap f_id = copair(sum, {f, id});
  MetMap g_id = copair(sum, {g, id});
  std::vector<ExtRat> bridge(sum.space->size(), ExtRat());
  for (std::size_t x = 0; x < a->size(); ++x) bridge[x] = eps;
  EpsPushoutResult square = bridged_pushout(f_id, g_id, bridge, eps);
  if (square.leg_f.images() != square.leg_g.images()) {
    throw std::logic_error("eps_coequalizer: legs of the gluing square differ");
  }
  return Coequalizer{square.apex, MetMap::unchecked(b, square.apex, square.leg_g.images()), eps};
}

void FinDiagram::check() const {
  for (std::size_t e = 0; e < arrows.size(); ++e) {
    const Arrow& arrow = arrows[e];
    if (arrow.src >= objects.size() || arrow.dst >= objects.size()) {
      throw MismatchedEndpoints("arrow " + std::to_string(e) + " refers to a missing object");
    }
    if (!same_space(arrow.map.dom_ptr(), objects[arrow.src]) || !same_space(arrow.map.cod_ptr(), objects[arrow.dst])) {
      throw MismatchedEndpoints("arrow " + std::to_string(e) + " does not match its objects");
    }
  }
}

Colimit eps_colimit(const FinDiagram& diagram, const ExtRat& eps, const Budget& budget) {
  diagram.check();
  Coproduct objects = coproduct(diagram.objects);
  if (objects.space->size() > budget.max_points) {
    throw BudgetExceeded("eps_colimit: diagram has " + std::to_string(objects.space->size()) +
                         " points, budget is " + std::to_string(budget.max_points));
  }
  std::vector<SpacePtr> arrow_domains;
  for (const auto& arrow : diagram.arrows) arrow_domains.push_back(diagram.objects[arrow.src]);
  Coproduct arrows = coproduct(arrow_domains);

  std::vector<std::size_t> direct, along;
  for (std::size_t e = 0; e < diagram.arrows.size(); ++e) {
    const Arrow& arrow = diagram.arrows[e];
    for (std::size_t x = 0; x < arrow.map.dom().size(); ++x) {
      direct.push_back(objects.injections[arrow.src](x));
      along.push_back(objects.injections[arrow.dst](arrow.map(x)));
    }
  }
  MetMap p1 = MetMap::unchecked(arrows.space, objects.space, std::move(direct));
  MetMap p2 = MetMap::unchecked(arrows.space, objects.space, std::move(along));
  Coequalizer coeq = eps_coequalizer(p1, p2, eps);

  Colimit out{coeq.apex, {}, eps};
  for (const auto& inj : objects.injections) out.legs.push_back(compose(coeq.leg, inj));
  return out;
}

MetMap comparison(const Colimit& from, const Colimit& to) {
  if (from.legs.size() != to.legs.size()) throw MismatchedEndpoints("comparison: colimits of different diagrams");
  const std::size_t n = from.apex->size();
  std::vector<std::size_t> images(n, SIZE_MAX);
  for (std::size_t i = 0; i < from.legs.size(); ++i) {
    for (std::size_t x = 0; x < from.legs[i].dom().size(); ++x) {
      std::size_t p = from.legs[i](x);
      std::size_t q = to.legs[i](x);
      if (images[p] == SIZE_MAX) {
        images[p] = q;
      } else if (images[p] != q) {
        throw std::logic_error("comparison: cocone does not factor through the source colimit");
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (images[p] == SIZE_MAX) throw std::logic_error("comparison: apex point outside the legs' images");
  }
  return MetMap(from.apex, to.apex, std::move(images));
}

MetMap comparison(const FinDiagram& diagram, const ExtRat& eps, const ExtRat& delta, const Budget& budget) {
  if (eps < delta) throw std::invalid_argument("comparison: requires delta <= eps");
  return comparison(eps_colimit(diagram, eps, budget), eps_colimit(diagram, delta, budget));
}

Cylinder cylinder(const SpacePtr& k, const ExtRat& eps) {
  Coproduct doubled = coproduct({k, k});
  Semimetric s = Semimetric::from_space(*doubled.space);
  const std::size_t n = k->size();
  for (std::size_t x = 0; x < n; ++x) s.set(x, n + x, eps);
  Reflection r = reflect(s);
  auto space = share(std::move(r.space));
  return Cylinder{space, doubled.space, MetMap::unchecked(doubled.space, space, std::move(r.projection))};
}

}  // namespace metricat
