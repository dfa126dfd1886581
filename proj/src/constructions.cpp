#include "metricat/constructions.hpp"

#include <algorithm>
#include <map>

#include "metricat/canonical.hpp"
#include "metricat/errors.hpp"
#include "metricat/hom_search.hpp"

namespace metricat {

Coproduct coproduct(const std::vector<SpacePtr>& spaces) {
  std::size_t total = 0;
  for (const auto& s : spaces) total += s->size();
  std::vector<ExtRat> dist(total * total, ExtRat::inf());
  std::vector<std::string> labels;
  bool any_labels = std::any_of(spaces.begin(), spaces.end(), [](const SpacePtr& s) { return !s->labels().empty(); });
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < spaces.size(); ++k) {
    const Space& s = *spaces[k];
    offsets.push_back(offset);
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < s.size(); ++j) dist[(offset + i) * total + offset + j] = s.d(i, j);
      if (any_labels) {
        labels.push_back(s.labels().empty() ? std::to_string(k) + ":" + std::to_string(i)
                                            : std::to_string(k) + ":" + s.labels()[i]);
      }
    }
    offset += s.size();
  }
  Coproduct out;
  out.space = share(Space::unchecked(total, std::move(dist), std::move(labels)));
  for (std::size_t k = 0; k < spaces.size(); ++k) {
    std::vector<std::size_t> images(spaces[k]->size());
    for (std::size_t i = 0; i < images.size(); ++i) images[i] = offsets[k] + i;
    out.injections.push_back(MetMap::unchecked(spaces[k], out.space, std::move(images)));
  }
  return out;
}

Product product(const std::vector<SpacePtr>& spaces, const Budget& budget) {
  std::size_t total = 1;
  for (const auto& s : spaces) {
    if (s->size() != 0 && total > budget.max_points / s->size()) {
      throw SizeOverflow("product exceeds the point budget of " + std::to_string(budget.max_points));
    }
    total *= s->size();
  }
  const std::size_t k = spaces.size();
  // tuples[p][c] = coordinate c of point p.
  std::vector<std::vector<std::size_t>> tuples(total, std::vector<std::size_t>(k));
  for (std::size_t p = 0; p < total; ++p) {
    std::size_t rest = p;
    for (std::size_t c = k; c-- > 0;) {
      tuples[p][c] = rest % spaces[c]->size();
      rest /= spaces[c]->size();
    }
  }
  std::vector<ExtRat> dist(total * total);
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t q = p + 1; q < total; ++q) {
      ExtRat worst;
      for (std::size_t c = 0; c < k; ++c) worst = max(worst, spaces[c]->d(tuples[p][c], tuples[q][c]));
      dist[p * total + q] = worst;
      dist[q * total + p] = worst;
    }
  }
  Product out;
  out.space = share(Space::unchecked(total, std::move(dist)));
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<std::size_t> images(total);
    for (std::size_t p = 0; p < total; ++p) images[p] = tuples[p][c];
    out.projections.push_back(MetMap::unchecked(out.space, spaces[c], std::move(images)));
  }
  return out;
}

MetMap copair(const Coproduct& sum, const std::vector<MetMap>& maps) {
  if (maps.size() != sum.injections.size()) throw MismatchedEndpoints("copair: wrong number of maps");
  if (maps.empty()) throw MismatchedEndpoints("copair: codomain of an empty copairing is not determined");
  std::vector<std::size_t> images;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (!same_space(maps[k].dom_ptr(), sum.injections[k].dom_ptr()) ||
        !same_space(maps[k].cod_ptr(), maps[0].cod_ptr())) {
      throw MismatchedEndpoints("copair: map " + std::to_string(k) + " has the wrong endpoints");
    }
    images.insert(images.end(), maps[k].images().begin(), maps[k].images().end());
  }
  return MetMap::unchecked(sum.space, maps[0].cod_ptr(), std::move(images));
}

MetMap pair_into(const Product& prod, const std::vector<MetMap>& maps) {
  if (maps.size() != prod.projections.size()) throw MismatchedEndpoints("pair_into: wrong number of maps");
  if (maps.empty()) throw MismatchedEndpoints("pair_into: domain of an empty pairing is not determined");
  const Space& dom = maps[0].dom();
  std::vector<std::size_t> images(dom.size(), 0);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    std::size_t index = 0;
    for (std::size_t c = 0; c < maps.size(); ++c) {
      if (!same_space(maps[c].cod_ptr(), prod.projections[c].cod_ptr()) ||
          !same_space(maps[c].dom_ptr(), maps[0].dom_ptr())) {
        throw MismatchedEndpoints("pair_into: map " + std::to_string(c) + " has the wrong endpoints");
      }
      index = index * maps[c].cod().size() + maps[c](i);
    }
    images[i] = index;
  }
  return MetMap::unchecked(maps[0].dom_ptr(), prod.space, std::move(images));
}

std::vector<SpacePtr> subspaces_up_to_iso(const Space& space, std::size_t size_cap, const Budget& budget) {
  const std::size_t n = space.size();
  std::vector<Space> found;
  std::vector<std::size_t> subset;
  auto consider = [&]() {
    Space canon = canonical_form(space.subspace(subset), budget).space;
    if (std::find(found.begin(), found.end(), canon) == found.end()) found.push_back(std::move(canon));
  };
  // Subsets in increasing size, each size in lexicographic order.
  for (std::size_t k = 0; k <= std::min(n, size_cap); ++k) {
    subset.assign(k, 0);
    for (std::size_t i = 0; i < k; ++i) subset[i] = i;
    while (true) {
      consider();
      std::size_t pos = k;
      while (pos > 0 && subset[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++subset[pos - 1];
      for (std::size_t i = pos; i < k; ++i) subset[i] = subset[i - 1] + 1;
    }
  }
  std::sort(found.begin(), found.end(), canonical_less);
  std::vector<SpacePtr> out;
  for (auto& s : found) out.push_back(share(std::move(s)));
  return out;
}

bool is_eps_mono(const MetMap& f, const ExtRat& eps, const std::vector<SpacePtr>& test_spaces, const Budget& budget) {
  const SpacePtr& dom = f.dom_ptr();
  for (const auto& c : test_spaces) {
    HomSearch search(*c, *dom, MapKind::NonExpansive, budget.max_nodes);
    std::map<std::vector<std::size_t>, std::vector<std::vector<std::size_t>>> fibres;
    search.for_each([&](std::span<const std::size_t> g) {
      std::vector<std::size_t> fg(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) fg[i] = f(g[i]);
      fibres[std::move(fg)].emplace_back(g.begin(), g.end());
      return true;
    });
    for (const auto& [image, maps] : fibres) {
      for (std::size_t a = 0; a < maps.size(); ++a) {
        for (std::size_t b = a + 1; b < maps.size(); ++b) {
          if (hom_dist(*dom, maps[a], maps[b]) > eps) return false;
        }
      }
    }
  }
  return true;
}

bool is_eps_mono(const MetMap& f, const ExtRat& eps, std::size_t size_cap, const Budget& budget) {
  return is_eps_mono(f, eps, subspaces_up_to_iso(f.dom(), size_cap, budget), budget);
}

}  // namespace metricat
