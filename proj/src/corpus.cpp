#include "metricat/corpus.hpp"

#include "metricat/hom_search.hpp"
#include "metricat/reflect.hpp"

namespace metricat {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<ExtRat> default_grid() {
  return {ExtRat::ratio(1, 2), ExtRat(1), ExtRat::ratio(3, 2), ExtRat(2), ExtRat::inf()};
}

Space random_space(Rng& rng, std::size_t n, const std::vector<ExtRat>& grid) {
  std::vector<ExtRat> dist(n * n);
  for (int attempt = 0; attempt < 256; ++attempt) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = rng.pick(grid);
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = 0; j < n && ok; ++j) {
        for (std::size_t k = 0; k < n && ok; ++k) ok = !(dist[i * n + j] > dist[i * n + k] + dist[k * n + j]);
      }
    }
    if (ok) return Space::unchecked(n, dist);
  }
  shortest_path_closure(n, dist);
  return Space::unchecked(n, std::move(dist));
}

std::optional<MetMap> random_map(Rng& rng, const SpacePtr& dom, const SpacePtr& cod, const Budget& budget) {
  auto maps = HomSearch(*dom, *cod, MapKind::NonExpansive, budget.max_nodes).all();
  if (maps.empty()) return std::nullopt;
  return MetMap::unchecked(dom, cod, rng.pick(maps));
}

MetMap random_map_near(Rng& rng, const MetMap& f, const ExtRat& eps, const Budget& budget) {
  Candidates allowed(f.dom().size(), f.cod().size());
  for (std::size_t x = 0; x < f.dom().size(); ++x) {
    for (std::size_t y = 0; y < f.cod().size(); ++y) {
      if (f.cod().d(y, f(x)) > eps) allowed.forbid(x, y);
    }
  }
  HomSearch search(f.dom(), f.cod(), MapKind::NonExpansive, budget.max_nodes);
  search.restrict_to(std::move(allowed));
  auto maps = search.all();
  return MetMap::unchecked(f.dom_ptr(), f.cod_ptr(), rng.pick(maps));
}

std::optional<MetMap> random_isometry(Rng& rng, const SpacePtr& dom, const SpacePtr& cod, const Budget& budget) {
  auto maps = HomSearch(*dom, *cod, MapKind::Isometric, budget.max_nodes).all();
  if (maps.empty()) return std::nullopt;
  return MetMap::unchecked(dom, cod, rng.pick(maps));
}

std::vector<SpanInstance> span_corpus(const SpanCorpusConfig& config, const Budget& budget) {
  std::vector<ExtRat> eps_values = config.eps_values;
  if (eps_values.empty()) eps_values = {ExtRat(0), ExtRat::ratio(1, 2), ExtRat(1), ExtRat::inf()};
  std::vector<SpanInstance> out;
  for (std::size_t i = 0; i < config.count; ++i) {
    Rng rng(stream_seed(config.seed, i));
    auto a = share(random_space(rng, rng.below(config.max_points), config.grid));
    auto b = share(random_space(rng, 1 + rng.below(config.max_points), config.grid));
    auto c = share(random_space(rng, 1 + rng.below(config.max_points), config.grid));
    auto f = random_map(rng, a, b, budget);
    auto g = random_map(rng, a, c, budget);
    out.push_back(SpanInstance{*f, *g, eps_values[i % eps_values.size()]});
  }
  return out;
}

}  // namespace metricat
