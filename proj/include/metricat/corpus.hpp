#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "metricat/budget.hpp"
#include "metricat/space.hpp"

namespace metricat {

/// mt19937_64 with modulo draws, so sequences are identical across
/// standard libraries (std::uniform_int_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform-ish draw in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 of (seed, stream): independent per-instance seeds, so
/// instance i does not depend on how many draws instance i-1 made.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

/// {1/2, 1, 3/2, 2, inf}
std::vector<ExtRat> default_grid();

/// A space with exactly n points and distances drawn from `grid`, by
/// rejection on the triangle inequality. After 256 rejections the last draw
/// is closed under shortest paths instead, so distances may be sums of grid
/// values.
Space random_space(Rng& rng, std::size_t n, const std::vector<ExtRat>& grid);

/// A uniformly chosen non-expansive map, or nullopt if there is none.
std::optional<MetMap> random_map(Rng& rng, const SpacePtr& dom, const SpacePtr& cod, const Budget& budget = {});

/// A uniformly chosen map dom(f) -> cod(f) within hom-distance eps of f (f itself qualifies).
MetMap random_map_near(Rng& rng, const MetMap& f, const ExtRat& eps, const Budget& budget = {});

/// A uniformly chosen isometry, or nullopt.
std::optional<MetMap> random_isometry(Rng& rng, const SpacePtr& dom, const SpacePtr& cod, const Budget& budget = {});

struct SpanInstance {
  MetMap f;  // A -> B
  MetMap g;  // A -> C
  ExtRat eps;
};

struct SpanCorpusConfig {
  std::uint64_t seed = 1;
  std::size_t count = 64;
  std::size_t max_points = 4;  // for B and C; A has at most max_points - 1
  std::vector<ExtRat> grid = default_grid();
  std::vector<ExtRat> eps_values;  // default {0, 1/2, 1, inf}
};

/// Seeded spans over small random spaces; instance i uses eps_values[i % size].
std::vector<SpanInstance> span_corpus(const SpanCorpusConfig& config, const Budget& budget = {});

}  // namespace metricat
