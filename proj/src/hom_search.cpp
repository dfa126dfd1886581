#include "metricat/hom_search.hpp"

#include <omp.h>

#include <exception>

#include "metricat/errors.hpp"

namespace metricat {

Candidates::Candidates(std::size_t dom_size, std::size_t cod_size)
    : dom_size_(dom_size), cod_size_(cod_size), bits_(dom_size * cod_size, 1) {}

void Candidates::fix(std::size_t point, std::size_t image) {
  for (std::size_t y = 0; y < cod_size_; ++y) bits_[point * cod_size_ + y] = (y == image) ? 1 : 0;
}

bool Candidates::has_empty() const {
  for (std::size_t i = 0; i < dom_size_; ++i) {
    bool any = false;
    for (std::size_t y = 0; y < cod_size_ && !any; ++y) any = bits_[i * cod_size_ + y] != 0;
    if (!any) return true;
  }
  return false;
}

HomSearch::HomSearch(const Space& dom, const Space& cod, MapKind kind, std::uint64_t node_budget)
    : dom_(dom), cod_(cod), kind_(kind), budget_(node_budget) {}

HomSearch& HomSearch::restrict_to(Candidates candidates) {
  if (candidates.dom_size() != dom_.size() || candidates.cod_size() != cod_.size()) {
    throw std::invalid_argument("candidate table does not match the search endpoints");
  }
  candidates_ = std::move(candidates);
  return *this;
}

// Layout: level k occupies n*m bytes; row j of level k is the candidate set
// of point j given the assignments of points < k.
std::vector<std::uint8_t> HomSearch::initial_levels() const {
  const std::size_t n = dom_.size(), m = cod_.size();
  std::vector<std::uint8_t> levels((n + 1) * n * m, 0);
  if (candidates_) {
    std::copy(candidates_->bits().begin(), candidates_->bits().end(), levels.begin());
  } else {
    std::fill(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(n * m), 1);
  }
  return levels;
}

bool HomSearch::search(std::size_t depth, std::vector<std::uint8_t>& levels, std::vector<std::size_t>& image,
                       const Visitor& visit, std::uint64_t& nodes) const {
  const std::size_t n = dom_.size(), m = cod_.size();
  if (depth == n) return visit(image);
  const std::uint8_t* cur = levels.data() + depth * n * m;
  std::uint8_t* next = levels.data() + (depth + 1) * n * m;
  for (std::size_t y = 0; y < m; ++y) {
    if (!cur[depth * m + y]) continue;
    if (++nodes > budget_) throw BudgetExceeded("hom search exceeded " + std::to_string(budget_) + " nodes");
    image[depth] = y;
    bool viable = true;
    for (std::size_t j = depth + 1; j < n && viable; ++j) {
      const ExtRat& bound = dom_.d(depth, j);
      const std::uint8_t* src = cur + j * m;
      std::uint8_t* dst = next + j * m;
      bool any = false;
      for (std::size_t z = 0; z < m; ++z) {
        bool ok = false;
        if (src[z]) {
          const ExtRat& dz = cod_.d(y, z);
          ok = kind_ == MapKind::Isometric ? dz == bound : dz <= bound;
        }
        dst[z] = ok ? 1 : 0;
        any = any || ok;
      }
      viable = any;
    }
    if (!viable) continue;
    if (!search(depth + 1, levels, image, visit, nodes)) return false;
  }
  return true;
}

bool HomSearch::for_each(const Visitor& visit) {
  auto levels = initial_levels();
  std::vector<std::size_t> image(dom_.size());
  std::uint64_t nodes = 0;
  bool completed = true;
  if (dom_.size() == 0) {
    completed = visit(image);
  } else {
    try {
      completed = search(0, levels, image, visit, nodes);
    } catch (...) {
      nodes_ += nodes;
      throw;
    }
  }
  nodes_ += nodes;
  return completed;
}

std::optional<std::vector<std::size_t>> HomSearch::first() {
  std::optional<std::vector<std::size_t>> found;
  for_each([&](std::span<const std::size_t> img) {
    found.emplace(img.begin(), img.end());
    return false;
  });
  return found;
}

std::size_t HomSearch::count(std::size_t limit) {
  std::size_t seen = 0;
  if (limit == 0) return 0;
  for_each([&](std::span<const std::size_t>) { return ++seen < limit; });
  return seen;
}

std::vector<std::vector<std::size_t>> HomSearch::all(Exec exec) {
  const std::size_t n = dom_.size(), m = cod_.size();
  if (exec == Exec::Serial || n == 0 || m == 0) {
    std::vector<std::vector<std::size_t>> out;
    for_each([&](std::span<const std::size_t> img) {
      out.emplace_back(img.begin(), img.end());
      return true;
    });
    return out;
  }

  const auto root = initial_levels();
  std::vector<std::size_t> starts;
  for (std::size_t y = 0; y < m; ++y) {
    if (root[y]) starts.push_back(y);
  }
  std::vector<std::vector<std::vector<std::size_t>>> parts(starts.size());
  std::vector<std::uint64_t> part_nodes(starts.size(), 0);
  std::vector<std::exception_ptr> errors(starts.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(starts.size()); ++s) {
    try {
      auto levels = root;
      for (std::size_t z = 0; z < m; ++z) levels[z] = (z == starts[s]) ? 1 : 0;
      std::vector<std::size_t> image(n);
      auto& out = parts[s];
      search(0, levels, image,
             [&](std::span<const std::size_t> img) {
               out.emplace_back(img.begin(), img.end());
               return true;
             },
             part_nodes[s]);
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }

  std::uint64_t total = 0;
  for (auto v : part_nodes) total += v;
  nodes_ += total;
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  if (total > budget_) throw BudgetExceeded("hom search exceeded " + std::to_string(budget_) + " nodes");

  std::vector<std::vector<std::size_t>> out;
  for (auto& part : parts) {
    for (auto& img : part) out.push_back(std::move(img));
  }
  return out;
}

namespace {

std::vector<MetMap> wrap(const SpacePtr& dom, const SpacePtr& cod, std::vector<std::vector<std::size_t>> raw) {
  std::vector<MetMap> maps;
  maps.reserve(raw.size());
  for (auto& img : raw) maps.push_back(MetMap::unchecked(dom, cod, std::move(img)));
  return maps;
}

}  // namespace

std::vector<MetMap> hom_set(const SpacePtr& dom, const SpacePtr& cod, const Budget& budget, Exec exec) {
  HomSearch search(*dom, *cod, MapKind::NonExpansive, budget.max_nodes);
  return wrap(dom, cod, search.all(exec));
}

std::vector<MetMap> isometries(const SpacePtr& dom, const SpacePtr& cod, const Budget& budget) {
  HomSearch search(*dom, *cod, MapKind::Isometric, budget.max_nodes);
  return wrap(dom, cod, search.all());
}

}  // namespace metricat
