#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "metricat/budget.hpp"
#include "metricat/space.hpp"

namespace metricat {

enum class MapKind { NonExpansive, Isometric };

/// Allowed images per domain point. Starts fully permissive.
class Candidates {
 public:
  Candidates(std::size_t dom_size, std::size_t cod_size);

  void fix(std::size_t point, std::size_t image);
  void forbid(std::size_t point, std::size_t image) { bits_[point * cod_size_ + image] = 0; }
  bool allowed(std::size_t point, std::size_t image) const { return bits_[point * cod_size_ + image] != 0; }
  /// True when some point has no allowed image left.
  bool has_empty() const;

  std::size_t dom_size() const noexcept { return dom_size_; }
  std::size_t cod_size() const noexcept { return cod_size_; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

 private:
  std::size_t dom_size_;
  std::size_t cod_size_;
  std::vector<std::uint8_t> bits_;
};

/// Backtracking enumeration of maps dom -> cod with forward checking: after
/// each assignment the candidate sets of the remaining points are pruned by
/// the pairwise distance constraint, and a branch dies as soon as one of
/// them empties. Maps are produced in lexicographic order of their image
/// vectors. Every tried assignment counts as one node against the budget.
class HomSearch {
 public:
  using Visitor = std::function<bool(std::span<const std::size_t>)>;

  HomSearch(const Space& dom, const Space& cod, MapKind kind = MapKind::NonExpansive,
            std::uint64_t node_budget = Budget{}.max_nodes);

  HomSearch& restrict_to(Candidates candidates);

  /// Calls `visit` for each map until it returns false. Returns false iff stopped early.
  bool for_each(const Visitor& visit);
  std::optional<std::vector<std::size_t>> first();
  /// Counts maps, stopping at `limit`.
  std::size_t count(std::size_t limit = SIZE_MAX);
  /// All maps; the parallel kernel splits on the image of point 0 and
  /// concatenates the subtrees in order, so both return the same list.
  std::vector<std::vector<std::size_t>> all(Exec exec = Exec::Serial);

  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  bool search(std::size_t depth, std::vector<std::uint8_t>& levels, std::vector<std::size_t>& image,
              const Visitor& visit, std::uint64_t& nodes) const;
  std::vector<std::uint8_t> initial_levels() const;

  const Space& dom_;
  const Space& cod_;
  MapKind kind_;
  std::uint64_t budget_;
  std::optional<Candidates> candidates_;
  std::uint64_t nodes_ = 0;
};

/// All non-expansive maps A -> K in lexicographic order.
std::vector<MetMap> hom_set(const SpacePtr& dom, const SpacePtr& cod, const Budget& budget = {},
                            Exec exec = Exec::Serial);

/// All isometries A -> K in lexicographic order.
std::vector<MetMap> isometries(const SpacePtr& dom, const SpacePtr& cod, const Budget& budget = {});

}  // namespace metricat
