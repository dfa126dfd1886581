#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metricat/extrat.hpp"

namespace metricat {

/// Finite generalized metric space: points 0..size()-1 with a symmetric
/// ExtRat distance matrix satisfying separation and the triangle inequality.
///
/// Instances built through validate_space() or the library's constructions
/// always satisfy the invariants. `unchecked()` is for callers that already
/// hold a proof (e.g. a shortest-path closure).
class Space {
 public:
  Space() = default;

  static Space unchecked(std::size_t n, std::vector<ExtRat> dist, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  const ExtRat& d(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  std::span<const ExtRat> row(std::size_t i) const { return {dist_.data() + i * n_, n_}; }
  const std::vector<ExtRat>& matrix() const noexcept { return dist_; }

  /// Optional display names; either empty or one per point.
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  Space with_labels(std::vector<std::string> labels) const;

  /// Induced subspace on `points`, in the given order.
  Space subspace(std::span<const std::size_t> points) const;

  /// Equality of point count and distances; labels are display-only.
  friend bool operator==(const Space& a, const Space& b) { return a.n_ == b.n_ && a.dist_ == b.dist_; }

 private:
  std::size_t n_ = 0;
  std::vector<ExtRat> dist_;
  std::vector<std::string> labels_;
};

using SpacePtr = std::shared_ptr<const Space>;

inline SpacePtr share(Space s) { return std::make_shared<const Space>(std::move(s)); }

/// The one-point space.
Space point_space();
/// Two points at distance eps; two_point(0) is the one-point space.
Space two_point(const ExtRat& eps);

struct Violation {
  enum class Kind { NotSquare, NonZeroDiagonal, Asymmetric, ZeroOffDiagonal, TriangleViolation };
  Kind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;  // intermediate point for TriangleViolation

  std::string describe() const;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationResult {
  std::optional<Space> space;
  std::vector<Violation> violations;

  bool ok() const noexcept { return space.has_value(); }
};

/// Checks every metric axiom and reports all violations, not just the first.
/// A triangle violation (i, j, k) with i < j means d(i,j) > d(i,k) + d(k,j).
ValidationResult validate_space(const std::vector<std::vector<ExtRat>>& rows, std::vector<std::string> labels = {});

/// Non-expansive map between two spaces, stored as a point-index function.
class MetMap {
 public:
  /// Throws InvalidMorphism if an index is out of range or the map expands a distance.
  MetMap(SpacePtr dom, SpacePtr cod, std::vector<std::size_t> images);
  static MetMap unchecked(SpacePtr dom, SpacePtr cod, std::vector<std::size_t> images);
  static MetMap identity(const SpacePtr& space);

  const Space& dom() const noexcept { return *dom_; }
  const Space& cod() const noexcept { return *cod_; }
  const SpacePtr& dom_ptr() const noexcept { return dom_; }
  const SpacePtr& cod_ptr() const noexcept { return cod_; }

  std::size_t operator()(std::size_t i) const { return images_[i]; }
  const std::vector<std::size_t>& images() const noexcept { return images_; }

  /// Same endpoints (by value) and same point function.
  friend bool operator==(const MetMap& a, const MetMap& b);

 private:
  MetMap() = default;
  SpacePtr dom_;
  SpacePtr cod_;
  std::vector<std::size_t> images_;
};

bool same_space(const SpacePtr& a, const SpacePtr& b);

/// outer ∘ inner. Throws MismatchedEndpoints unless inner.cod == outer.dom.
MetMap compose(const MetMap& outer, const MetMap& inner);

/// Sup-metric on a hom-set: max over domain points of cod.d(f(i), g(i)); 0 on an empty domain.
ExtRat hom_dist(const MetMap& f, const MetMap& g);

/// Same as hom_dist, on raw image vectors into `cod`.
ExtRat hom_dist(const Space& cod, std::span<const std::size_t> f, std::span<const std::size_t> g);

bool is_eps_homotopic(const MetMap& f, const MetMap& g, const ExtRat& eps);

/// Distance-preserving on every pair of points (which forces injectivity).
bool is_isometry(const MetMap& f);

}  // namespace metricat
