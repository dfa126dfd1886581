#include "metricat/space.hpp"

#include <sstream>

#include "metricat/errors.hpp"

namespace metricat {

Space Space::unchecked(std::size_t n, std::vector<ExtRat> dist, std::vector<std::string> labels) {
  Space s;
  s.n_ = n;
  s.dist_ = std::move(dist);
  s.labels_ = std::move(labels);
  return s;
}

Space Space::with_labels(std::vector<std::string> labels) const {
  if (!labels.empty() && labels.size() != n_) {
    throw std::invalid_argument("label count does not match point count");
  }
  Space s = *this;
  s.labels_ = std::move(labels);
  return s;
}

Space Space::subspace(std::span<const std::size_t> points) const {
  const std::size_t m = points.size();
  std::vector<ExtRat> dist(m * m);
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) dist[a * m + b] = d(points[a], points[b]);
    if (!labels_.empty()) labels.push_back(labels_[points[a]]);
  }
  return unchecked(m, std::move(dist), std::move(labels));
}

Space point_space() { return Space::unchecked(1, {ExtRat()}); }

Space two_point(const ExtRat& eps) {
  if (eps.is_zero()) return point_space();
  return Space::unchecked(2, {ExtRat(), eps, eps, ExtRat()});
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::NotSquare: os << "NotSquare(row " << i << ")"; break;
    case Kind::NonZeroDiagonal: os << "NonZeroDiagonal(" << i << ")"; break;
    case Kind::Asymmetric: os << "Asymmetric(" << i << "," << j << ")"; break;
    case Kind::ZeroOffDiagonal: os << "ZeroOffDiagonal(" << i << "," << j << ")"; break;
    case Kind::TriangleViolation: os << "TriangleViolation(" << i << "," << j << "," << k << ")"; break;
  }
  return os.str();
}

ValidationResult validate_space(const std::vector<std::vector<ExtRat>>& rows, std::vector<std::string> labels) {
  ValidationResult result;
  const std::size_t n = rows.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) result.violations.push_back({Violation::Kind::NotSquare, i});
  }
  if (!labels.empty() && labels.size() != n) {
    result.violations.push_back({Violation::Kind::NotSquare, n});
  }
  if (!result.violations.empty()) return result;

  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i][i].is_zero()) result.violations.push_back({Violation::Kind::NonZeroDiagonal, i});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rows[i][j] != rows[j][i]) result.violations.push_back({Violation::Kind::Asymmetric, i, j});
      if (rows[i][j].is_zero() || rows[j][i].is_zero()) {
        result.violations.push_back({Violation::Kind::ZeroOffDiagonal, i, j});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (rows[i][j] > rows[i][k] + rows[k][j]) {
          result.violations.push_back({Violation::Kind::TriangleViolation, i, j, k});
        }
      }
    }
  }
  if (!result.violations.empty()) return result;

  std::vector<ExtRat> dist;
  dist.reserve(n * n);
  for (const auto& row : rows) dist.insert(dist.end(), row.begin(), row.end());
  result.space = Space::unchecked(n, std::move(dist), std::move(labels));
  return result;
}

bool same_space(const SpacePtr& a, const SpacePtr& b) { return a == b || *a == *b; }

MetMap::MetMap(SpacePtr dom, SpacePtr cod, std::vector<std::size_t> images)
    : dom_(std::move(dom)), cod_(std::move(cod)), images_(std::move(images)) {
  if (images_.size() != dom_->size()) {
    throw InvalidMorphism("map has " + std::to_string(images_.size()) + " entries, domain has " +
                          std::to_string(dom_->size()) + " points");
  }
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] >= cod_->size()) {
      throw InvalidMorphism("image of point " + std::to_string(i) + " is out of range");
    }
  }
  for (std::size_t i = 0; i < images_.size(); ++i) {
    for (std::size_t j = i + 1; j < images_.size(); ++j) {
      if (cod_->d(images_[i], images_[j]) > dom_->d(i, j)) {
        throw InvalidMorphism("map expands the distance between points " + std::to_string(i) + " and " +
                              std::to_string(j));
      }
    }
  }
}

MetMap MetMap::unchecked(SpacePtr dom, SpacePtr cod, std::vector<std::size_t> images) {
  MetMap m;
  m.dom_ = std::move(dom);
  m.cod_ = std::move(cod);
  m.images_ = std::move(images);
  return m;
}

MetMap MetMap::identity(const SpacePtr& space) {
  std::vector<std::size_t> images(space->size());
  for (std::size_t i = 0; i < images.size(); ++i) images[i] = i;
  return unchecked(space, space, std::move(images));
}

bool operator==(const MetMap& a, const MetMap& b) {
  return a.images_ == b.images_ && same_space(a.dom_, b.dom_) && same_space(a.cod_, b.cod_);
}

MetMap compose(const MetMap& outer, const MetMap& inner) {
  if (!same_space(inner.cod_ptr(), outer.dom_ptr())) {
    throw MismatchedEndpoints("compose: codomain of inner map differs from domain of outer map");
  }
  std::vector<std::size_t> images(inner.images().size());
  for (std::size_t i = 0; i < images.size(); ++i) images[i] = outer(inner(i));
  return MetMap::unchecked(inner.dom_ptr(), outer.cod_ptr(), std::move(images));
}

ExtRat hom_dist(const Space& cod, std::span<const std::size_t> f, std::span<const std::size_t> g) {
  ExtRat worst;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const ExtRat& d = cod.d(f[i], g[i]);
    if (worst < d) worst = d;
  }
  return worst;
}

ExtRat hom_dist(const MetMap& f, const MetMap& g) {
  if (!same_space(f.dom_ptr(), g.dom_ptr()) || !same_space(f.cod_ptr(), g.cod_ptr())) {
    throw MismatchedEndpoints("hom_dist: maps are not parallel");
  }
  return hom_dist(f.cod(), f.images(), g.images());
}

bool is_eps_homotopic(const MetMap& f, const MetMap& g, const ExtRat& eps) { return hom_dist(f, g) <= eps; }

bool is_isometry(const MetMap& f) {
  const auto& img = f.images();
  for (std::size_t i = 0; i < img.size(); ++i) {
    for (std::size_t j = i + 1; j < img.size(); ++j) {
      if (f.cod().d(img[i], img[j]) != f.dom().d(i, j)) return false;
    }
  }
  return true;
}

}  // namespace metricat
