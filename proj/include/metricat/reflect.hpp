#pragma once

#include <vector>

#include "metricat/budget.hpp"
#include "metricat/space.hpp"

namespace metricat {

/// Symmetric ExtRat matrix with zero diagonal. Neither the triangle
/// inequality nor separation is required.
class Semimetric {
 public:
  explicit Semimetric(std::size_t n = 0) : n_(n), dist_(n * n, ExtRat::inf()) {
    for (std::size_t i = 0; i < n; ++i) dist_[i * n + i] = ExtRat();
  }
  static Semimetric from_space(const Space& s);

  std::size_t size() const noexcept { return n_; }
  const ExtRat& d(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  /// Sets both d(i,j) and d(j,i). Ignored on the diagonal.
  void set(std::size_t i, std::size_t j, const ExtRat& value);
  /// d(i,j) := min(d(i,j), value), symmetrically.
  void lower(std::size_t i, std::size_t j, const ExtRat& value);
  const std::vector<ExtRat>& matrix() const noexcept { return dist_; }

 private:
  std::size_t n_;
  std::vector<ExtRat> dist_;
};

/// Shortest-path closure in place: d(i,j) becomes the minimum over chains
/// i = y_0, ..., y_k = j of the summed step distances. Floyd-Warshall over
/// ExtRat; the parallel kernel distributes rows for each pivot.
void shortest_path_closure(std::size_t n, std::vector<ExtRat>& dist, Exec exec = Exec::Serial);

struct Reflection {
  Space space;
  /// projection[x] is the point of `space` that input point x lands on.
  std::vector<std::size_t> projection;
};

/// Metric reflection of a semimetric: shortest-path closure, then points at
/// distance 0 are identified. Classes are numbered by their smallest member.
Reflection reflect(const Semimetric& s, Exec exec = Exec::Serial);

}  // namespace metricat
