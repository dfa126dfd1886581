#include "metricat/reflect.hpp"

#include <omp.h>

namespace metricat {

Semimetric Semimetric::from_space(const Space& s) {
  Semimetric out(s.size());
  out.dist_ = s.matrix();
  return out;
}

void Semimetric::set(std::size_t i, std::size_t j, const ExtRat& value) {
  if (i == j) return;
  dist_[i * n_ + j] = value;
  dist_[j * n_ + i] = value;
}

void Semimetric::lower(std::size_t i, std::size_t j, const ExtRat& value) {
  if (i == j) return;
  if (value < dist_[i * n_ + j]) set(i, j, value);
}

void shortest_path_closure(std::size_t n, std::vector<ExtRat>& dist, Exec exec) {
  for (std::size_t k = 0; k < n; ++k) {
    // Row k and column k do not change during pivot k, so rows are independent.
    const ExtRat* pivot_row = dist.data() + k * n;
    auto relax_row = [&](std::size_t i) {
      if (i == k) return;
      const ExtRat& dik = dist[i * n + k];
      if (dik.is_inf()) return;
      ExtRat* row = dist.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        if (pivot_row[j].is_inf()) continue;
        ExtRat via = dik + pivot_row[j];
        if (via < row[j]) row[j] = std::move(via);
      }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) relax_row(static_cast<std::size_t>(i));
    } else {
      for (std::size_t i = 0; i < n; ++i) relax_row(i);
    }
  }
}

Reflection reflect(const Semimetric& s, Exec exec) {
  const std::size_t n = s.size();
  std::vector<ExtRat> closed = s.matrix();
  shortest_path_closure(n, closed, exec);

  Reflection out;
  out.projection.assign(n, 0);
  std::vector<std::size_t> representatives;
  for (std::size_t x = 0; x < n; ++x) {
    bool merged = false;
    for (std::size_t c = 0; c < representatives.size(); ++c) {
      if (closed[representatives[c] * n + x].is_zero()) {
        out.projection[x] = c;
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.projection[x] = representatives.size();
      representatives.push_back(x);
    }
  }
  const std::size_t m = representatives.size();
  std::vector<ExtRat> dist(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) dist[a * m + b] = closed[representatives[a] * n + representatives[b]];
  }
  out.space = Space::unchecked(m, std::move(dist));
  return out;
}

}  // namespace metricat
