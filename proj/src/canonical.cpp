#include "metricat/canonical.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "metricat/errors.hpp"

namespace metricat {

namespace {

using Signature = std::pair<std::size_t, std::vector<std::pair<ExtRat, std::size_t>>>;

// Refines `colors` to a stable coloring. Colors are ranks of sorted
// signatures, so the result depends only on the input coloring up to isometry.
void refine(const Space& s, std::vector<std::size_t>& colors) {
  const std::size_t n = s.size();
  std::size_t classes = 0;
  {
    auto sorted = colors;
    std::sort(sorted.begin(), sorted.end());
    classes = static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  }
  while (true) {
    std::vector<Signature> sigs(n);
    for (std::size_t i = 0; i < n; ++i) {
      sigs[i].first = colors[i];
      auto& profile = sigs[i].second;
      profile.reserve(n - 1);
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) profile.emplace_back(s.d(i, j), colors[j]);
      }
      std::sort(profile.begin(), profile.end());
    }
    auto distinct = sigs;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::size_t i = 0; i < n; ++i) {
      colors[i] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), sigs[i]) - distinct.begin());
    }
    if (distinct.size() == classes) return;
    classes = distinct.size();
  }
}

bool twins(const Space& s, std::size_t x, std::size_t y) {
  for (std::size_t z = 0; z < s.size(); ++z) {
    if (z == x || z == y) continue;
    if (s.d(x, z) != s.d(y, z)) return false;
  }
  return true;
}

class Canonicalizer {
 public:
  Canonicalizer(const Space& s, std::uint64_t node_budget) : s_(s), budget_(node_budget) {}

  std::vector<std::size_t> run() {
    std::vector<std::size_t> order;
    std::vector<char> placed(s_.size(), 0);
    explore(order, placed);
    return best_order_;
  }

 private:
  // Compares the column-major prefix fixed by `order` with the same prefix
  // of the best sequence found so far (which may change during the search).
  int compare_prefix(const std::vector<std::size_t>& order) const {
    for (std::size_t p = 1; p < order.size(); ++p) {
      for (std::size_t q = 0; q < p; ++q) {
        const ExtRat& mine = s_.d(order[q], order[p]);
        const ExtRat& theirs = s_.d(best_order_[q], best_order_[p]);
        if (mine < theirs) return -1;
        if (theirs < mine) return 1;
      }
    }
    return 0;
  }

  void explore(std::vector<std::size_t>& order, std::vector<char>& placed) {
    const std::size_t n = s_.size();
    const std::size_t p = order.size();
    if (p == n) {
      if (!have_best_ || compare_prefix(order) < 0) {
        best_order_ = order;
        have_best_ = true;
      }
      return;
    }

    std::vector<std::size_t> colors(n, 0);
    for (std::size_t q = 0; q < p; ++q) colors[order[q]] = q;
    for (std::size_t i = 0; i < n; ++i) {
      if (!placed[i]) colors[i] = p;
    }
    refine(s_, colors);
    std::size_t target = SIZE_MAX;
    for (std::size_t i = 0; i < n; ++i) {
      if (!placed[i]) target = std::min(target, colors[i]);
    }

    std::vector<std::size_t> explored;
    for (std::size_t x = 0; x < n; ++x) {
      if (placed[x] || colors[x] != target) continue;
      bool redundant = false;
      for (std::size_t e : explored) {
        if (twins(s_, e, x)) {
          redundant = true;
          break;
        }
      }
      if (redundant) continue;
      explored.push_back(x);
      if (++nodes_ > budget_) {
        throw BudgetExceeded("canonical_form exceeded " + std::to_string(budget_) + " nodes");
      }
      order.push_back(x);
      placed[x] = 1;
      if (!have_best_ || compare_prefix(order) <= 0) explore(order, placed);
      placed[x] = 0;
      order.pop_back();
    }
  }

  const Space& s_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool have_best_ = false;
  std::vector<std::size_t> best_order_;
};

}  // namespace

CanonicalForm canonical_form(const Space& space, const Budget& budget) {
  if (space.size() > budget.max_points) {
    throw BudgetExceeded("canonical_form: " + std::to_string(space.size()) + " points exceeds budget of " +
                         std::to_string(budget.max_points));
  }
  CanonicalForm form;
  form.order = Canonicalizer(space, budget.max_nodes).run();
  form.space = space.subspace(form.order).with_labels({});
  return form;
}

bool isomorphic(const Space& a, const Space& b, const Budget& budget) {
  if (a.size() != b.size()) return false;
  return canonical_form(a, budget).space == canonical_form(b, budget).space;
}

bool canonical_less(const Space& a, const Space& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t p = 1; p < a.size(); ++p) {
    for (std::size_t q = 0; q < p; ++q) {
      if (a.d(q, p) != b.d(q, p)) return a.d(q, p) < b.d(q, p);
    }
  }
  return false;
}

}  // namespace metricat
