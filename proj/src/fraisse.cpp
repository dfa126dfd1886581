#include "metricat/fraisse.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "metricat/canonical.hpp"
#include "metricat/colimit.hpp"
#include "metricat/constructions.hpp"
#include "metricat/errors.hpp"
#include "metricat/hom_search.hpp"

namespace metricat {

DistanceGrid DistanceGrid::make(std::vector<ExtRat> values, std::size_t max_size) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.empty()) throw std::invalid_argument("distance grid is empty");
  if (values.front().is_zero()) throw std::invalid_argument("distance grid values must be positive");
  return DistanceGrid{std::move(values), max_size};
}

namespace {

struct CanonicalLess {
  bool operator()(const Space& a, const Space& b) const { return canonical_less(a, b); }
};

class SpaceEnumerator {
 public:
  SpaceEnumerator(const DistanceGrid& grid, const Budget& budget) : grid_(grid), budget_(budget) {}

  void run(std::size_t n) {
    n_ = n;
    dist_.assign(n * n, ExtRat());
    pairs_.clear();
    for (std::size_t j = 1; j < n; ++j) {
      for (std::size_t i = 0; i < j; ++i) pairs_.emplace_back(i, j);
    }
    assign(0);
  }

  std::set<Space, CanonicalLess>& found() { return found_; }

 private:
  const ExtRat& d(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

  // Triangles closed by the pair (i, j), given every pair before it in
  // (j, i) order is already assigned.
  bool consistent(std::size_t i, std::size_t j) const {
    for (std::size_t k = 0; k < i; ++k) {
      if (d(i, j) > d(i, k) + d(k, j)) return false;
      if (d(k, j) > d(k, i) + d(i, j)) return false;
      if (d(k, i) > d(i, j) + d(k, j)) return false;
    }
    return true;
  }

  void assign(std::size_t p) {
    if (p == pairs_.size()) {
      Space s = Space::unchecked(n_, dist_);
      found_.insert(canonical_form(s, budget_).space);
      return;
    }
    auto [i, j] = pairs_[p];
    for (const auto& value : grid_.values) {
      if (++nodes_ > budget_.max_nodes) throw BudgetExceeded("space enumeration exceeded the node budget");
      dist_[i * n_ + j] = value;
      dist_[j * n_ + i] = value;
      if (consistent(i, j)) assign(p + 1);
    }
  }

  const DistanceGrid& grid_;
  const Budget& budget_;
  std::size_t n_ = 0;
  std::vector<ExtRat> dist_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::set<Space, CanonicalLess> found_;
  std::uint64_t nodes_ = 0;
};

std::size_t stratum_of(std::size_t dom_size, std::size_t cod_size) {
  std::size_t m = std::max(dom_size, cod_size);
  return m == 0 ? 0 : m - 1;
}

std::vector<std::size_t> compose_images(const std::vector<std::size_t>& outer, std::span<const std::size_t> inner) {
  std::vector<std::size_t> out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

// Is there an isometry v : Y -> target with v(h(x)) = image[x]?
bool isometric_extension(const Space& y, const Space& target, const MetMap& h, std::span<const std::size_t> image,
                         const Budget& budget) {
  Candidates allowed(y.size(), target.size());
  for (std::size_t x = 0; x < image.size(); ++x) allowed.fix(h(x), image[x]);
  if (allowed.has_empty()) return false;
  HomSearch search(y, target, MapKind::Isometric, budget.max_nodes);
  search.restrict_to(std::move(allowed));
  return search.count(1) == 1;
}

}  // namespace

std::vector<SpacePtr> enumerate_spaces(const DistanceGrid& grid, const Budget& budget) {
  if (grid.max_size > budget.max_points) throw BudgetExceeded("grid max size exceeds the point budget");
  SpaceEnumerator enumerator(grid, budget);
  for (std::size_t n = 0; n <= grid.max_size; ++n) enumerator.run(n);
  std::vector<SpacePtr> out;
  for (const auto& s : enumerator.found()) out.push_back(share(s));
  return out;
}

std::size_t IsometryCatalog::max_stratum() const {
  std::size_t m = 0;
  for (const auto& e : isometries) m = std::max(m, e.stratum);
  return m;
}

IsometryCatalog catalog_isometries(const std::vector<SpacePtr>& spaces, const Budget& budget) {
  IsometryCatalog catalog;
  catalog.spaces = spaces;
  std::vector<std::vector<std::vector<std::size_t>>> automorphisms(spaces.size());
  for (std::size_t y = 0; y < spaces.size(); ++y) {
    automorphisms[y] = HomSearch(*spaces[y], *spaces[y], MapKind::Isometric, budget.max_nodes).all();
  }
  for (std::size_t x = 0; x < spaces.size(); ++x) {
    for (std::size_t y = 0; y < spaces.size(); ++y) {
      if (spaces[x]->size() > spaces[y]->size()) continue;
      auto raw = HomSearch(*spaces[x], *spaces[y], MapKind::Isometric, budget.max_nodes).all();
      for (auto& h : raw) {
        bool least = std::all_of(automorphisms[y].begin(), automorphisms[y].end(),
                                 [&](const std::vector<std::size_t>& sigma) { return !(compose_images(sigma, h) < h); });
        if (!least) continue;
        catalog.isometries.push_back(CatalogEntry{x, y, MetMap::unchecked(spaces[x], spaces[y], std::move(h)),
                                                  stratum_of(spaces[x]->size(), spaces[y]->size())});
      }
    }
  }
  std::stable_sort(catalog.isometries.begin(), catalog.isometries.end(),
                   [](const CatalogEntry& a, const CatalogEntry& b) { return a.stratum < b.stratum; });
  return catalog;
}

const char* to_string(SpanPolicy policy) {
  switch (policy) {
    case SpanPolicy::IsoSkip: return "iso-skip";
    case SpanPolicy::Iso: return "iso";
    case SpanPolicy::Full: return "full";
    case SpanPolicy::FullSkip: return "full-skip";
  }
  return "unknown";
}

SpanPolicy parse_span_policy(const std::string& text) {
  if (text == "iso-skip") return SpanPolicy::IsoSkip;
  if (text == "iso") return SpanPolicy::Iso;
  if (text == "full") return SpanPolicy::Full;
  if (text == "full-skip") return SpanPolicy::FullSkip;
  throw std::invalid_argument("unknown span policy \"" + text + "\" (expected iso-skip, iso, full or full-skip)");
}

SpanCollection collect_spans(const SpacePtr& k, const IsometryCatalog& catalog, std::size_t stratum, SpanPolicy policy,
                             const ChainBudget& budget) {
  const bool isometric = policy == SpanPolicy::IsoSkip || policy == SpanPolicy::Iso;
  const bool skip = policy == SpanPolicy::IsoSkip || policy == SpanPolicy::FullSkip;
  SpanCollection out;
  for (std::size_t e = 0; e < catalog.isometries.size(); ++e) {
    const CatalogEntry& entry = catalog.isometries[e];
    if (entry.stratum > stratum) continue;
    const Space& x = *catalog.spaces[entry.dom];
    const Space& y = *catalog.spaces[entry.cod];
    HomSearch us(x, *k, isometric ? MapKind::Isometric : MapKind::NonExpansive, budget.search.max_nodes);
    us.for_each([&](std::span<const std::size_t> u) {
      if (skip && isometric_extension(y, *k, entry.map, u, budget.search)) {
        ++out.skipped;
        return true;
      }
      if (out.spans.size() == budget.max_spans) {
        throw BudgetExceeded("more than " + std::to_string(budget.max_spans) + " spans at stratum " +
                             std::to_string(stratum));
      }
      out.spans.push_back(SpanRequest{e, std::vector<std::size_t>(u.begin(), u.end())});
      return true;
    });
  }
  return out;
}

ChainStepResult chain_step(const SpacePtr& k, const IsometryCatalog& catalog, const std::vector<SpanRequest>& spans,
                           const ChainBudget& budget) {
  std::vector<SpacePtr> xs, ys;
  std::vector<std::size_t> y_offset;
  std::size_t growth = 0, y_total = 0;
  for (const auto& s : spans) {
    const CatalogEntry& entry = catalog.isometries.at(s.entry);
    xs.push_back(catalog.spaces[entry.dom]);
    ys.push_back(catalog.spaces[entry.cod]);
    y_offset.push_back(y_total);
    y_total += ys.back()->size();
    growth += ys.back()->size() - xs.back()->size();
  }
  if (k->size() + growth > budget.max_stage_points) {
    throw BudgetExceeded("next stage would have " + std::to_string(k->size() + growth) + " points (cap " +
                         std::to_string(budget.max_stage_points) + ")");
  }
  Coproduct sx = coproduct(xs);
  Coproduct sy = coproduct(ys);
  std::vector<std::size_t> u_all, h_all;
  for (std::size_t j = 0; j < spans.size(); ++j) {
    const MetMap& h = catalog.isometries[spans[j].entry].map;
    for (std::size_t x = 0; x < h.dom().size(); ++x) {
      u_all.push_back(spans[j].u.at(x));
      h_all.push_back(y_offset[j] + h(x));
    }
  }
  const SpacePtr& sx_ptr = sx.space;
  MetMap u_map(sx_ptr, k, std::move(u_all));
  MetMap h_map = MetMap::unchecked(sx_ptr, sy.space, std::move(h_all));
  EpsPushoutResult p = pushout(u_map, h_map);
  if (!is_isometry(p.leg_g)) throw std::logic_error("chain_step: stage embedding is not an isometry");

  ChainStepResult out{p.apex, p.leg_g, {}};
  for (std::size_t j = 0; j < spans.size(); ++j) {
    std::vector<std::size_t> copy(ys[j]->size());
    for (std::size_t y = 0; y < copy.size(); ++y) copy[y] = p.leg_f(y_offset[j] + y);
    out.log.push_back(SpanRecord{spans[j].entry, spans[j].u, std::move(copy)});
  }
  return out;
}

ChainResult build_chain(const IsometryCatalog& catalog, std::size_t steps, SpanPolicy policy,
                        const ChainBudget& budget) {
  ChainResult result;
  ChainStage first;
  first.space = share(Space::unchecked(0, {}));
  result.stages.push_back(std::move(first));
  for (std::size_t n = 0; n < steps; ++n) {
    ChainStage& current = result.stages.back();
    try {
      SpanCollection spans = collect_spans(current.space, catalog, n, policy, budget);
      ChainStepResult step = chain_step(current.space, catalog, spans.spans, budget);
      current.embedding = step.embedding;
      current.spans = std::move(step.log);
      current.stratum = n;
      current.skipped = spans.skipped;
      ChainStage next;
      next.index = n + 1;
      next.space = step.next;
      result.stages.push_back(std::move(next));
    } catch (const BudgetExceeded& e) {
      result.complete = false;
      result.stop_reason = "step " + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  return result;
}

AuditReport audit_saturation(const std::vector<ChainStage>& stages, const IsometryCatalog& catalog,
                             FinalStage final_stage, const Budget& budget) {
  if (stages.empty()) throw std::invalid_argument("audit_saturation: no stages");
  AuditReport report;
  auto problem = [&](std::string text) {
    report.pass = false;
    report.problems.push_back(std::move(text));
  };

  for (std::size_t n = 0; n + 1 < stages.size(); ++n) {
    const ChainStage& stage = stages[n];
    if (!stage.embedding) {
      problem("stage " + std::to_string(n) + " has a successor but no embedding");
      continue;
    }
    if (!same_space(stage.embedding->dom_ptr(), stage.space) ||
        !same_space(stage.embedding->cod_ptr(), stages[n + 1].space)) {
      problem("embedding " + std::to_string(n) + " does not connect consecutive stages");
    } else if (!is_isometry(*stage.embedding)) {
      problem("embedding " + std::to_string(n) + " is not an isometry");
    }
  }
  if (!report.pass) return report;

  // Composites k_{n,m} for n < m.
  for (std::size_t n = 0; n + 1 < stages.size(); ++n) {
    MetMap composite = *stages[n].embedding;
    for (std::size_t m = n + 1; m + 1 < stages.size(); ++m) {
      composite = compose(*stages[m].embedding, composite);
      if (!is_isometry(composite)) {
        problem("composite embedding " + std::to_string(n) + " -> " + std::to_string(m + 1) + " is not an isometry");
      }
    }
  }

  // Span log entries commute: copy∘h = k∘u.
  for (std::size_t n = 0; n + 1 < stages.size(); ++n) {
    const ChainStage& stage = stages[n];
    const Space& next = *stages[n + 1].space;
    for (std::size_t r = 0; r < stage.spans.size(); ++r) {
      const SpanRecord& rec = stage.spans[r];
      const std::string where = "stage " + std::to_string(n) + " span " + std::to_string(r);
      if (rec.entry >= catalog.isometries.size()) {
        problem(where + ": unknown catalog entry");
        continue;
      }
      const CatalogEntry& entry = catalog.isometries[rec.entry];
      const Space& y = *catalog.spaces[entry.cod];
      if (rec.u.size() != entry.map.dom().size() || rec.copy.size() != y.size()) {
        problem(where + ": wrong arity");
        continue;
      }
      bool in_range = std::all_of(rec.copy.begin(), rec.copy.end(), [&](std::size_t p) { return p < next.size(); }) &&
                      std::all_of(rec.u.begin(), rec.u.end(), [&](std::size_t p) { return p < stage.space->size(); });
      if (!in_range) {
        problem(where + ": point index out of range");
        continue;
      }
      for (std::size_t x = 0; x < rec.u.size(); ++x) {
        if (rec.copy[entry.map(x)] != (*stage.embedding)(rec.u[x])) {
          problem(where + ": copy does not restrict to the embedded u");
          break;
        }
      }
      for (std::size_t a = 0; a < y.size(); ++a) {
        for (std::size_t b = 0; b < y.size(); ++b) {
          if (next.d(rec.copy[a], rec.copy[b]) > y.d(a, b)) {
            problem(where + ": copy is not non-expansive");
            a = b = y.size();
          }
        }
      }
    }
  }

  // Extension property.
  auto check_stage = [&](std::size_t n, const Space& target, const std::vector<std::size_t>* embed, bool pending) {
    const Space& k = *stages[n].space;
    for (std::size_t e = 0; e < catalog.isometries.size(); ++e) {
      const CatalogEntry& entry = catalog.isometries[e];
      if (entry.stratum > n) continue;
      const Space& x = *catalog.spaces[entry.dom];
      const Space& y = *catalog.spaces[entry.cod];
      HomSearch us(x, k, MapKind::Isometric, budget.max_nodes);
      us.for_each([&](std::span<const std::size_t> u) {
        std::vector<std::size_t> image(u.begin(), u.end());
        if (embed) image = compose_images(*embed, u);
        bool ok = isometric_extension(y, target, entry.map, image, budget);
        if (pending) {
          if (!ok) ++report.pending;
          return true;
        }
        ++report.extensions_checked;
        if (!ok) {
          report.pass = false;
          report.missing.push_back(MissingExtension{n, e, std::vector<std::size_t>(u.begin(), u.end())});
        }
        return true;
      });
    }
  };
  for (std::size_t n = 0; n + 1 < stages.size(); ++n) {
    std::vector<std::size_t> embed(stages[n].embedding->images().begin(), stages[n].embedding->images().end());
    check_stage(n, *stages[n + 1].space, &embed, false);
  }
  const std::size_t last = stages.size() - 1;
  check_stage(last, *stages[last].space, nullptr, final_stage == FinalStage::Pending);
  return report;
}

}  // namespace metricat
