#include "metricat/injectivity.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <stdexcept>

#include "metricat/canonical.hpp"
#include "metricat/errors.hpp"
#include "metricat/hom_search.hpp"

namespace metricat {

TestFamily TestFamily::make(const std::vector<SpacePtr>& spaces, std::size_t size_cap, const Budget& budget) {
  std::vector<Space> forms;
  for (const auto& s : spaces) {
    if (s->size() > size_cap) continue;
    Space canon = canonical_form(*s, budget).space;
    if (std::find(forms.begin(), forms.end(), canon) == forms.end()) forms.push_back(std::move(canon));
  }
  std::sort(forms.begin(), forms.end(), canonical_less);
  TestFamily family;
  family.size_cap = size_cap;
  for (auto& s : forms) family.spaces.push_back(share(std::move(s)));
  return family;
}

namespace {

// Candidate images for h : B -> K such that h(f(a)) lies within `tol` of target[a].
Candidates within(const Space& b, const Space& k, const MetMap& f, std::span<const std::size_t> target,
                  const ExtRat& tol) {
  Candidates allowed(b.size(), k.size());
  for (std::size_t a = 0; a < f.dom().size(); ++a) {
    for (std::size_t y = 0; y < k.size(); ++y) {
      if (k.d(y, target[a]) > tol) allowed.forbid(f(a), y);
    }
  }
  return allowed;
}

bool exists_map(const Space& dom, const Space& cod, Candidates allowed, const Budget& budget) {
  if (allowed.has_empty()) return false;
  HomSearch search(dom, cod, MapKind::NonExpansive, budget.max_nodes);
  search.restrict_to(std::move(allowed));
  return search.count(1) == 1;
}

}  // namespace

InjectivityResult is_eps_injective(const SpacePtr& k, const MetMap& f, const ExtRat& eps, const Budget& budget) {
  InjectivityResult result;
  HomSearch maps_into_k(f.dom(), *k, MapKind::NonExpansive, budget.max_nodes);
  maps_into_k.for_each([&](std::span<const std::size_t> g) {
    if (exists_map(f.cod(), *k, within(f.cod(), *k, f, g, eps), budget)) return true;
    result.injective = false;
    result.witness.emplace(g.begin(), g.end());
    return false;
  });
  return result;
}

ExtRat injectivity_defect(const SpacePtr& k, const MetMap& f, const Budget& budget) {
  HomSearch extensions(f.cod(), *k, MapKind::NonExpansive, budget.max_nodes);
  auto hs = extensions.all();
  ExtRat worst;
  HomSearch maps_into_k(f.dom(), *k, MapKind::NonExpansive, budget.max_nodes);
  maps_into_k.for_each([&](std::span<const std::size_t> g) {
    ExtRat best = ExtRat::inf();
    for (const auto& h : hs) {
      ExtRat d;
      for (std::size_t a = 0; a < g.size() && d < best; ++a) d = max(d, k->d(h[f(a)], g[a]));
      best = min(best, d);
      if (best.is_zero()) break;
    }
    worst = max(worst, best);
    return !worst.is_inf();
  });
  return worst;
}

bool InjReport::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const InjectivityResult& v) { return v.injective; });
}

InjClassResult inj_class(const std::vector<MetMap>& maps, const ExtRat& eps, const std::vector<SpacePtr>& candidates,
                         const Budget& budget, Exec exec) {
  InjClassResult out;
  out.reports.resize(candidates.size());
  std::vector<std::exception_ptr> errors(candidates.size());
  auto evaluate = [&](std::size_t c) {
    InjReport& report = out.reports[c];
    report.subject = candidates[c];
    report.morphisms = maps;
    report.eps = eps;
    for (const auto& f : maps) report.verdicts.push_back(is_eps_injective(candidates[c], f, eps, budget));
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(candidates.size()); ++c) {
      try {
        evaluate(static_cast<std::size_t>(c));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::size_t c = 0; c < candidates.size(); ++c) evaluate(c);
  }
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (out.reports[c].pass()) out.members.push_back(c);
  }
  return out;
}

ApproxInjectivity is_approx_injective(const SpacePtr& k, const MetMap& f, const std::vector<ExtRat>& grid,
                                      const Budget& budget) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].is_zero()) throw std::invalid_argument("approximate injectivity grid must be strictly positive");
    if (i > 0 && !(grid[i] < grid[i - 1])) {
      throw std::invalid_argument("approximate injectivity grid must be strictly descending");
    }
  }
  ApproxInjectivity out;
  for (const auto& eps : grid) {
    bool ok = is_eps_injective(k, f, eps, budget).injective;
    out.grid.emplace_back(eps, ok);
    out.grid_pass = out.grid_pass && ok;
  }
  out.defect = injectivity_defect(k, f, budget);
  out.exact = out.defect.is_zero();
  return out;
}

SplitResult is_eps_split(const MetMap& f, const ExtRat& eps, const Budget& budget) {
  const Space& k = f.dom();
  const Space& l = f.cod();
  std::vector<std::size_t> identity(k.size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
  Candidates allowed = within(l, k, f, identity, eps);
  SplitResult out;
  if (allowed.has_empty()) return out;
  HomSearch search(l, k, MapKind::NonExpansive, budget.max_nodes);
  search.restrict_to(std::move(allowed));
  out.retraction = search.first();
  out.split = out.retraction.has_value();
  return out;
}

const char* to_string(PurityVariant variant) {
  switch (variant) {
    case PurityVariant::Pure: return "pure";
    case PurityVariant::Weak: return "weak";
    case PurityVariant::Bare: return "bare";
  }
  return "unknown";
}

PurityVariant parse_purity_variant(const std::string& text) {
  if (text == "pure") return PurityVariant::Pure;
  if (text == "weak") return PurityVariant::Weak;
  if (text == "bare") return PurityVariant::Bare;
  throw std::invalid_argument("unknown purity variant \"" + text + "\"");
}

PurityResult purity(const MetMap& f, const ExtRat& eps, PurityVariant variant, const TestFamily& family,
                    const Budget& budget) {
  const SpacePtr& k = f.dom_ptr();
  const SpacePtr& l = f.cod_ptr();
  const ExtRat filler_tol = variant == PurityVariant::Weak ? eps.times(2) : eps;
  PurityResult result;

  for (const auto& a : family.spaces) {
    auto us = HomSearch(*a, *k, MapKind::NonExpansive, budget.max_nodes).all();
    if (us.empty()) continue;
    for (const auto& b : family.spaces) {
      auto gs = HomSearch(*a, *b, MapKind::NonExpansive, budget.max_nodes).all();
      for (const auto& g : gs) {
        for (const auto& u : us) {
          // Is there a v : B -> L closing the square?
          Candidates v_allowed(b->size(), l->size());
          for (std::size_t x = 0; x < a->size(); ++x) {
            const std::size_t fu = f(u[x]);
            for (std::size_t y = 0; y < l->size(); ++y) {
              bool ok = variant == PurityVariant::Bare ? y == fu : l->d(y, fu) <= eps;
              if (!ok) v_allowed.forbid(g[x], y);
            }
          }
          if (v_allowed.has_empty()) continue;
          HomSearch v_search(*b, *l, MapKind::NonExpansive, budget.max_nodes);
          v_search.restrict_to(std::move(v_allowed));
          auto v = v_search.first();
          if (!v) continue;
          ++result.squares_checked;

          Candidates t_allowed(b->size(), k->size());
          for (std::size_t x = 0; x < a->size(); ++x) {
            for (std::size_t y = 0; y < k->size(); ++y) {
              if (k->d(y, u[x]) > filler_tol) t_allowed.forbid(g[x], y);
            }
          }
          if (exists_map(*b, *k, std::move(t_allowed), budget)) continue;
          result.pure = false;
          result.counterexample = Square{a, b, g, u, *v};
          return result;
        }
      }
    }
  }
  return result;
}

bool is_grid_ap_pure(const MetMap& f, const std::vector<ExtRat>& grid, PurityVariant variant,
                     const TestFamily& family, const Budget& budget) {
  return std::all_of(grid.begin(), grid.end(),
                     [&](const ExtRat& eps) { return purity(f, eps, variant, family, budget).pure; });
}

}  // namespace metricat
