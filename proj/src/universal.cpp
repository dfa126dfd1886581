#include "metricat/universal.hpp"

#include <omp.h>

#include <exception>

#include "metricat/errors.hpp"
#include "metricat/hom_search.hpp"

namespace metricat {

const char* to_string(UniversalFailure failure) {
  switch (failure) {
    case UniversalFailure::SquareNotEpsCommutative: return "square-not-eps-commutative";
    case UniversalFailure::NoMediator: return "no-mediator";
    case UniversalFailure::NotUnique: return "not-unique";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kFree = SIZE_MAX;

struct TargetOutcome {
  std::uint64_t checked = 0;
  std::optional<UniversalCounterexample> counterexample;
};

// Enumerates the mediators t : apex -> target that agree with `fixed`
// (kFree entries are unconstrained). Returns up to two of them, or nullopt
// if the constraints conflict before any search.
std::vector<std::vector<std::size_t>> mediators(const Space& apex, const Space& target,
                                                const std::vector<std::size_t>& fixed, std::uint64_t node_budget) {
  Candidates constraints(apex.size(), target.size());
  for (std::size_t p = 0; p < apex.size(); ++p) {
    if (fixed[p] != kFree) constraints.fix(p, fixed[p]);
  }
  std::vector<std::vector<std::size_t>> found;
  if (constraints.has_empty()) return found;
  HomSearch search(apex, target, MapKind::NonExpansive, node_budget);
  search.restrict_to(std::move(constraints));
  search.for_each([&](std::span<const std::size_t> t) {
    found.emplace_back(t.begin(), t.end());
    return found.size() < 2;
  });
  return found;
}

// Writes `value` into fixed[p]; returns false on a clash with an earlier value.
bool pin(std::vector<std::size_t>& fixed, std::size_t p, std::size_t value) {
  if (fixed[p] == kFree) {
    fixed[p] = value;
    return true;
  }
  return fixed[p] == value;
}

TargetOutcome check_pushout_target(const EpsPushoutResult& cand, const MetMap& f, const MetMap& g,
                                   const SpacePtr& target, std::size_t index, const Budget& budget) {
  TargetOutcome out;
  const Space& a = f.dom();
  const Space& b = f.cod();
  const Space& c = g.cod();
  const Space& d = *target;
  const Space& apex = *cand.apex;

  HomSearch g_search(b, d, MapKind::NonExpansive, budget.max_nodes);
  g_search.for_each([&](std::span<const std::size_t> g_prime) {
    Candidates allowed(c.size(), d.size());
    for (std::size_t x = 0; x < a.size(); ++x) {
      for (std::size_t y = 0; y < d.size(); ++y) {
        if (d.d(y, g_prime[f(x)]) > cand.eps) allowed.forbid(g(x), y);
      }
    }
    if (allowed.has_empty()) return true;
    HomSearch f_search(c, d, MapKind::NonExpansive, budget.max_nodes);
    f_search.restrict_to(std::move(allowed));
    bool keep_going = f_search.for_each([&](std::span<const std::size_t> f_prime) {
      ++out.checked;
      std::vector<std::size_t> fixed(apex.size(), kFree);
      bool consistent = true;
      for (std::size_t y = 0; y < c.size() && consistent; ++y) consistent = pin(fixed, cand.leg_f(y), f_prime[y]);
      for (std::size_t y = 0; y < b.size() && consistent; ++y) consistent = pin(fixed, cand.leg_g(y), g_prime[y]);
      std::vector<std::vector<std::size_t>> found;
      if (consistent) found = mediators(apex, d, fixed, budget.max_nodes);
      if (found.size() == 1) return true;
      UniversalCounterexample cex;
      cex.kind = found.empty() ? UniversalFailure::NoMediator : UniversalFailure::NotUnique;
      cex.target_index = index;
      cex.target = target;
      cex.f_prime.assign(f_prime.begin(), f_prime.end());
      cex.g_prime.assign(g_prime.begin(), g_prime.end());
      cex.mediators = std::move(found);
      out.counterexample = std::move(cex);
      return false;
    });
    return keep_going;
  });
  return out;
}

UniversalReport merge(std::vector<TargetOutcome>& outcomes) {
  UniversalReport report;
  for (auto& o : outcomes) {
    report.cospans_checked += o.checked;
    if (o.counterexample) {
      report.pass = false;
      report.counterexample = std::move(o.counterexample);
      break;
    }
  }
  return report;
}

}  // namespace

UniversalReport verify_universal(const EpsPushoutResult& candidate, const MetMap& f, const MetMap& g,
                                 const std::vector<SpacePtr>& targets, const Budget& budget, Exec exec) {
  if (!same_space(f.dom_ptr(), g.dom_ptr()) || !same_space(candidate.leg_g.dom_ptr(), f.cod_ptr()) ||
      !same_space(candidate.leg_f.dom_ptr(), g.cod_ptr())) {
    throw MismatchedEndpoints("verify_universal: candidate legs do not match the span");
  }
  UniversalReport report;
  if (hom_dist(compose(candidate.leg_f, g), compose(candidate.leg_g, f)) > candidate.eps) {
    report.pass = false;
    report.counterexample = UniversalCounterexample{UniversalFailure::SquareNotEpsCommutative, std::nullopt,
                                                    nullptr, {}, {}, {}};
    return report;
  }

  std::vector<TargetOutcome> outcomes(targets.size());
  if (exec == Exec::Serial) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      outcomes[t] = check_pushout_target(candidate, f, g, targets[t], t, budget);
      if (outcomes[t].counterexample) break;
    }
    return merge(outcomes);
  }

  std::vector<std::exception_ptr> errors(targets.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(targets.size()); ++t) {
    try {
      outcomes[t] = check_pushout_target(candidate, f, g, targets[t], static_cast<std::size_t>(t), budget);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (outcomes[t].counterexample) break;
    if (errors[t]) std::rethrow_exception(errors[t]);
  }
  return merge(outcomes);
}

UniversalReport verify_coequalizer(const Coequalizer& candidate, const MetMap& f, const MetMap& g,
                                   const std::vector<SpacePtr>& targets, const Budget& budget) {
  if (!same_space(candidate.leg.dom_ptr(), f.cod_ptr())) {
    throw MismatchedEndpoints("verify_coequalizer: candidate leg does not start at the pair's codomain");
  }
  UniversalReport report;
  if (hom_dist(compose(candidate.leg, f), compose(candidate.leg, g)) > candidate.eps) {
    report.pass = false;
    report.counterexample = UniversalCounterexample{UniversalFailure::SquareNotEpsCommutative, std::nullopt,
                                                    nullptr, {}, {}, {}};
    return report;
  }
  const Space& a = f.dom();
  const Space& b = f.cod();
  const Space& apex = *candidate.apex;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Space& d = *targets[t];
    HomSearch search(b, d, MapKind::NonExpansive, budget.max_nodes);
    search.for_each([&](std::span<const std::size_t> h) {
      for (std::size_t x = 0; x < a.size(); ++x) {
        if (d.d(h[f(x)], h[g(x)]) > candidate.eps) return true;
      }
      ++report.cospans_checked;
      std::vector<std::size_t> fixed(apex.size(), kFree);
      bool consistent = true;
      for (std::size_t y = 0; y < b.size() && consistent; ++y) consistent = pin(fixed, candidate.leg(y), h[y]);
      std::vector<std::vector<std::size_t>> found;
      if (consistent) found = mediators(apex, d, fixed, budget.max_nodes);
      if (found.size() == 1) return true;
      UniversalCounterexample cex;
      cex.kind = found.empty() ? UniversalFailure::NoMediator : UniversalFailure::NotUnique;
      cex.target_index = t;
      cex.target = targets[t];
      cex.g_prime.assign(h.begin(), h.end());
      cex.mediators = std::move(found);
      report.pass = false;
      report.counterexample = std::move(cex);
      return false;
    });
    if (!report.pass) break;
  }
  return report;
}

}  // namespace metricat
