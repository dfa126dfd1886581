#include "metricat/laws.hpp"

#include <omp.h>

#include <exception>
#include <functional>

#include "metricat/colimit.hpp"
#include "metricat/constructions.hpp"
#include "metricat/corpus.hpp"
#include "metricat/fraisse.hpp"
#include "metricat/hom_search.hpp"
#include "metricat/injectivity.hpp"

namespace metricat {

namespace {

struct LawSpec {
  const char* id;
  const char* statement;
};

// The order here is the order of the report.
enum Law : std::size_t {
  kPureComposite,
  kPureCancellation,
  kWeakCancellation,
  kBareCancellation,
  kSplitMonoPure,
  kPureImpliesWeak,
  kPureImpliesBare,
  kWeakImpliesBareDouble,
  kSplitMonoEpsSplit,
  kEpsSplitWeak,
  kEpsSplitBare,
  kEpsSplitDoubleMono,
  kBareDoubleMono,
  kClosePureDoubleWeak,
  kClosePureBare,
  kFactorPureDoubleWeak,
  kFactorPureBare,
  kInjectiveMonotone,
  kInjectiveInfinite,
  kInjectiveZeroDirect,
  kInjectiveDefect,
  kInjectiveProducts,
  kInjectiveRetracts,
  kInjectivePushoutLeg,
  kInjectiveMappingCylinder,
  kGridApPureComposite,
  kGridApPureCancellation,
  kSplitMonotone,
  kBareMonotone,
  kFamilyMonotone,
  kEnrichment,
  kTransitivity,
  kHomDistMetric,
  kLawCount
};

constexpr LawSpec kLaws[kLawCount] = {
    {"pure-composite", "f : K -> L and f2 : L -> M pure at eps imply f2.f pure at eps"},
    {"pure-cancellation", "f2.f pure at eps implies f pure at eps"},
    {"weak-cancellation", "f2.f weakly pure at eps implies f weakly pure at eps"},
    {"bare-cancellation", "f2.f barely pure at eps implies f barely pure at eps"},
    {"split-mono-pure", "a split monomorphism is pure at eps"},
    {"pure-implies-weak", "pure at eps implies weakly pure at eps"},
    {"pure-implies-bare", "pure at eps implies barely pure at eps"},
    {"weak-implies-bare-double", "weakly pure at eps implies barely pure at 2eps"},
    {"split-mono-eps-split", "a split monomorphism is eps-split"},
    {"eps-split-weak", "eps-split implies weakly pure at eps"},
    {"eps-split-bare", "eps-split implies barely pure at eps"},
    {"eps-split-double-mono", "eps-split implies 2eps-mono"},
    {"bare-double-mono", "barely pure at eps over {1} and every 2_d, d a distance of K, implies 2eps-mono"},
    {"close-pure-double-weak", "f' ~eps f and f pure at 2eps imply f' weakly pure at eps"},
    {"close-pure-bare", "f' ~eps f and f pure at eps imply f' barely pure at eps"},
    {"factor-pure-double-weak", "f2.f ~eps h and h pure at 2eps imply f weakly pure at eps"},
    {"factor-pure-bare", "f2.f ~eps h and h pure at eps imply f barely pure at eps"},
    {"injective-monotone", "eps-injective implies eps'-injective for eps' >= eps"},
    {"injective-infinite", "X is inf-injective to f : K -> L iff hom(K, X) is empty or hom(L, X) is not"},
    {"injective-zero-direct", "X is 0-injective to f iff every g : K -> X is h.f for some h"},
    {"injective-defect", "X is eps-injective to f iff eps >= the injectivity defect"},
    {"injective-products", "X1, X2 eps-injective to f imply X1 x X2 eps-injective to f"},
    {"injective-retracts", "a retract of an eps-injective object is eps-injective"},
    {"injective-pushout-leg", "X eps-injective to f implies X injective to the opposite leg of an eps-pushout of f"},
    {"injective-mapping-cylinder", "X eps-injective to f iff X injective to the leg K -> apex of the eps-pushout of (id_K, f)"},
    {"grid-ap-pure-composite", "pure on the whole grid is closed under composition"},
    {"grid-ap-pure-cancellation", "f2.f pure on the whole grid implies f pure on the whole grid"},
    {"split-monotone", "eps-split implies eps'-split for eps' >= eps"},
    {"bare-monotone", "barely pure at eps implies barely pure at eps' >= eps"},
    {"family-monotone", "each purity variant over a family implies it over a subfamily"},
    {"enrichment", "hom_dist(h.f, h.f') and hom_dist(f.k, f'.k) are at most hom_dist(f, f')"},
    {"transitivity", "f ~a f' and f' ~b f'' imply f ~(a+b) f''"},
    {"hom-dist-metric", "hom_dist is symmetric, zero exactly on equal maps, and satisfies the triangle inequality"},
};

enum Observation : std::size_t { kPureMonotone, kWeakMonotone, kObservationCount };

constexpr LawSpec kObservations[kObservationCount] = {
    {"pure-monotone", "pure at eps implies pure at eps' >= eps (not a theorem)"},
    {"weak-monotone", "weakly pure at eps implies weakly pure at eps' >= eps (not a theorem)"},
};

struct Tally {
  std::uint64_t checked = 0;
  std::uint64_t premise = 0;
  std::uint64_t failures = 0;
  std::optional<Json> counterexample;
};

struct InstanceResult {
  std::vector<Tally> laws = std::vector<Tally>(kLawCount);
  std::vector<Tally> observations = std::vector<Tally>(kObservationCount);
};

struct Shared {
  TestFamily family;
  TestFamily subfamily;
  std::vector<ExtRat> grid;
  std::vector<ExtRat> eps_values;
  std::vector<ExtRat> ap_grid;
};

Json map_json(const MetMap& m) { return to_json(m); }

MetMap placeholder() { return MetMap::identity(share(point_space())); }

class Instance {
 public:
  Instance(const Shared& shared, const LawConfig& config, std::size_t index)
      : shared_(shared), config_(config), budget_(config.budget), index_(index),
        rng_(stream_seed(config.seed, index)),
        f_(placeholder()), f2_(placeholder()), comp_(placeholder()), f_close_(placeholder()),
        h_close_(placeholder()) {}

  InstanceResult run() {
    const auto& eps_values = shared_.eps_values;
    eps_ = eps_values[index_ % eps_values.size()];
    eps_next_ = ExtRat::inf();
    for (const auto& e : eps_values) {
      if (e > eps_) {
        eps_next_ = e;
        break;
      }
    }
    generate();
    purity_laws();
    split_and_mono_laws();
    homotopy_transfer_laws();
    injectivity_laws();
    grid_laws();
    hom_metric_laws();
    return std::move(result_);
  }

 private:
  SpacePtr space(std::size_t min_points) {
    std::size_t n = min_points + rng_.below(config_.max_points - min_points + 1);
    return share(random_space(rng_, n, shared_.grid));
  }

  void generate() {
    k_ = space(1);
    m_ = space(1);
    switch (rng_.below(3)) {
      case 0:
        l_ = space(1);
        f_ = *random_map(rng_, k_, l_, budget_);
        break;
      case 1: {
        l_ = space(k_->size());
        auto iso = random_isometry(rng_, k_, l_, budget_);
        f_ = iso ? *iso : *random_map(rng_, k_, l_, budget_);
        break;
      }
      default: {
        auto extra = share(random_space(rng_, rng_.below(2), shared_.grid));
        Coproduct sum = coproduct({k_, extra});
        l_ = sum.space;
        f_ = sum.injections[0];
        break;
      }
    }
    f2_ = *random_map(rng_, l_, m_, budget_);
    comp_ = compose(f2_, f_);
    f_close_ = random_map_near(rng_, f_, eps_, budget_);
    h_close_ = random_map_near(rng_, comp_, eps_, budget_);
  }

  bool pure(const MetMap& f, const ExtRat& eps, PurityVariant v, const TestFamily* family = nullptr) {
    return purity(f, eps, v, family ? *family : shared_.family, budget_).pure;
  }

  Json base_cex() const {
    Json j;
    j["instance"] = index_;
    j["eps"] = to_json(eps_);
    j["f"] = map_json(f_);
    return j;
  }

  // Records one evaluation of an implication premise => conclusion.
  void implication(std::size_t law, bool premise, const std::function<bool()>& conclusion,
                   const std::function<void(Json&)>& details = {}) {
    Tally& t = result_.laws[law];
    ++t.checked;
    if (!premise) return;
    ++t.premise;
    if (conclusion()) return;
    fail(t, details);
  }

  void equivalence(std::size_t law, bool lhs, bool rhs, const std::function<void(Json&)>& details = {}) {
    Tally& t = result_.laws[law];
    ++t.checked;
    if (lhs) ++t.premise;
    if (lhs == rhs) return;
    fail(t, [&](Json& j) {
      j["lhs"] = lhs;
      j["rhs"] = rhs;
      if (details) details(j);
    });
  }

  void fail(Tally& t, const std::function<void(Json&)>& details) {
    ++t.failures;
    if (t.counterexample) return;
    Json j = base_cex();
    if (details) details(j);
    t.counterexample = std::move(j);
  }

  void purity_laws() {
    const ExtRat e2 = eps_.times(2);
    const bool f_pure = pure(f_, eps_, PurityVariant::Pure);
    const bool f_weak = pure(f_, eps_, PurityVariant::Weak);
    const bool f_bare = pure(f_, eps_, PurityVariant::Bare);
    const bool f2_pure = pure(f2_, eps_, PurityVariant::Pure);
    const bool comp_pure = pure(comp_, eps_, PurityVariant::Pure);
    const bool comp_weak = pure(comp_, eps_, PurityVariant::Weak);
    const bool comp_bare = pure(comp_, eps_, PurityVariant::Bare);
    auto with_f2 = [&](Json& j) { j["f2"] = map_json(f2_); };

    implication(kPureComposite, f_pure && f2_pure, [&] { return comp_pure; }, with_f2);
    implication(kPureCancellation, comp_pure, [&] { return f_pure; }, with_f2);
    implication(kWeakCancellation, comp_weak, [&] { return f_weak; }, with_f2);
    implication(kBareCancellation, comp_bare, [&] { return f_bare; }, with_f2);
    implication(kPureImpliesWeak, f_pure, [&] { return f_weak; });
    implication(kPureImpliesBare, f_pure, [&] { return f_bare; });
    implication(kWeakImpliesBareDouble, f_weak, [&] { return pure(f_, e2, PurityVariant::Bare); });
    implication(kBareMonotone, f_bare, [&] { return pure(f_, eps_next_, PurityVariant::Bare); },
                [&](Json& j) { j["eps_next"] = to_json(eps_next_); });

    for (auto v : {PurityVariant::Pure, PurityVariant::Weak, PurityVariant::Bare}) {
      const bool whole = v == PurityVariant::Pure ? f_pure : v == PurityVariant::Weak ? f_weak : f_bare;
      implication(kFamilyMonotone, whole, [&] { return pure(f_, eps_, v, &shared_.subfamily); },
                  [&](Json& j) { j["variant"] = to_string(v); });
    }

    observe(kPureMonotone, f_pure, [&] { return pure(f_, eps_next_, PurityVariant::Pure); });
    observe(kWeakMonotone, f_weak, [&] { return pure(f_, eps_next_, PurityVariant::Weak); });
  }

  void observe(std::size_t which, bool premise, const std::function<bool()>& conclusion) {
    Tally& t = result_.observations[which];
    ++t.checked;
    if (!premise) return;
    ++t.premise;
    if (conclusion()) return;
    fail(t, [&](Json& j) { j["eps_next"] = to_json(eps_next_); });
  }

  void split_and_mono_laws() {
    const ExtRat e2 = eps_.times(2);
    const bool split_mono = is_eps_split(f_, ExtRat(0), budget_).split;
    const auto split = is_eps_split(f_, eps_, budget_);
    std::vector<SpacePtr> mono_family = shared_.family.spaces;
    mono_family.push_back(k_);

    implication(kSplitMonoPure, split_mono, [&] { return pure(f_, eps_, PurityVariant::Pure); });
    implication(kSplitMonoEpsSplit, split_mono, [&] { return split.split; });
    implication(kEpsSplitWeak, split.split, [&] { return pure(f_, eps_, PurityVariant::Weak); });
    implication(kEpsSplitBare, split.split, [&] { return pure(f_, eps_, PurityVariant::Bare); });
    implication(kEpsSplitDoubleMono, split.split, [&] { return is_eps_mono(f_, e2, mono_family, budget_); });
    implication(kSplitMonotone, split.split, [&] { return is_eps_split(f_, eps_next_, budget_).split; },
                [&](Json& j) { j["eps_next"] = to_json(eps_next_); });

    // Family {1} plus 2_d for every distance d occurring in K.
    std::vector<SpacePtr> point_pairs{share(point_space())};
    for (std::size_t a = 0; a < k_->size(); ++a) {
      for (std::size_t b = a + 1; b < k_->size(); ++b) point_pairs.push_back(share(two_point(k_->d(a, b))));
    }
    TestFamily pairs = TestFamily::make(point_pairs, 2, budget_);
    implication(kBareDoubleMono, pure(f_, eps_, PurityVariant::Bare, &pairs),
                [&] { return is_eps_mono(f_, e2, mono_family, budget_); });
  }

  void homotopy_transfer_laws() {
    const ExtRat e2 = eps_.times(2);
    auto with_close = [&](Json& j) { j["f_close"] = map_json(f_close_); };
    implication(kClosePureDoubleWeak, pure(f_, e2, PurityVariant::Pure),
                [&] { return pure(f_close_, eps_, PurityVariant::Weak); }, with_close);
    implication(kClosePureBare, pure(f_, eps_, PurityVariant::Pure),
                [&] { return pure(f_close_, eps_, PurityVariant::Bare); }, with_close);
    auto with_h = [&](Json& j) {
      j["f2"] = map_json(f2_);
      j["h"] = map_json(h_close_);
    };
    implication(kFactorPureDoubleWeak, pure(h_close_, e2, PurityVariant::Pure),
                [&] { return pure(f_, eps_, PurityVariant::Weak); }, with_h);
    implication(kFactorPureBare, pure(h_close_, eps_, PurityVariant::Pure),
                [&] { return pure(f_, eps_, PurityVariant::Bare); }, with_h);
  }

  bool injective(const SpacePtr& x, const MetMap& f, const ExtRat& eps) {
    return is_eps_injective(x, f, eps, budget_).injective;
  }

  void injectivity_laws() {
    auto x = space(0);
    auto x2 = space(0);
    auto with_x = [&](Json& j) { j["x"] = to_json(*x); };
    const bool inj = injective(x, f_, eps_);

    implication(kInjectiveMonotone, inj, [&] { return injective(x, f_, eps_next_); }, with_x);

    const bool hom_k = HomSearch(*k_, *x, MapKind::NonExpansive, budget_.max_nodes).count(1) > 0;
    const bool hom_l = HomSearch(*l_, *x, MapKind::NonExpansive, budget_.max_nodes).count(1) > 0;
    equivalence(kInjectiveInfinite, injective(x, f_, ExtRat::inf()), !hom_k || hom_l, with_x);

    bool direct = true;
    {
      auto hs = HomSearch(*l_, *x, MapKind::NonExpansive, budget_.max_nodes).all();
      HomSearch gs(*k_, *x, MapKind::NonExpansive, budget_.max_nodes);
      gs.for_each([&](std::span<const std::size_t> g) {
        bool found = false;
        for (const auto& h : hs) {
          bool equal = true;
          for (std::size_t a = 0; a < g.size() && equal; ++a) equal = h[f_(a)] == g[a];
          if (equal) {
            found = true;
            break;
          }
        }
        direct = found;
        return found;
      });
    }
    equivalence(kInjectiveZeroDirect, injective(x, f_, ExtRat(0)), direct, with_x);

    const ExtRat defect = injectivity_defect(x, f_, budget_);
    equivalence(kInjectiveDefect, inj, eps_ >= defect, [&](Json& j) {
      j["x"] = to_json(*x);
      j["defect"] = to_json(defect);
    });

    const bool inj2 = injective(x2, f_, eps_);
    implication(kInjectiveProducts, inj && inj2,
                [&] { return injective(product({x, x2}, budget_).space, f_, eps_); },
                [&](Json& j) {
                  j["x1"] = to_json(*x);
                  j["x2"] = to_json(*x2);
                });

    // A retract of x: a subspace R with a non-expansive retraction x -> R.
    if (!x->empty()) {
      std::vector<std::size_t> subset;
      while (subset.empty()) {
        std::uint64_t mask = rng_.below(std::uint64_t{1} << x->size());
        for (std::size_t p = 0; p < x->size(); ++p) {
          if (mask >> p & 1U) subset.push_back(p);
        }
      }
      auto r_space = share(x->subspace(subset));
      Candidates fixed(x->size(), subset.size());
      for (std::size_t i = 0; i < subset.size(); ++i) fixed.fix(subset[i], i);
      HomSearch retraction(*x, *r_space, MapKind::NonExpansive, budget_.max_nodes);
      retraction.restrict_to(std::move(fixed));
      const bool is_retract = retraction.count(1) == 1;
      implication(kInjectiveRetracts, is_retract && inj, [&] { return injective(r_space, f_, eps_); },
                  [&](Json& j) {
                    j["x"] = to_json(*x);
                    j["retract"] = to_json(*r_space);
                  });
    }

    auto c = space(1);
    auto g = *random_map(rng_, k_, c, budget_);
    EpsPushoutResult p = eps_pushout(f_, g, eps_);
    implication(kInjectivePushoutLeg, inj, [&] { return injective(x, p.leg_f, ExtRat(0)); }, [&](Json& j) {
      j["x"] = to_json(*x);
      j["g"] = map_json(g);
    });

    EpsPushoutResult cyl = eps_pushout(MetMap::identity(k_), f_, eps_);
    equivalence(kInjectiveMappingCylinder, inj, injective(x, cyl.leg_g, ExtRat(0)), with_x);
  }

  void grid_laws() {
    auto grid_pure = [&](const MetMap& f) {
      return is_grid_ap_pure(f, shared_.ap_grid, PurityVariant::Pure, shared_.family, budget_);
    };
    const bool f_ok = grid_pure(f_);
    const bool comp_ok = grid_pure(comp_);
    auto with_f2 = [&](Json& j) { j["f2"] = map_json(f2_); };
    implication(kGridApPureComposite, f_ok && grid_pure(f2_), [&] { return comp_ok; }, with_f2);
    implication(kGridApPureCancellation, comp_ok, [&] { return f_ok; }, with_f2);
  }

  void hom_metric_laws() {
    const MetMap& f = f_;
    const MetMap& f1 = f_close_;
    MetMap f3 = random_map_near(rng_, f1, eps_next_, budget_);
    auto with_maps = [&](Json& j) {
      j["f_close"] = map_json(f1);
      j["f_third"] = map_json(f3);
    };

    const ExtRat d01 = hom_dist(f, f1);
    const ExtRat d12 = hom_dist(f1, f3);
    const ExtRat d02 = hom_dist(f, f3);
    implication(kTransitivity, is_eps_homotopic(f, f1, eps_) && is_eps_homotopic(f1, f3, eps_next_),
                [&] { return is_eps_homotopic(f, f3, eps_ + eps_next_); }, with_maps);
    implication(kHomDistMetric, true, [&] {
      return d01 == hom_dist(f1, f) && (d01.is_zero() == (f == f1)) && d02 <= d01 + d12 && hom_dist(f, f).is_zero();
    }, with_maps);

    auto n = space(0);
    auto pre = *random_map(rng_, n, k_, budget_);
    implication(kEnrichment, true, [&] {
      return hom_dist(compose(f2_, f), compose(f2_, f1)) <= d01 && hom_dist(compose(f, pre), compose(f1, pre)) <= d01;
    }, [&](Json& j) {
      with_maps(j);
      j["f2"] = map_json(f2_);
      j["pre"] = map_json(pre);
    });
  }

  const Shared& shared_;
  const LawConfig& config_;
  Budget budget_;
  std::size_t index_;
  Rng rng_;
  ExtRat eps_, eps_next_;
  SpacePtr k_, l_, m_;
  MetMap f_, f2_, comp_, f_close_, h_close_;
  InstanceResult result_;
};

void merge_into(std::vector<LawOutcome>& out, const LawSpec* specs, std::size_t count,
                const std::vector<InstanceResult>& results, bool observations) {
  for (std::size_t l = 0; l < count; ++l) {
    LawOutcome o{specs[l].id, specs[l].statement, 0, 0, 0, std::nullopt};
    for (const auto& r : results) {
      const Tally& t = observations ? r.observations[l] : r.laws[l];
      o.checked += t.checked;
      o.premise_held += t.premise;
      o.failures += t.failures;
      if (!o.counterexample && t.counterexample) o.counterexample = t.counterexample;
    }
    out.push_back(std::move(o));
  }
}

}  // namespace

bool LawReport::pass() const {
  for (const auto& l : laws) {
    if (l.failures > 0) return false;
  }
  return true;
}

LawReport law_harness(const LawConfig& config) {
  Shared shared;
  shared.grid = config.grid.empty() ? default_grid() : config.grid;
  shared.eps_values = config.eps_values;
  if (shared.eps_values.empty()) {
    shared.eps_values = {ExtRat(0), ExtRat::ratio(1, 2), ExtRat(1), ExtRat::ratio(3, 2), ExtRat(2), ExtRat::inf()};
  }
  std::sort(shared.eps_values.begin(), shared.eps_values.end());
  shared.ap_grid = config.ap_grid;
  if (shared.ap_grid.empty()) shared.ap_grid = {ExtRat(1), ExtRat::ratio(1, 2), ExtRat::ratio(1, 4)};
  shared.family = TestFamily::make(enumerate_spaces(DistanceGrid::make(shared.grid, config.family_cap), config.budget),
                                   config.family_cap, config.budget);
  std::vector<SpacePtr> prefix(shared.family.spaces.begin(),
                               shared.family.spaces.begin() +
                                   static_cast<std::ptrdiff_t>(std::min<std::size_t>(3, shared.family.spaces.size())));
  shared.subfamily = TestFamily::make(prefix, config.family_cap, config.budget);

  std::vector<InstanceResult> results(config.instances);
  std::vector<std::exception_ptr> errors(config.instances);
  const auto n = static_cast<std::ptrdiff_t>(config.instances);
  if (config.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        results[i] = Instance(shared, config, static_cast<std::size_t>(i)).run();
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) results[i] = Instance(shared, config, static_cast<std::size_t>(i)).run();
  }

  LawReport report;
  report.seed = config.seed;
  report.instances = config.instances;
  merge_into(report.laws, kLaws, kLawCount, results, false);
  merge_into(report.observations, kObservations, kObservationCount, results, true);
  return report;
}

Json to_json(const LawReport& report) {
  auto outcome = [](const LawOutcome& o) {
    Json j;
    j["id"] = o.id;
    j["statement"] = o.statement;
    j["checked"] = o.checked;
    j["premise_held"] = o.premise_held;
    j["failures"] = o.failures;
    j["counterexample"] = o.counterexample ? *o.counterexample : Json(nullptr);
    return j;
  };
  Json out;
  out["seed"] = report.seed;
  out["instances"] = report.instances;
  out["pass"] = report.pass();
  Json laws = Json::array();
  for (const auto& l : report.laws) laws.push_back(outcome(l));
  out["laws"] = std::move(laws);
  Json obs = Json::array();
  for (const auto& o : report.observations) obs.push_back(outcome(o));
  out["observations"] = std::move(obs);
  return out;
}

}  // namespace metricat
