// Acceptance run: one PASS/FAIL line per criterion. Criteria 1-7 run twice;
// criterion 8 compares the serialized outputs of both rounds byte for byte.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "metricat/canonical.hpp"
#include "metricat/colimit.hpp"
#include "metricat/constructions.hpp"
#include "metricat/corpus.hpp"
#include "metricat/fraisse.hpp"
#include "metricat/hom_search.hpp"
#include "metricat/injectivity.hpp"
#include "metricat/json_io.hpp"
#include "metricat/laws.hpp"
#include "metricat/reflect.hpp"
#include "metricat/rundir.hpp"
#include "metricat/universal.hpp"
#include "support/oracles.hpp"

using namespace metricat;
namespace fs = std::filesystem;

namespace {

ExtRat q(std::int64_t p, std::int64_t r = 1) { return ExtRat::ratio(p, r); }

struct Outcome {
  bool pass = true;
  std::string detail;
  Json artifact;  // what criterion 8 compares
};

// ---------------------------------------------------------------- 1

Outcome reflection_oracle() {
  const std::vector<ExtRat> grid{q(1, 2), 1, 2, 5, ExtRat::inf()};
  const std::size_t instances = 12000;
  Rng rng(stream_seed(2024, 1));
  std::size_t mismatches = 0;
  Json digest = Json::array();
  for (std::size_t t = 0; t < instances; ++t) {
    const std::size_t n = 1 + rng.below(5);
    oracle::Matrix m(n, std::vector<ExtRat>(n));
    Semimetric s(n);
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i) {
        m[i][j] = m[j][i] = rng.pick(grid);
        s.set(i, j, m[i][j]);
      }
    Reflection r = reflect(s, Exec::Parallel);
    auto closed = oracle::path_minimum(m);
    auto expect = oracle::collapse(closed);
    bool ok = r.projection == expect.cls && r.space == expect.space;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j) ok = r.space.d(r.projection[i], r.projection[j]) == closed[i][j];
    if (!ok) ++mismatches;
    if (t % 500 == 0) digest.push_back(to_json(r.space));
  }
  Outcome o;
  o.pass = mismatches == 0;
  o.detail = std::to_string(instances) + " semimetrics, " + std::to_string(mismatches) + " mismatches";
  o.artifact = Json{{"instances", instances}, {"mismatches", mismatches}, {"sample", digest}};
  return o;
}

// ---------------------------------------------------------------- 2

// every isometry class with at most 4 points over the corpus grid
std::vector<SpacePtr> universal_targets() { return enumerate_spaces(DistanceGrid::make(default_grid(), 4)); }

Outcome universal_property() {
  SpanCorpusConfig cfg;
  cfg.seed = 1;
  cfg.count = 128;
  cfg.max_points = 4;
  const auto targets = universal_targets();
  std::size_t failures = 0;
  std::uint64_t cospans = 0;
  Json reports = Json::array();
  for (const auto& inst : span_corpus(cfg)) {
    auto r = eps_pushout(inst.f, inst.g, inst.eps);
    auto rep = verify_universal(r, inst.f, inst.g, targets, {}, Exec::Parallel);
    cospans += rep.cospans_checked;
    if (!rep.pass) ++failures;
    reports.push_back(Json{{"result", to_json(r)}, {"report", to_json(rep)}});
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = std::to_string(cfg.count) + " spans, " + std::to_string(targets.size()) + " targets, " +
             std::to_string(cospans) + " cospans, " + std::to_string(failures) + " failures";
  o.artifact = reports;
  return o;
}

// ---------------------------------------------------------------- 3

oracle::Quotient union_find_colimit(const FinDiagram& d) {
  std::vector<const Space*> parts;
  for (const auto& o : d.objects) parts.push_back(o.get());
  std::vector<std::size_t> off;
  auto m = oracle::disjoint(parts, &off);
  std::vector<std::pair<std::size_t, std::size_t>> glue;
  for (const auto& e : d.arrows)
    for (std::size_t x = 0; x < e.map.dom().size(); ++x) glue.emplace_back(off[e.src] + x, off[e.dst] + e.map(x));
  return oracle::glue_and_reflect(m, glue);
}

Outcome coequalizer_and_colimit() {
  SpanCorpusConfig cfg;
  cfg.seed = 3;
  cfg.count = 200;
  Rng rng(stream_seed(2024, 3));
  std::size_t coeq_failures = 0, colim_failures = 0, checked = 0;
  Json out = Json::array();
  for (const auto& inst : span_corpus(cfg)) {
    auto g2 = random_map(rng, inst.f.dom_ptr(), inst.f.cod_ptr());
    if (!g2) continue;
    ++checked;
    // direct eps-coequalizer inside B
    auto m = oracle::rows_of(inst.f.cod());
    for (std::size_t a = 0; a < inst.f.dom().size(); ++a) {
      std::size_t x = inst.f(a), y = (*g2)(a);
      if (x != y) m[x][y] = m[y][x] = min(m[x][y], inst.eps);
    }
    auto direct = oracle::collapse(oracle::relax_until_stable(m));
    auto coeq = eps_coequalizer(inst.f, *g2, inst.eps);
    bool ok = canonical_form(*coeq.apex).space == canonical_form(direct.space).space &&
              hom_dist(compose(coeq.leg, inst.f), compose(coeq.leg, *g2)) <= inst.eps;
    if (!ok) ++coeq_failures;

    // a three-arrow diagram at eps = 0 against union-find gluing
    FinDiagram d{{inst.f.dom_ptr(), inst.f.cod_ptr(), inst.g.cod_ptr()},
                 {Arrow{0, 1, inst.f}, Arrow{0, 2, inst.g}, Arrow{0, 1, *g2}}};
    auto col = eps_colimit(d, 0);
    auto expect = union_find_colimit(d);
    ok = canonical_form(*col.apex).space == canonical_form(expect.space).space;
    for (const auto& e : d.arrows) ok = ok && compose(col.legs[e.dst], e.map) == col.legs[e.src];
    if (!ok) ++colim_failures;
    out.push_back(Json{{"coequalizer", to_json(coeq)}, {"colimit", to_json(col)}});
  }
  Outcome o;
  o.pass = coeq_failures == 0 && colim_failures == 0 && checked > 0;
  o.detail = std::to_string(checked) + " instances, " + std::to_string(coeq_failures) + " coequalizer and " +
             std::to_string(colim_failures) + " colimit mismatches";
  o.artifact = out;
  return o;
}

// ---------------------------------------------------------------- 4

Outcome law_harness_green() {
  LawConfig cfg;
  cfg.seed = 7;
  auto report = law_harness(cfg);
  std::size_t failures = 0;
  std::string first;
  for (const auto& law : report.laws) {
    failures += law.failures;
    if (law.failures > 0 && first.empty()) first = law.id;
  }
  Outcome o;
  o.pass = report.pass();
  o.detail = std::to_string(report.laws.size()) + " laws on " + std::to_string(report.instances) + " instances, " +
             std::to_string(failures) + " counterexamples" + (first.empty() ? "" : " (first: " + first + ")");
  o.artifact = to_json(report);
  return o;
}

// ---------------------------------------------------------------- 5

Outcome three_point_split() {
  Outcome o;
  Json verdicts = Json::array();
  auto one = share(point_space());
  for (ExtRat eps : {q(1, 2), ExtRat(1), ExtRat(2)}) {
    auto k = share(*validate_space({{0, eps, eps.times(2)}, {eps, 0, eps}, {eps.times(2), eps, 0}}).space);
    MetMap f(k, one, {0, 0, 0});
    auto split = is_eps_split(f, eps);
    bool mono = is_eps_mono(f, eps, {one});
    bool mono_subspaces = is_eps_mono(f, eps, 3);
    bool double_mono = is_eps_mono(f, eps.times(2), {one}) && is_eps_mono(f, eps.times(2), 3);
    bool ok = split.split && split.retraction == std::vector<std::size_t>{1} && !mono && !mono_subspaces && double_mono;
    o.pass = o.pass && ok;
    verdicts.push_back(Json{{"eps", to_json(eps)},
                            {"split", split.split},
                            {"retraction", split.retraction ? Json(*split.retraction) : Json(nullptr)},
                            {"eps_mono", mono},
                            {"double_eps_mono", double_mono}});
  }
  o.detail = "eps in {1/2, 1, 2}: split at eps, not eps-mono, 2eps-mono";
  o.artifact = verdicts;
  return o;
}

// ---------------------------------------------------------------- 6

Outcome cylinder_characterization() {
  auto spaces = enumerate_spaces(DistanceGrid::make({q(1, 2), 1, 2}, 3));
  std::size_t pairs = 0, factoring = 0, failures = 0;
  for (ExtRat eps : {q(1, 2), ExtRat(1)})
    for (const auto& k : spaces) {
      auto cyl = cylinder(k, eps);
      const std::size_t n = k->size();
      for (const auto& l : spaces) {
        auto hom_c = oracle::all_maps(*cyl.space, *l);
        auto maps = hom_set(k, l);
        for (const auto& f : maps)
          for (const auto& g : maps) {
            ++pairs;
            bool factors = false;
            for (const auto& h : hom_c) {
              bool match = true;
              for (std::size_t x = 0; x < n && match; ++x) match = h[cyl.c(x)] == f(x) && h[cyl.c(n + x)] == g(x);
              if (match) {
                factors = true;
                break;
              }
            }
            if (factors) ++factoring;
            if (factors != is_eps_homotopic(f, g, eps)) ++failures;
          }
      }
    }
  Outcome o;
  o.pass = failures == 0;
  o.detail = std::to_string(pairs) + " parallel pairs (" + std::to_string(factoring) + " factor), " +
             std::to_string(failures) + " disagreements";
  o.artifact = Json{{"pairs", pairs}, {"factoring", factoring}, {"failures", failures}};
  return o;
}

// ---------------------------------------------------------------- 7

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome fraisse_chain(const fs::path& rundir) {
  RunSettings settings{DistanceGrid::make({1, 2}, 3), SpanPolicy::IsoSkip, 3, 0, {}, {"acceptance"}, Json::object()};
  auto catalog = catalog_isometries(enumerate_spaces(settings.grid));
  auto chain = build_chain(catalog, settings.steps, settings.policy, settings.budget);
  Outcome o;
  std::vector<std::size_t> sizes;
  bool bounded = true, isometric = true;
  for (const auto& s : chain.stages) {
    sizes.push_back(s.space->size());
    bounded = bounded && s.space->size() <= settings.budget.max_stage_points;
    if (s.embedding) isometric = isometric && is_isometry(*s.embedding);
  }
  AuditReport audit = audit_saturation(chain.stages, catalog, FinalStage::Pending);
  fs::remove_all(rundir);
  write_chain(rundir.string(), catalog, chain);
  write_audit(rundir.string(), audit);
  write_manifest(rundir.string(), settings, chain, audit, 0.0);
  // the persisted run audits the same way
  auto loaded = load_run(rundir.string());
  AuditReport reaudit = audit_saturation(loaded.stages, loaded.catalog, FinalStage::Pending);
  o.pass = chain.complete && bounded && isometric && audit.pass && reaudit.pass &&
           reaudit.extensions_checked == audit.extensions_checked;
  std::string s;
  for (auto n : sizes) s += (s.empty() ? "" : ",") + std::to_string(n);
  o.detail = "stage sizes [" + s + "], " + std::to_string(audit.extensions_checked) + " extensions audited, " +
             (audit.pass ? "audit pass" : "audit FAIL");
  Json files = Json::object();
  std::vector<fs::path> paths;
  for (const auto& e : fs::recursive_directory_iterator(rundir))
    if (e.is_regular_file()) paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  for (const auto& p : paths) files[fs::relative(p, rundir).generic_string()] = slurp(p);
  o.artifact = files;
  return o;
}

// ---------------------------------------------------------------- driver

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(int round)> run;
};

}  // namespace

int main(int argc, char** argv) {
  fs::path workdir = fs::temp_directory_path() / "metricat_acceptance";
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--workdir") workdir = argv[i + 1];
  fs::create_directories(workdir);

  const std::vector<Criterion> criteria = {
      {1, "reflection equals exhaustive simple-path minimum", [](int) { return reflection_oracle(); }},
      {2, "eps-pushout universal property on the span corpus", [](int) { return universal_property(); }},
      {3, "coequalizer and eps = 0 colimit against direct constructions",
       [](int) { return coequalizer_and_colimit(); }},
      {4, "law harness green", [](int) { return law_harness_green(); }},
      {5, "three-point eps-split example", [](int) { return three_point_split(); }},
      {6, "cylinder factorization iff eps-homotopic", [](int) { return cylinder_characterization(); }},
      {7, "Fraisse chain over {1,2}, max size 3, 3 steps, iso-skip",
       [&](int round) { return fraisse_chain(workdir / ("run_" + std::to_string(round))); }},
  };

  bool all = true;
  std::vector<std::string> first_round;
  std::vector<std::string> mismatched;
  for (int round = 0; round < 2; ++round) {
    for (const auto& c : criteria) {
      const auto t0 = std::chrono::steady_clock::now();
      Outcome o;
      try {
        o = c.run(round);
      } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::string bytes = format_json(o.artifact);
      if (round == 0) {
        first_round.push_back(bytes);
        all = all && o.pass;
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.1fs", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " -- " << o.detail
                  << " [" << timing << "]" << std::endl;
      } else if (bytes != first_round[static_cast<std::size_t>(c.id - 1)]) {
        mismatched.push_back(std::to_string(c.id));
      }
    }
  }
  std::string which;
  for (const auto& m : mismatched) which += (which.empty() ? "" : ",") + m;
  const bool deterministic = mismatched.empty();
  std::cout << (deterministic ? "PASS" : "FAIL") << "  criterion 8: repeated run gives identical JSON -- "
            << (deterministic ? "criteria 1-7 byte-identical" : "differs in criteria " + which) << std::endl;
  all = all && deterministic;
  return all ? 0 : 1;
}
