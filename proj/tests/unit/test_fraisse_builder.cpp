#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "metricat/canonical.hpp"
#include "metricat/errors.hpp"
#include "metricat/fraisse.hpp"
#include "metricat/hom_search.hpp"
#include "metricat/rundir.hpp"
#include "support/oracles.hpp"

using namespace metricat;
namespace fs = std::filesystem;

namespace {

ExtRat q(std::int64_t p, std::int64_t r = 1) { return ExtRat::ratio(p, r); }
const ExtRat kInf = ExtRat::inf();

std::size_t entry_of(const IsometryCatalog& c, const Space& dom, const Space& cod) {
  for (std::size_t i = 0; i < c.isometries.size(); ++i)
    if (*c.spaces[c.isometries[i].dom] == dom && *c.spaces[c.isometries[i].cod] == cod) return i;
  FAIL("no catalog entry");
  return 0;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("metricat_unit_" + name);
  fs::remove_all(p);
  return p;
}

// Brute-force count of grid spaces up to isometry.
std::size_t oracle_count(const std::vector<ExtRat>& grid, std::size_t max_size) {
  std::vector<Space> reps;
  std::size_t count = 1;  // empty space
  for (std::size_t n = 1; n <= max_size; ++n) {
    const std::size_t pairs = n * (n - 1) / 2;
    std::size_t total = 1;
    for (std::size_t p = 0; p < pairs; ++p) total *= grid.size();
    std::vector<Space> found;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::vector<ExtRat>> rows(n, std::vector<ExtRat>(n));
      std::size_t c = code;
      for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = 0; i < j; ++i) {
          rows[i][j] = rows[j][i] = grid[c % grid.size()];
          c /= grid.size();
        }
      auto v = validate_space(rows);
      if (!v.ok()) continue;
      bool seen = false;
      for (const auto& s : found) seen = seen || oracle::isometric(s, *v.space);
      if (!seen) found.push_back(*v.space);
    }
    count += found.size();
  }
  return count;
}

}  // namespace

TEST_SUITE("enumerate") {
  TEST_CASE("examples") {
    auto a = enumerate_spaces(DistanceGrid::make({1}, 2));
    REQUIRE(a.size() == 3);
    CHECK(a[0]->empty());
    CHECK(*a[1] == point_space());
    CHECK(*a[2] == two_point(1));
    CHECK(enumerate_spaces(DistanceGrid::make({2, 1}, 2)).size() == 4);
    CHECK(enumerate_spaces(DistanceGrid::make({1, 2}, 3)).size() == 8);
  }

  TEST_CASE("counts match brute force") {
    CHECK(enumerate_spaces(DistanceGrid::make({q(1, 2), 1, 2, kInf}, 4)).size() ==
          oracle_count({q(1, 2), 1, 2, kInf}, 4));
    CHECK(enumerate_spaces(DistanceGrid::make({1, 3}, 4)).size() == oracle_count({1, 3}, 4));
  }

  TEST_CASE("grid validation and budget") {
    CHECK_THROWS_AS(DistanceGrid::make({}, 2), std::invalid_argument);
    CHECK_THROWS_AS(DistanceGrid::make({0, 1}, 2), std::invalid_argument);
    auto g = DistanceGrid::make({2, 1, 2}, 3);
    CHECK(g.values == std::vector<ExtRat>{1, 2});
    Budget tiny;
    tiny.max_nodes = 5;
    CHECK_THROWS_AS(enumerate_spaces(DistanceGrid::make({1, 2}, 4), tiny), BudgetExceeded);
  }

  TEST_CASE("output is canonical and sorted") {
    auto spaces = enumerate_spaces(DistanceGrid::make({1, 2, kInf}, 4));
    for (std::size_t i = 0; i < spaces.size(); ++i) {
      CHECK(canonical_form(*spaces[i]).space == *spaces[i]);
      if (i > 0) CHECK(canonical_less(*spaces[i - 1], *spaces[i]));
    }
  }
}

TEST_SUITE("catalog") {
  TEST_CASE("examples") {
    auto spaces = enumerate_spaces(DistanceGrid::make({1, 2}, 2));
    auto cat = catalog_isometries(spaces);
    std::size_t from_empty = 0, one_to_two1 = 0, two1_to_two2 = 0;
    for (const auto& e : cat.isometries) {
      CHECK(is_isometry(e.map));
      const Space& d = *cat.spaces[e.dom];
      const Space& c = *cat.spaces[e.cod];
      if (d.empty()) ++from_empty;
      if (d == point_space() && c == two_point(1)) ++one_to_two1;
      if (d == two_point(1) && c == two_point(2)) ++two1_to_two2;
      CHECK(e.stratum == (std::max(d.size(), c.size()) == 0 ? 0 : std::max(d.size(), c.size()) - 1));
    }
    CHECK(from_empty == spaces.size());
    CHECK(one_to_two1 == 1);
    CHECK(two1_to_two2 == 0);
    CHECK(cat.max_stratum() == 1);
  }

  TEST_CASE("one entry per codomain-automorphism orbit") {
    auto spaces = enumerate_spaces(DistanceGrid::make({1, 2}, 3));
    auto cat = catalog_isometries(spaces);
    for (std::size_t d = 0; d < spaces.size(); ++d)
      for (std::size_t c = 0; c < spaces.size(); ++c) {
        auto raw = isometries(spaces[d], spaces[c]);
        auto autos = isometries(spaces[c], spaces[c]);
        // orbits by brute force
        std::vector<std::vector<std::size_t>> reps;
        for (const auto& m : raw) {
          bool seen = false;
          for (const auto& a : autos) {
            auto moved = compose(a, m).images();
            for (const auto& r : reps) seen = seen || r == moved;
          }
          if (!seen) reps.push_back(m.images());
        }
        std::size_t listed = 0;
        for (const auto& e : cat.isometries)
          if (e.dom == d && e.cod == c) ++listed;
        CHECK(listed == reps.size());
      }
    CHECK(cat.isometries.size() == 31);
  }
}

TEST_SUITE("chain") {
  TEST_CASE("chain_step examples") {
    auto spaces = enumerate_spaces(DistanceGrid::make({1, 2}, 2));
    auto cat = catalog_isometries(spaces);
    auto one = share(point_space());

    auto same = chain_step(one, cat, {});
    CHECK(*same.next == *one);
    CHECK(same.embedding == MetMap::identity(one));

    std::size_t e = entry_of(cat, point_space(), two_point(1));
    auto r = chain_step(one, cat, {SpanRequest{e, {0}}});
    CHECK(*r.next == two_point(1));
    CHECK(r.embedding.images() == std::vector<std::size_t>{0});
    REQUIRE(r.log.size() == 1);
    CHECK(compose(MetMap(cat.isometries[e].map.cod_ptr(), r.next, r.log[0].copy), cat.isometries[e].map) ==
          compose(r.embedding, MetMap(one, one, {0})));

    // From the empty space every span is (empty, h) and the step is a coproduct.
    auto empty = share(Space());
    std::vector<SpanRequest> all;
    std::size_t expected = 0;
    for (std::size_t i = 0; i < cat.isometries.size(); ++i)
      if (cat.spaces[cat.isometries[i].dom]->empty()) {
        all.push_back(SpanRequest{i, {}});
        expected += cat.spaces[cat.isometries[i].cod]->size();
      }
    auto c = chain_step(empty, cat, all);
    CHECK(c.next->size() == expected);
  }

  TEST_CASE("stage budget") {
    auto cat = catalog_isometries(enumerate_spaces(DistanceGrid::make({1, 2}, 3)));
    ChainBudget tight;
    tight.max_stage_points = 5;
    auto chain = build_chain(cat, 3, SpanPolicy::IsoSkip, tight);
    CHECK_FALSE(chain.complete);
    CHECK_FALSE(chain.stop_reason.empty());
    CHECK(chain.stages.size() >= 1);
    ChainBudget few;
    few.max_spans = 1;
    CHECK_THROWS_AS(collect_spans(share(Space()), cat, 2, SpanPolicy::Iso, few), BudgetExceeded);
  }

  TEST_CASE("policies") {
    for (auto p : {SpanPolicy::IsoSkip, SpanPolicy::Iso, SpanPolicy::Full, SpanPolicy::FullSkip})
      CHECK(parse_span_policy(to_string(p)) == p);
    CHECK_THROWS_AS(parse_span_policy("all"), std::invalid_argument);
    auto cat = catalog_isometries(enumerate_spaces(DistanceGrid::make({1}, 2)));
    for (auto p : {SpanPolicy::IsoSkip, SpanPolicy::Iso, SpanPolicy::Full, SpanPolicy::FullSkip}) {
      auto chain = build_chain(cat, 2, p);
      REQUIRE(chain.complete);
      auto audit = audit_saturation(chain.stages, cat);
      CHECK(audit.pass);
      // every point of K_n has a neighbour at distance 1 in K_{n+1}
      for (std::size_t n = 1; n + 1 < chain.stages.size(); ++n) {
        const auto& s = chain.stages[n];
        const Space& next = *chain.stages[n + 1].space;
        for (std::size_t x = 0; x < s.space->size(); ++x) {
          bool neighbour = false;
          for (std::size_t y = 0; y < next.size(); ++y) neighbour = neighbour || next.d((*s.embedding)(x), y) == 1;
          CHECK(neighbour);
        }
      }
    }
    CHECK(build_chain(cat, 0, SpanPolicy::IsoSkip).stages.size() == 1);
  }

  TEST_CASE("grid {1,2}, max size 2, two steps") {
    auto cat = catalog_isometries(enumerate_spaces(DistanceGrid::make({1, 2}, 2)));
    auto chain = build_chain(cat, 2, SpanPolicy::IsoSkip);
    REQUIRE(chain.complete);
    CHECK(audit_saturation(chain.stages, cat).pass);
    for (const auto& s : chain.stages) {
      for (const auto& d : s.space->matrix()) CHECK((d.is_inf() || d.is_integer()));
      if (s.embedding) CHECK(is_isometry(*s.embedding));
    }
  }
}

TEST_SUITE("audit") {
  TEST_CASE("the bare initial stage is not saturated") {
    auto cat = catalog_isometries(enumerate_spaces(DistanceGrid::make({1}, 1)));
    ChainStage k0;
    k0.space = share(Space());
    std::vector<ChainStage> stages{k0};
    auto strict = audit_saturation(stages, cat, FinalStage::Strict);
    CHECK_FALSE(strict.pass);
    REQUIRE(strict.missing.size() == 1);
    CHECK(strict.missing[0].stage == 0);
    CHECK(strict.missing[0].u.empty());
    CHECK(*cat.spaces[cat.isometries[strict.missing[0].entry].cod] == point_space());
    auto pending = audit_saturation(stages, cat);
    CHECK(pending.pass);
    CHECK(pending.pending > 0);
  }

  TEST_CASE("a dropped span is reported") {
    auto cat = catalog_isometries(enumerate_spaces(DistanceGrid::make({1, 2}, 2)));
    auto empty = share(Space());
    auto spans = collect_spans(empty, cat, 0, SpanPolicy::IsoSkip);
    std::size_t to_point = entry_of(cat, Space(), point_space());
    std::vector<SpanRequest> kept;
    for (const auto& s : spans.spans)
      if (s.entry != to_point) kept.push_back(s);
    REQUIRE(kept.size() + 1 == spans.spans.size());
    auto step = chain_step(empty, cat, kept);
    ChainStage k0, k1;
    k0.space = empty;
    k0.embedding = step.embedding;
    k0.spans = step.log;
    k1.index = 1;
    k1.space = step.next;
    auto report = audit_saturation({k0, k1}, cat);
    CHECK_FALSE(report.pass);
    REQUIRE(report.missing.size() == 1);
    CHECK(report.missing[0].entry == to_point);
  }

  TEST_CASE("later drops are reported unless another span covers them") {
    auto cat = catalog_isometries(enumerate_spaces(DistanceGrid::make({1, 2}, 2)));
    auto chain = build_chain(cat, 2, SpanPolicy::Iso);
    REQUIRE(chain.complete);
    auto& last = chain.stages[1];
    auto requests = collect_spans(last.space, cat, last.stratum, SpanPolicy::Iso);
    for (std::size_t drop = 0; drop < requests.spans.size(); ++drop) {
      std::vector<SpanRequest> kept = requests.spans;
      SpanRequest dropped = kept[drop];
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(drop));
      auto step = chain_step(last.space, cat, kept);
      std::vector<ChainStage> stages(chain.stages.begin(), chain.stages.begin() + 2);
      stages[1].embedding = step.embedding;
      stages[1].spans = step.log;
      ChainStage next;
      next.index = 2;
      next.space = step.next;
      stages.push_back(next);
      auto report = audit_saturation(stages, cat);
      for (const auto& m : report.missing) {
        CHECK(m.stage == 1);
        CHECK(m.entry == dropped.entry);
        CHECK(m.u == dropped.u);
      }
      CHECK(report.missing.size() <= 1);
    }
  }

  TEST_CASE("tampered embeddings and logs are problems") {
    auto cat = catalog_isometries(enumerate_spaces(DistanceGrid::make({1, 2}, 2)));
    auto chain = build_chain(cat, 2, SpanPolicy::IsoSkip);
    REQUIRE(chain.complete);
    auto broken = chain.stages;
    REQUIRE(!broken[1].spans.empty());
    auto& copy = broken[1].spans[0].copy;
    const std::size_t n = broken[2].space->size();
    for (auto& c : copy) c = (c + 1) % n;
    CHECK_FALSE(audit_saturation(broken, cat).pass);
  }
}

TEST_SUITE("run directory") {
  TEST_CASE("round trip is byte-identical") {
    auto cat = catalog_isometries(enumerate_spaces(DistanceGrid::make({1, 2}, 3)));
    auto chain = build_chain(cat, 3, SpanPolicy::IsoSkip);
    REQUIRE(chain.complete);
    auto a = scratch("rt_a"), b = scratch("rt_b");
    write_chain(a.string(), cat, chain);
    auto loaded = load_run(a.string());
    REQUIRE(loaded.stages.size() == chain.stages.size());
    for (std::size_t i = 0; i < chain.stages.size(); ++i) {
      CHECK(*loaded.stages[i].space == *chain.stages[i].space);
      CHECK(loaded.stages[i].spans.size() == chain.stages[i].spans.size());
    }
    ChainResult again;
    again.stages = loaded.stages;
    write_chain(b.string(), loaded.catalog, again);
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
      if (!entry.is_regular_file()) continue;
      auto rel = fs::relative(entry.path(), a);
      CHECK(slurp(entry.path()) == slurp(b / rel));
    }
    auto audit = audit_saturation(loaded.stages, loaded.catalog);
    CHECK(audit.pass);
  }

  TEST_CASE("malformed files name the offending file") {
    auto cat = catalog_isometries(enumerate_spaces(DistanceGrid::make({1}, 2)));
    auto chain = build_chain(cat, 1, SpanPolicy::IsoSkip);
    auto dir = scratch("bad");
    write_chain(dir.string(), cat, chain);
    std::ofstream(dir / "stages" / "K_001.json") << R"({"index": 1, "space": {"points": 2, "dist": [[0, 1], [2, 0]]}})";
    try {
      load_run(dir.string());
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.pointer().rfind("stages/K_001.json", 0) == 0);
    }
  }
}
