#include <doctest.h>

#include "metricat/canonical.hpp"
#include "metricat/colimit.hpp"
#include "metricat/constructions.hpp"
#include "metricat/corpus.hpp"
#include "metricat/errors.hpp"
#include "metricat/fraisse.hpp"
#include "metricat/hom_search.hpp"
#include "metricat/reflect.hpp"
#include "metricat/universal.hpp"
#include "support/oracles.hpp"

using namespace metricat;

namespace {

ExtRat q(std::int64_t p, std::int64_t r = 1) { return ExtRat::ratio(p, r); }
const ExtRat kInf = ExtRat::inf();

SpacePtr make(const std::vector<std::vector<ExtRat>>& rows) {
  auto r = validate_space(rows);
  REQUIRE(r.ok());
  return share(*r.space);
}

// Checks a reflection against the path-enumeration oracle, point by point.
void check_reflection(const oracle::Matrix& m) {
  Semimetric s(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) s.set(i, j, m[i][j]);
  auto closed = oracle::path_minimum(m);
  for (Exec exec : {Exec::Serial, Exec::Parallel}) {
    Reflection r = reflect(s, exec);
    auto expect = oracle::collapse(closed);
    CHECK(r.projection == expect.cls);
    CHECK(r.space == expect.space);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) CHECK(r.space.d(r.projection[i], r.projection[j]) == closed[i][j]);
  }
}

std::vector<SpacePtr> small_targets() {
  return enumerate_spaces(DistanceGrid::make({q(1, 2), 1, 2, kInf}, 2));
}

// Direct eps-coequalizer: lower d(f a, g a) to eps inside B, close, collapse.
oracle::Quotient direct_coequalizer(const MetMap& f, const MetMap& g, const ExtRat& eps) {
  auto m = oracle::rows_of(f.cod());
  for (std::size_t a = 0; a < f.dom().size(); ++a) {
    std::size_t x = f(a), y = g(a);
    if (x == y) continue;
    m[x][y] = m[y][x] = min(m[x][y], eps);
  }
  return oracle::collapse(oracle::relax_until_stable(m));
}

// Ordinary colimit of a finite diagram by union-find on the coproduct.
oracle::Quotient direct_colimit(const FinDiagram& d) {
  std::vector<const Space*> parts;
  for (const auto& o : d.objects) parts.push_back(o.get());
  std::vector<std::size_t> off;
  auto m = oracle::disjoint(parts, &off);
  std::vector<std::pair<std::size_t, std::size_t>> glue;
  for (const auto& e : d.arrows)
    for (std::size_t x = 0; x < e.map.dom().size(); ++x) glue.emplace_back(off[e.src] + x, off[e.dst] + e.map(x));
  return oracle::glue_and_reflect(m, glue);
}

}  // namespace

TEST_SUITE("reflect") {
  TEST_CASE("examples") {
    check_reflection({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
    Semimetric s(3);
    s.set(0, 1, 1);
    s.set(1, 2, 1);
    s.set(0, 2, 5);
    CHECK(reflect(s).space.d(0, 2) == ExtRat(2));
    // A metric is left alone.
    auto k = make({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    Reflection r = reflect(Semimetric::from_space(*k));
    CHECK(r.space == *k);
    // zero distance merges points; classes numbered by smallest member
    check_reflection({{0, 1, 0}, {1, 0, kInf}, {0, kInf, 0}});
  }

  TEST_CASE("all semimetrics on up to 4 points over {1/2, 1, 2, inf}") {
    const std::vector<ExtRat> grid{q(1, 2), 1, 2, kInf};
    for (std::size_t n = 1; n <= 4; ++n) {
      const std::size_t pairs = n * (n - 1) / 2;
      std::size_t total = 1;
      for (std::size_t p = 0; p < pairs; ++p) total *= grid.size();
      for (std::size_t code = 0; code < total; ++code) {
        oracle::Matrix m(n, std::vector<ExtRat>(n));
        std::size_t c = code;
        for (std::size_t j = 1; j < n; ++j)
          for (std::size_t i = 0; i < j; ++i) {
            m[i][j] = m[j][i] = grid[c % grid.size()];
            c /= grid.size();
          }
        check_reflection(m);
      }
    }
  }

  TEST_CASE("closure kernels agree") {
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
      const std::size_t n = 1 + rng.below(7);
      std::vector<ExtRat> m(n * n, kInf);
      for (std::size_t i = 0; i < n; ++i) m[i * n + i] = ExtRat();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = m[j * n + i] = rng.pick(default_grid());
      auto a = m, b = m;
      shortest_path_closure(n, a, Exec::Serial);
      shortest_path_closure(n, b, Exec::Parallel);
      CHECK(a == b);
    }
  }
}

TEST_SUITE("pushout") {
  TEST_CASE("examples") {
    auto one = share(point_space());
    auto k = make({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    // along the identity
    MetMap f(one, k, {1});
    auto r = pushout(f, MetMap::identity(one));
    CHECK(isomorphic(*r.apex, *k));
    CHECK(compose(r.leg_g, f) == compose(r.leg_f, MetMap::identity(one)));
    // gluing two points
    CHECK(pushout(MetMap::identity(one), MetMap::identity(one)).apex->size() == 1);
    // 1 -> 2_1 and 1 -> 2_2 glued at the first points
    auto b = share(two_point(1)), c = share(two_point(2));
    auto p = pushout(MetMap(one, b, {0}), MetMap(one, c, {0}));
    REQUIRE(p.apex->size() == 3);
    CHECK(p.apex->d(p.leg_g(1), p.leg_f(1)) == ExtRat(3));
    CHECK(p.leg_g(0) == p.leg_f(0));
    CHECK(verify_universal(p, MetMap(one, b, {0}), MetMap(one, c, {0}), small_targets()).pass);
  }

  TEST_CASE("eps-pushout examples") {
    auto one = share(point_space());
    auto id = MetMap::identity(one);
    auto r = eps_pushout(id, id, 1);
    CHECK(*r.apex == two_point(1));
    CHECK(verify_universal(r, id, id, small_targets()).pass);

    auto empty = share(Space());
    auto b = share(two_point(1)), c = share(two_point(2));
    MetMap fe(empty, b, {}), ge(empty, c, {});
    auto sum = coproduct({b, c});
    for (ExtRat e : {ExtRat(0), q(1, 2), kInf}) CHECK(isomorphic(*eps_pushout(fe, ge, e).apex, *sum.space));

    MetMap f(one, b, {0}), g(one, c, {1});
    CHECK(isomorphic(*eps_pushout(f, g, kInf).apex, *sum.space));
    CHECK(eps_pushout(f, g, 0).apex->size() == 3);
    CHECK_THROWS_AS(pushout(f, MetMap(b, c, {0, 0})), MismatchedEndpoints);
  }

  TEST_CASE("the verifier rejects wrong apexes") {
    auto one = share(point_space());
    auto b = share(two_point(1)), c = share(two_point(1));
    MetMap f(one, b, {0}), g(one, c, {0});
    auto good = eps_pushout(f, g, q(1, 2));

    // extra free point at infinity: mediators are not unique
    auto padded = coproduct({good.apex, one});
    EpsPushoutResult extra{padded.space, compose(padded.injections[0], good.leg_f),
                           compose(padded.injections[0], good.leg_g), good.eps};
    auto rep = verify_universal(extra, f, g, small_targets());
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.counterexample);
    CHECK(rep.counterexample->kind == UniversalFailure::NotUnique);
    CHECK(rep.counterexample->mediators.size() == 2);

    // bare coproduct with a finite eps: the square does not eps-commute
    auto sum = coproduct({b, c});
    EpsPushoutResult bare{sum.space, sum.injections[1], sum.injections[0], q(1, 2)};
    rep = verify_universal(bare, f, g, small_targets());
    CHECK_FALSE(rep.pass);
    CHECK(rep.counterexample->kind == UniversalFailure::SquareNotEpsCommutative);

    // legs eps-commute but the apex is too far apart: no mediator
    auto far = share(two_point(1));
    EpsPushoutResult loose{far, MetMap(c, far, {1, 1}), MetMap(b, far, {0, 0}), ExtRat(1)};
    rep = verify_universal(loose, f, g, small_targets());
    CHECK_FALSE(rep.pass);
  }

  TEST_CASE("serial and parallel verification agree on the corpus") {
    SpanCorpusConfig cfg;
    cfg.count = 24;
    cfg.max_points = 3;
    auto targets = small_targets();
    for (const auto& inst : span_corpus(cfg)) {
      auto r = eps_pushout(inst.f, inst.g, inst.eps);
      auto s = verify_universal(r, inst.f, inst.g, targets, {}, Exec::Serial);
      auto p = verify_universal(r, inst.f, inst.g, targets, {}, Exec::Parallel);
      CHECK(s.pass);
      CHECK(s.cospans_checked == p.cospans_checked);
      CHECK(p.pass);
      CHECK(hom_dist(compose(r.leg_f, inst.g), compose(r.leg_g, inst.f)) <= inst.eps);
    }
  }

  TEST_CASE("bridged pushout with zero bridges is the pushout") {
    SpanCorpusConfig cfg;
    cfg.count = 16;
    for (const auto& inst : span_corpus(cfg)) {
      std::vector<ExtRat> zero(inst.f.dom().size(), ExtRat());
      auto a = bridged_pushout(inst.f, inst.g, zero, ExtRat());
      auto b = pushout(inst.f, inst.g);
      CHECK(*a.apex == *b.apex);
      CHECK(a.leg_f == b.leg_f);
    }
  }
}

TEST_SUITE("coequalizer and colimit") {
  TEST_CASE("coequalizer examples") {
    auto one = share(point_space());
    auto b = share(two_point(5));
    MetMap f(one, b, {0}), g(one, b, {1});
    auto r = eps_coequalizer(f, g, 1);
    CHECK(*r.apex == two_point(1));
    CHECK(isomorphic(*eps_coequalizer(f, f, 0).apex, *b));
    CHECK(isomorphic(*eps_coequalizer(f, g, kInf).apex, *b));
    CHECK(verify_coequalizer(r, f, g, small_targets()).pass);
  }

  TEST_CASE("matches the direct construction on the corpus") {
    SpanCorpusConfig cfg;
    cfg.count = 60;
    Rng rng(4);
    for (const auto& inst : span_corpus(cfg)) {
      // parallel pair into B: g' is another map A -> B
      auto g2 = random_map(rng, inst.f.dom_ptr(), inst.f.cod_ptr());
      REQUIRE(g2);
      auto r = eps_coequalizer(inst.f, *g2, inst.eps);
      auto expect = direct_coequalizer(inst.f, *g2, inst.eps);
      CHECK(canonical_form(*r.apex).space == canonical_form(expect.space).space);
      CHECK(hom_dist(compose(r.leg, inst.f), compose(r.leg, *g2)) <= inst.eps);
    }
  }

  TEST_CASE("colimit examples") {
    auto a = share(two_point(1)), b = share(two_point(2));
    FinDiagram discrete{{a, b}, {}};
    CHECK(isomorphic(*eps_colimit(discrete, q(1, 2)).apex, *coproduct({a, b}).space));

    auto k = make({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    FinDiagram single{{a, k}, {Arrow{0, 1, MetMap(a, k, {0, 1})}}};
    CHECK(isomorphic(*eps_colimit(single, 0).apex, *k));

    auto one = share(point_space());
    MetMap f(one, a, {0}), g(one, b, {1});
    FinDiagram span{{one, a, b}, {Arrow{0, 1, f}, Arrow{0, 2, g}}};
    CHECK(isomorphic(*eps_colimit(span, 0).apex, *pushout(f, g).apex));
    Budget tiny;
    tiny.max_points = 3;
    CHECK_THROWS_AS(eps_colimit(span, 0, tiny), BudgetExceeded);
  }

  TEST_CASE("eps = 0 colimit matches union-find gluing") {
    Rng rng(99);
    const auto grid = default_grid();
    for (int t = 0; t < 80; ++t) {
      FinDiagram d;
      const std::size_t objects = 1 + rng.below(4);
      for (std::size_t i = 0; i < objects; ++i) d.objects.push_back(share(random_space(rng, 1 + rng.below(3), grid)));
      const std::size_t arrows = rng.below(4);
      for (std::size_t e = 0; e < arrows; ++e) {
        std::size_t s = rng.below(objects), r = rng.below(objects);
        if (auto m = random_map(rng, d.objects[s], d.objects[r])) d.arrows.push_back(Arrow{s, r, *m});
      }
      auto c = eps_colimit(d, 0);
      auto expect = direct_colimit(d);
      CHECK(oracle::isometric(*c.apex, expect.space));
      for (const auto& e : d.arrows) CHECK(compose(c.legs[e.dst], e.map) == c.legs[e.src]);
    }
  }

  TEST_CASE("comparison maps") {
    auto one = share(point_space());
    auto a = share(two_point(1)), b = share(two_point(2));
    FinDiagram span{{one, a, b}, {Arrow{0, 1, MetMap(one, a, {0})}, Arrow{0, 2, MetMap(one, b, {0})}}};
    auto same = comparison(span, 1, 1);
    CHECK(same == MetMap::identity(same.dom_ptr()));
    auto quotient = comparison(span, kInf, 0);
    CHECK(quotient.dom().size() == 5);
    CHECK(quotient.cod().size() == 3);
    CHECK_THROWS_AS(comparison(span, 0, 1), std::invalid_argument);
    const std::vector<ExtRat> chain{kInf, 2, 1, q(1, 2), 0};
    for (std::size_t i = 0; i < chain.size(); ++i)
      for (std::size_t j = i; j < chain.size(); ++j)
        for (std::size_t k = j; k < chain.size(); ++k)
          CHECK(compose(comparison(span, chain[j], chain[k]), comparison(span, chain[i], chain[j])) ==
                comparison(span, chain[i], chain[k]));
  }
}

TEST_SUITE("cylinder") {
  TEST_CASE("examples and cross distances") {
    for (ExtRat e : {q(1, 2), ExtRat(1), ExtRat(3)}) CHECK(*cylinder(share(point_space()), e).space == two_point(e));
    auto k = make({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
    CHECK(isomorphic(*cylinder(k, 0).space, *k));
    auto cyl = cylinder(k, q(1, 2));
    const std::size_t n = k->size();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        CHECK(cyl.space->d(cyl.c(x), cyl.c(n + y)) == k->d(x, y) + q(1, 2));
  }
}
