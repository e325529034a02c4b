#include <catch_amalgamated.hpp>

#include <ihsig/assemble.hpp>
#include <ihsig/fixtures.hpp>
#include <ihsig/model.hpp>

#include <random>

using namespace ihsig;

namespace {

LimitRecord hopf(int e) { return circle_bundle_over_s2(e).run(); }

LimitRecord trivial_end(std::vector<std::size_t> base, std::vector<std::size_t> fiber) {
  GradedRing f = fiber.empty() ? point_ring() : SphereProductRing(std::move(fiber)).ring();
  return run_to_limit(product_bundle_page(SphereProductRing(std::move(base)).ring(), f));
}

// Facets reached by growing from a seed facet across shared faces.
std::vector<bool> grown_marker(const SimplicialPair& p, std::size_t count, std::mt19937_64& rng) {
  const auto& facets = p.facets();
  std::vector<bool> marker(facets.size(), false);
  std::uniform_int_distribution<std::size_t> pick(0, facets.size() - 1);
  marker[pick(rng)] = true;
  for (std::size_t have = 1; have < count;) {
    std::vector<std::size_t> frontier;
    for (std::size_t i = 0; i < facets.size(); ++i) {
      if (marker[i]) continue;
      for (std::size_t j = 0; j < facets.size(); ++j) {
        if (!marker[j]) continue;
        std::vector<std::size_t> common;
        std::set_intersection(facets[i].begin(), facets[i].end(), facets[j].begin(), facets[j].end(),
                              std::back_inserter(common));
        if (common.size() + 1 == facets[i].size()) {
          frontier.push_back(i);
          break;
        }
      }
    }
    marker[frontier[std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng)]] = true;
    ++have;
  }
  return marker;
}

}  // namespace

TEST_CASE("boundary cohomology of fixtures", "[assemble]") {
  CHECK(boundary_cohomology_dims(fixtures::ball(2).pair) == GradedDims{1, 1});
  CHECK(boundary_cohomology_dims(fixtures::ball(4).pair) == GradedDims{1, 0, 0, 1});
  CHECK(boundary_cohomology_dims(fixtures::cp2_ball().pair) == GradedDims{1, 0, 0, 1});
  CHECK(boundary_cohomology_dims(fixtures::cp2_disk_bundle().pair) == GradedDims{1, 0, 0, 1});
  CHECK(boundary_cohomology_dims(fixtures::disk_times_sphere().pair) == GradedDims{1, 1, 1, 1});
  CHECK(boundary_cohomology_dims(fixtures::sphere(2).pair) == GradedDims{0, 0});
}

TEST_CASE("the pieces of the projective plane", "[assemble]") {
  auto ball = fixtures::cp2_ball();
  auto bundle = fixtures::cp2_disk_bundle();
  CHECK(ball.pair.facets().size() + bundle.pair.facets().size() == 36);
  CHECK(ball.signature() == 0);
  CHECK(bundle.signature() == 1);
  CHECK(fixtures::cp2().signature() == 1);
}

TEST_CASE("projective plane from a ball and the Hopf end", "[assemble]") {
  const long closed = fixtures::cp2().signature();
  SpaceAssembly a{fixtures::cp2_ball(), hopf(1), std::nullopt, 0};
  auto r = global_signature(a);
  CHECK(r.n == 4);
  CHECK(r.interior == 0);
  CHECK(r.taus == std::map<std::size_t, long>{{2, 1}, {3, 0}});
  CHECK(r.first_page == 2);
  CHECK(r.end_signature == -1);
  CHECK(r.paths_agree());
  CHECK(r.global == closed);
  CHECK(r.global == 1);

  SpaceAssembly with_c{fixtures::cp2_ball(), hopf(1), ConeParameter(1, 1), 7};
  auto rc = global_signature(with_c);
  CHECK(rc.k == 0);
  REQUIRE(rc.shift);
  CHECK(rc.shift->normative == 0);
  CHECK(rc.global == 1);

  // a smaller cone angle moves the offset past the only differential
  SpaceAssembly thin{fixtures::cp2_ball(), hopf(1), ConeParameter(Rational(1, 2), 1), 0};
  auto rt = global_signature(thin);
  CHECK(rt.k == 1);
  CHECK(rt.global == 0);
}

TEST_CASE("trivial bundle ends add nothing", "[assemble]") {
  for (std::size_t k = 0; k <= 2; ++k) {
    auto r = global_signature({fixtures::disk_times_sphere(), hopf(0), std::nullopt, k});
    CHECK(r.interior == 0);
    for (auto [s, t] : r.taus) CHECK(t == 0);
    CHECK(r.global == r.interior);
    CHECK(r.paths_agree());
  }
  auto r = global_signature({fixtures::ball(4), trivial_end({3}, {}), std::nullopt, 0});
  CHECK(r.b == 3);
  CHECK(r.f == 0);
  CHECK(r.global == 0);
  auto s = global_signature({fixtures::cp2_disk_bundle(), trivial_end({3}, {}), std::nullopt, 1});
  CHECK(s.global == s.interior);
  CHECK(s.global == 1);
}

TEST_CASE("orientation reversal negates the signature", "[assemble]") {
  std::vector<SpaceAssembly> cases{
      {fixtures::cp2_ball(), hopf(1), std::nullopt, 0},
      {fixtures::cp2_ball(), hopf(-2), std::nullopt, 0},
      {fixtures::cp2_disk_bundle(), hopf(-1), std::nullopt, 0},
      {fixtures::cp2_disk_bundle(), trivial_end({3}, {}), std::nullopt, 0},
      {fixtures::disk_times_sphere(), hopf(0), std::nullopt, 0},
  };
  for (const auto& a : cases) {
    auto r = global_signature(a);
    auto rr = global_signature(a.reversed());
    CHECK(r.global + rr.global == 0);
    CHECK(r.end_signature + rr.end_signature == 0);
    CHECK(rr.paths_agree());
  }
}

TEST_CASE("assembly preconditions", "[assemble]") {
  // dimension of the interior against b + f + 1
  CHECK_THROWS_AS(global_signature({fixtures::cp2_ball(), trivial_end({2}, {2}), std::nullopt, 0}),
                  std::invalid_argument);
  // odd total dimension
  CHECK_THROWS_AS(global_signature({fixtures::ball(3), trivial_end({2}, {}), std::nullopt, 0}),
                  std::invalid_argument);
  // boundary S^3 against an end converging to S^1 x S^2
  CHECK_THROWS_AS(global_signature({fixtures::cp2_ball(), hopf(0), std::nullopt, 0}), InconsistentData);
  // cone parameter for another fiber dimension
  CHECK_THROWS_AS(global_signature({fixtures::cp2_ball(), hopf(1), ConeParameter(1, 3), 0}),
                  std::invalid_argument);
  auto bad = fixtures::cp2_ball();
  bad.cycle.coefficients[0] = -bad.cycle.coefficients[0];
  CHECK_THROWS_AS(global_signature({bad, hopf(1), std::nullopt, 0}), InconsistentData);
}

TEST_CASE("Novikov additivity on closed splits", "[assemble]") {
  SECTION("4-sphere split by a vertex star") {
    auto s = fixtures::sphere(4);
    auto r = novikov_check(s, star_marker(s.pair, 0));
    CHECK(r.closed == 0);
    CHECK(r.first == 0);
    CHECK(r.second == 0);
    CHECK(r.holds());
  }
  SECTION("projective plane split by every vertex star") {
    auto x = fixtures::cp2();
    for (std::size_t v = 0; v < 9; ++v) {
      auto r = novikov_check(x, star_marker(x.pair, v));
      CHECK(r.closed == 1);
      CHECK(r.first == 0);
      CHECK(r.second == 1);
      CHECK(r.holds());
    }
    auto r = novikov_check(x.reversed(), star_marker(x.pair, 0));
    CHECK(r.closed == -1);
    CHECK(r.holds());
  }
  SECTION("disjoint bipartition") {
    auto u = disjoint_union(fixtures::cp2(), fixtures::sphere(4));
    std::vector<bool> first(u.pair.facets().size(), false);
    for (std::size_t i = 0; i < 36; ++i) first[i] = true;
    auto r = novikov_check(u, first);
    CHECK(r.closed == 1);
    CHECK(r.first == 1);
    CHECK(r.second == 0);
  }
  SECTION("grown regions of the projective plane") {
    // regions whose interface is a manifold split additively; the others are rejected
    std::mt19937_64 rng(404);
    auto x = fixtures::cp2();
    std::size_t smooth = 0;
    for (int trial = 0; trial < 60; ++trial) {
      auto marker = grown_marker(x.pair, 1 + trial % 35, rng);
      INFO("trial " << trial);
      std::optional<NovikovReport> r;
      try {
        r = novikov_check(x, marker);
      } catch (const std::invalid_argument&) {
        continue;
      }
      CHECK(r->holds());
      ++smooth;
    }
    CHECK(smooth >= 10);
  }
  SECTION("errors") {
    auto x = fixtures::cp2();
    CHECK_THROWS_AS(novikov_check(x, std::vector<bool>(36, false)), std::invalid_argument);
    CHECK_THROWS_AS(novikov_check(x, std::vector<bool>(36, true)), std::invalid_argument);
    CHECK_THROWS_AS(novikov_check(x, std::vector<bool>(5, true)), std::invalid_argument);
    auto d = fixtures::disk_times_sphere();
    CHECK_THROWS_AS(novikov_check(d, star_marker(d.pair, 0)), std::invalid_argument);
  }
}

TEST_CASE("hodge consistency sweep", "[assemble]") {
  auto rep = verify_hodge_consistency(default_cone_grid(), 1, 8);
  CHECK(rep.rows.size() == 48);
  CHECK(rep.passed());
  std::size_t even_rows = 0;
  for (const auto& row : rep.rows) {
    if (row.f % 2 == 0) {
      ++even_rows;
      CHECK(row.audit.discrepancy());
    } else {
      CHECK_FALSE(row.audit.discrepancy());
      CHECK(row.literal_agrees);
    }
    if (row.c == 1 && row.f == 5) CHECK(row.audit.normative == 0);
    if (row.c == Rational(1, 2) && row.f == 5) CHECK(row.audit.normative == 1);
  }
  CHECK(rep.literal_discrepancies() == even_rows);
}

TEST_CASE("duality of the end tables", "[assemble]") {
  for (std::size_t k = 0; k <= 2; ++k) {
    CHECK(verify_duality(trivial_end({2, 2}, {1, 2}), k).holds());
    CHECK(verify_duality(hopf(1), k).holds());
  }
  auto h = verify_duality(hopf(1), 0);
  CHECK(h.n == 4);
  CHECK(h.rows.size() == 5);
  std::mt19937_64 rng(100);
  RandomModelOptions opt;
  opt.even_total_dimension = false;
  for (int seed = 0; seed < 100; ++seed) {
    auto rec = random_model(rng, opt).run();
    for (std::size_t k = 0; k <= 2; ++k) CHECK(verify_duality(rec, k).holds());
  }
}
