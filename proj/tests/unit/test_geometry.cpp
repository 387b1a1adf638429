// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "defcast/errors.hpp"
#include "defcast/geometry.hpp"
#include "oracles.hpp"

using namespace defcast;

namespace {

std::vector<ConvexDomain> sample_domains() {
  return {ConvexDomain::interval(-1.0, 2.0),
          ConvexDomain::box({{-1.0, 1.0}, {0.0, 2.0}, {3.0, 3.5}}),
          ConvexDomain::simplex(4),
          ConvexDomain::parabola_hull(0.0, 1.0),
          ConvexDomain::parabola_hull(-2.0, 0.5),
          ConvexDomain::finite_hull({Vector{0, 0}, Vector{2, 0}, Vector{1, 1.5}, Vector{0.2, 1.2}})};
}

} // namespace

TEST_CASE("projection examples") {
  CHECK(project(ConvexDomain::interval(0, 1), Vector{0.5}) == Vector{0.5});
  CHECK(project(ConvexDomain::interval(0, 1), Vector{1.7}) == Vector{1.0});
  const Vector s = project(ConvexDomain::simplex(2), Vector{1, 1});
  CHECK(s[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("parabola projection matches dense grid oracle") {
  const auto hull = ConvexDomain::parabola_hull(0, 1);
  for (const Vector& p : {Vector{0.5, 0.0}, Vector{2.0, 0.3}, Vector{-0.4, 0.9}, Vector{0.3, 3.0}, Vector{1.5, 2.5}}) {
    const Vector got = project(hull, p);
    double best = 1e300;
    for (const auto& b : oracle::parabola_boundary(0.0, 1.0, 1e-4)) best = std::min(best, distance(p, b));
    CHECK(distance(p, got) <= best + 1e-12);
    CHECK(distance(p, got) >= best - 1e-7);
    CHECK(oracle::member(hull, got, 1e-12));
  }
  // First example: the nearest point lies on the arc.
  const Vector on_arc = project(hull, Vector{0.5, 0.0});
  CHECK(on_arc[1] == doctest::Approx(on_arc[0] * on_arc[0]).epsilon(1e-14));
}

TEST_CASE("is_normal_exterior examples") {
  const auto unit = ConvexDomain::interval(0, 1);
  CHECK(is_normal_exterior(unit, Vector{1}, Vector{0.3}, 1e-12));
  CHECK_FALSE(is_normal_exterior(unit, Vector{0.4}, Vector{0.3}, 1e-12));
  const Vector f{1, 0, 0}, s{1, -1, -1};
  CHECK(is_normal_exterior(ConvexDomain::simplex(3), f, s, 0.0));
  CHECK(oracle::vertex_slack(oracle::simplex_vertices(3), s, f) == 0.0);
  CHECK_THROWS_AS(is_normal_exterior(unit, Vector{1.5}, Vector{1}, 1e-6), ContractViolation);
}

TEST_CASE("support_max examples") {
  const auto a = support_max(ConvexDomain::interval(0, 1), Vector{-2});
  CHECK(a.point == Vector{0});
  CHECK(a.value == 0.0);
  const auto b = support_max(ConvexDomain::simplex(3), Vector{1, 5, 2});
  CHECK(b.point == Vector{0, 1, 0});
  CHECK(b.value == 5.0);
  const auto c = support_max(ConvexDomain::parabola_hull(0, 1), Vector{0, 1});
  double best = -1e300;
  for (const auto& y : oracle::parabola_boundary(0.0, 1.0, 1e-4)) best = std::max(best, y[1]);
  CHECK(c.value == doctest::Approx(best).epsilon(1e-12));
  CHECK(c.point[1] == doctest::Approx((0.0 + 1.0) * c.point[0]).epsilon(1e-12));
}

TEST_CASE("support_max ties go to the lexicographically smallest point") {
  const auto s = support_max(ConvexDomain::simplex(3), Vector{2, 2, 1});
  CHECK(s.point == Vector{0, 1, 0});
  const auto i = support_max(ConvexDomain::interval(0, 1), Vector{0});
  CHECK(i.point == Vector{0});
}

TEST_CASE("barycenter and diameter examples") {
  CHECK(barycenter(ConvexDomain::interval(0, 1)) == Vector{0.5});
  const Vector b3 = barycenter(ConvexDomain::simplex(3));
  for (double c : b3) CHECK(c == doctest::Approx(1.0 / 3.0));
  CHECK(barycenter(ConvexDomain::box({{-1, 1}, {0, 2}})) == Vector{0, 1});

  CHECK(diameter(ConvexDomain::interval(0, 1)) == 1.0);
  CHECK(diameter(ConvexDomain::simplex(3)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // Arc diameter by pairwise grid oracle, step 1e-3.
  for (auto [lo, hi] : {std::pair{0.0, 1.0}, std::pair{-1.0, 0.5}, std::pair{-0.3, 0.3}}) {
    std::vector<Vector> arc;
    for (int k = 0; k <= 1000; ++k) {
      const double t = lo + (hi - lo) * k / 1000.0;
      arc.push_back(Vector{t, t * t});
    }
    double best = 0.0;
    for (const auto& p : arc) {
      for (const auto& q : arc) best = std::max(best, distance(p, q));
    }
    const double d = diameter(ConvexDomain::parabola_hull(lo, hi));
    CHECK(d >= best - 1e-12);
    CHECK(d <= best + 1e-5);
  }
  CHECK(diameter(ConvexDomain::parabola_hull(0, 1)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("projection laws on random points") {
  oracle::Rng rng(11);
  for (const auto& d : sample_domains()) {
    for (int k = 0; k < 200; ++k) {
      const Vector p = rng.normal_vector(d.dim(), 2.0) + barycenter(d);
      const Vector q = rng.normal_vector(d.dim(), 2.0) + barycenter(d);
      const Vector pp = project(d, p);
      CHECK(distance(project(d, pp), pp) <= 1e-12);
      CHECK(distance(pp, project(d, q)) <= distance(p, q) + 1e-12);
      CHECK(oracle::member(d, pp, 1e-12));
      for (int j = 0; j < 10; ++j) {
        const Vector y = oracle::sample_in(d, rng);
        CHECK(dot(p - pp, y - pp) <= 1e-10);
        CHECK(dot(p, y) <= support_max(d, p).value + 1e-12);
      }
      for (const auto& y : extreme_points(d)) CHECK(dot(p - pp, y - pp) <= 1e-10);
    }
  }
}

TEST_CASE("is_normal_exterior agrees with support_max") {
  oracle::Rng rng(5);
  for (const auto& d : sample_domains()) {
    for (int k = 0; k < 100; ++k) {
      const Vector f = project(d, rng.normal_vector(d.dim(), 3.0));
      const Vector s = rng.normal_vector(d.dim());
      const double tol = 1e-9;
      CHECK(is_normal_exterior(d, f, s, tol) == (support_max(d, s).value <= dot(s, f) + tol));
    }
  }
}

TEST_CASE("domain construction is validated") {
  CHECK_THROWS_AS(ConvexDomain::interval(1, 1), ValidationError);
  CHECK_THROWS_AS(ConvexDomain::interval(0, INFINITY), ValidationError);
  CHECK_THROWS_AS(ConvexDomain::parabola_hull(2, 1), ValidationError);
  CHECK_THROWS_AS(ConvexDomain::simplex(0), ValidationError);
  CHECK_THROWS_AS(ConvexDomain::finite_hull({}), ValidationError);
  CHECK_THROWS_AS(ConvexDomain::finite_hull({Vector{0, 1}, Vector{1}}), ValidationError);
  CHECK_THROWS_AS(ConvexDomain::finite_hull({Vector{0, NAN}}), ValidationError);
  CHECK_THROWS_AS(project(ConvexDomain::simplex(3), Vector{1, 2}), ContractViolation);
}

TEST_CASE("grid points stay inside the domain") {
  for (const auto& d : sample_domains()) {
    const auto pts = grid_points(d, 20);
    CHECK(pts.size() > 3);
    for (const auto& p : pts) CHECK(oracle::member(d, p, 1e-12));
  }
}
