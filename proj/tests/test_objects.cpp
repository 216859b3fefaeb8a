#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "sigmageo/analytic.hpp"
#include "sigmageo/objects.hpp"

using namespace sigmageo;

namespace {

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::shared_ptr<SigmaSpace> euclid(int dim) {
  SpaceSpec s;
  s.kind = SpaceKind::Euclidean;
  s.dim = dim;
  return make_space(s);
}

std::shared_ptr<SigmaSpace> minkowski(int dim) {
  SpaceSpec s;
  s.kind = SpaceKind::PseudoEuclidean;
  s.dim = dim;
  return make_space(s);
}

Eigen::VectorXd rv(std::mt19937_64& rng, int dim, double lo = -2.0, double hi = 2.0) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = lo + (hi - lo) * u01(rng);
  return v;
}

}  // namespace

TEST_CASE("sphere membership") {
  auto e2 = euclid(2);
  CHECK(sphere_contains(*e2, pt({0, 0}), pt({1, 0}), pt({0, 1}), 1e-9).member);
  CHECK_FALSE(sphere_contains(*e2, pt({0, 0}), pt({1, 0}), pt({2, 0}), 1e-9).member);

  // pseudo-Euclidean sphere is a hyperbola
  auto m2 = minkowski(2);
  CHECK(sphere_contains(*m2, pt({0, 0}), pt({1, 0}), pt({1.25, 0.75}), 1e-9).member);
}

TEST_CASE("sphere basic points are not interchangeable") {
  auto e2 = euclid(2);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    Point o = Point::Coords(rv(rng, 2));
    Point p = Point::Coords(rv(rng, 2));
    if (e2->sigma(o, p) < 1e-6) continue;
    CHECK(sphere_contains(*e2, o, p, p, 1e-9).member);
    CHECK_FALSE(sphere_contains(*e2, o, p, o, 1e-9).member);
  }
}

TEST_CASE("cylinder membership") {
  auto e3 = euclid(3);
  Point a1 = pt({0, 0, 0}), a2 = pt({0, 0, 1}), through = pt({1, 0, 0});
  CHECK(cylinder_contains(*e3, a1, a2, through, pt({0, 1, 0.7}), 1e-9).member);
  CHECK_FALSE(cylinder_contains(*e3, a1, a2, through, pt({2, 0, 0}), 1e-9).member);
  CHECK(cylinder_contains(*e3, a1, a2, through, through, 1e-9).member);
  CHECK_THROWS_AS(cylinder_contains(*e3, a1, a1, through, through, 1e-9), DegenerateBasisError);

  // timelike axis in a pseudo-Euclidean space: off-axis triples have F_2 < 0
  auto m3 = minkowski(3);
  CHECK_THROWS_AS(
      cylinder_contains(*m3, pt({0, 0, 0}), pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1}), 1e-9),
      ImaginaryAreaError);
}

TEST_CASE("cylinders around the same Euclidean axis coincide") {
  auto e3 = euclid(3);
  Point p0 = pt({0, 0, 0}), p1 = pt({0, 0, 2}), p1_inner = pt({0, 0, 0.75});
  Point through = pt({1.3, 0, 0.4});
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    Point r = Point::Coords(rv(rng, 3, -3.0, 3.0));
    bool a = cylinder_contains(*e3, p0, p1, through, r, 1e-9).member;
    bool b = cylinder_contains(*e3, p0, p1_inner, through, r, 1e-9).member;
    CHECK(a == b);
  }
  // points constructed on the cylinder itself agree as well
  for (int i = 0; i < 100; ++i) {
    double phi = 2 * M_PI * u01(rng);
    double z = -2 + 4 * u01(rng);
    double rad = std::sqrt(1.3 * 1.3);
    Point r = pt({rad * std::cos(phi), rad * std::sin(phi), z});
    CHECK(cylinder_contains(*e3, p0, p1, through, r, 1e-9).member ==
          cylinder_contains(*e3, p0, p1_inner, through, r, 1e-9).member);
  }
}

TEST_CASE("ellipsoid membership") {
  auto e2 = euclid(2);
  Point f1 = pt({-1, 0}), f2 = pt({1, 0}), through = pt({0, 1});
  CHECK(ellipsoid_contains(*e2, f1, f2, through, pt({0, -1}), 1e-9).member);
  CHECK_FALSE(ellipsoid_contains(*e2, f1, f2, through, pt({3, 0}), 1e-9).member);

  auto m2 = minkowski(2);
  CHECK_THROWS_AS(
      ellipsoid_contains(*m2, pt({0, 0}), pt({1, 0}), pt({0, 2}), pt({0, 1}), 1e-9),
      NegativeSigmaError);
}

TEST_CASE("ellipsoid through a focus degenerates into the segment") {
  auto e2 = euclid(2);
  Point f1 = pt({-1, 0.5}), f2 = pt({1.5, 0.25});
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    Point r = Point::Coords(rv(rng, 2, -3.0, 3.0));
    if (i % 4 == 0) {
      double t = u01(rng);
      r = Point::Coords(((1 - t) * f1.coords() + t * f2.coords()).eval());
    }
    bool as_ellipsoid = ellipsoid_contains(*e2, f1, f2, f1, r, 1e-9).member;
    bool as_segment = segment_contains(*e2, f1, f2, r, 1e-9).member;
    CHECK(as_ellipsoid == as_segment);
  }
}

TEST_CASE("segment membership") {
  auto e2 = euclid(2);
  Point p1 = pt({0, 0}), p2 = pt({2, 0});
  CHECK(segment_contains(*e2, p1, p2, pt({1, 0}), 1e-9).member);
  CHECK_FALSE(segment_contains(*e2, p1, p2, pt({1, 0.1}), 1e-9).member);
  CHECK(segment_contains(*e2, p1, p2, p1, 1e-9).member);
  CHECK(segment_contains(*e2, p1, p2, p2, 1e-9).member);
}

TEST_CASE("first-order tube membership") {
  auto e2 = euclid(2);
  // the tube is the infinite straight, not just the segment
  CHECK(tube_contains(*e2, {pt({0, 0}), pt({1, 0})}, pt({-3, 0}), 1e-9).member);

  auto e3 = euclid(3);
  CHECK(tube_contains(*e3, {pt({0, 0, 0}), pt({1, 0, 0}), pt({0, 1, 0})}, pt({2, 5, 0}), 1e-9)
            .member);

  auto m3 = minkowski(3);
  MembershipResult r =
      tube_contains(*m3, {pt({0, 0, 0}), pt({1, 0, 0})}, pt({0, 1, 0}), 1e-9);
  CHECK_FALSE(r.member);

  CHECK_THROWS_AS(tube_contains(*e2, {pt({0, 0}), pt({0, 0})}, pt({1, 1}), 1e-9),
                  DegenerateBasisError);
}

TEST_CASE("segment members lie on the first-order tube") {
  auto e2 = euclid(2);
  Point p1 = pt({-1, 0.25}), p2 = pt({2, 1.25});
  std::mt19937_64 rng(29);
  for (int i = 0; i < 200; ++i) {
    double t = u01(rng);
    Point r = Point::Coords(((1 - t) * p1.coords() + t * p2.coords()).eval());
    CHECK(segment_contains(*e2, p1, p2, r, 1e-9).member);
    CHECK(tube_contains(*e2, {p1, p2}, r, 1e-9).member);
  }
}

TEST_CASE("Euclidean straight lies in every plane through its basis") {
  auto e3 = euclid(3);
  Point p0 = pt({0.2, -0.1, 0.4}), p1 = pt({1.1, 0.7, -0.3}), p2 = pt({-0.5, 1.2, 0.9});
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    double t = -5 + 10 * u01(rng);
    Point r = Point::Coords((p0.coords() + t * (p1.coords() - p0.coords())).eval());
    CHECK(tube_contains(*e3, {p0, p1, p2}, r, 1e-9).member);
  }
}

TEST_CASE("tube through a point collinear to a vector") {
  auto e2 = euclid(2);
  Point p0 = pt({0, 0}), p1 = pt({1, 0}), q0 = pt({0, 1});
  CHECK(tube_through_point_contains(*e2, p0, p1, q0, pt({4, 1}), 1e-9).member);
  CHECK_FALSE(tube_through_point_contains(*e2, p0, p1, q0, pt({1, 2}), 1e-9).member);
  CHECK_THROWS_AS(tube_through_point_contains(*e2, p0, p1, q0, q0, 1e-9), ZeroVectorError);

  // spacelike direction in a 3D pseudo-Euclidean space: the tube contains the
  // null sheet directions through q0
  auto m3 = minkowski(3);
  CHECK(tube_through_point_contains(*m3, pt({0, 0, 0}), pt({0, 0, 1}), pt({0, 0, 0}),
                                    pt({1, 1, 0}), 1e-9)
            .member);
}

TEST_CASE("tube grid samples follow the pseudo-Euclidean dichotomy") {
  auto m3 = minkowski(3);
  GridSpec grid;
  grid.lo = Eigen::VectorXd::Constant(3, -2.0);
  grid.hi = Eigen::VectorXd::Constant(3, 2.0);
  grid.counts = {21, 21, 21};

  SUBCASE("timelike basis collapses to the axis") {
    TubeSample s = sample_tube(*m3, {pt({0, 0, 0}), pt({1, 0, 0})}, grid, 1e-6);
    REQUIRE(s.points.size() == 21);
    for (const auto& p : s.points) {
      CHECK(std::abs(p[1]) <= 1e-12);
      CHECK(std::abs(p[2]) <= 1e-12);
    }
  }

  SUBCASE("spacelike basis spans two planes") {
    TubeSample s = sample_tube(*m3, {pt({0, 0, 0}), pt({0, 0, 1})}, grid, 1e-6);
    CHECK(s.points.size() == 21ull * 21ull * 2ull - 21ull);  // planes share the x0=x1=0 line
    for (const auto& p : s.points)
      CHECK(std::min(std::abs(p[0] - p[1]), std::abs(p[0] + p[1])) <= 1e-9);
  }

  SUBCASE("null basis spans one plane") {
    TubeSample s = sample_tube(*m3, {pt({0, 0, 0}), pt({1, 1, 0})}, grid, 1e-6);
    CHECK(s.points.size() == 21ull * 21ull);
    for (const auto& p : s.points) CHECK(std::abs(p[0] - p[1]) <= 1e-9);
  }

  SUBCASE("plane basis in Euclidean 3-space keeps x3 = 0") {
    auto e3 = euclid(3);
    TubeSample s =
        sample_tube(*e3, {pt({0, 0, 0}), pt({1, 0, 0}), pt({0, 1, 0})}, grid, 1e-6);
    CHECK(s.points.size() == 21ull * 21ull);
    for (const auto& p : s.points) CHECK(std::abs(p[2]) <= 1e-9);
  }
}

TEST_CASE("broken tube sampling") {
  auto e2 = euclid(2);

  SUBCASE("two links form an L") {
    TubeSample s = broken_tube(*e2, {pt({0, 0}), pt({1, 0}), pt({1, 1})}, 11, 1e-9);
    CHECK(s.points.size() == 21);  // shared vertex deduplicated
    for (const auto& p : s.points)
      CHECK((std::abs(p[1]) <= 1e-12 || std::abs(p[0] - 1.0) <= 1e-12));
  }

  SUBCASE("single segment matches plain segment sampling") {
    TubeSample s = broken_tube(*e2, {pt({0, 0}), pt({2, 0})}, 5, 1e-9);
    REQUIRE(s.points.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
      CHECK(s.points[i][0] == doctest::Approx(0.5 * static_cast<double>(i)));
  }

  SUBCASE("repeated vertex contributes only itself") {
    TubeSample s = broken_tube(*e2, {pt({0, 0}), pt({0, 0}), pt({1, 0})}, 3, 1e-9);
    REQUIRE(s.points.size() == 3);
    CHECK(s.points[0] == Eigen::Vector2d(0, 0));
  }

  auto m2 = minkowski(2);
  CHECK_THROWS_AS(broken_tube(*m2, {pt({0, 0}), pt({0, 1})}, 3, 1e-9), NegativeSigmaError);
}

TEST_CASE("grid sampling validates its spec") {
  auto e2 = euclid(2);
  GridSpec grid;
  grid.lo = Eigen::VectorXd::Constant(2, -1.0);
  grid.hi = Eigen::VectorXd::Constant(2, 1.0);
  grid.counts = {1, 5};
  CHECK_THROWS_AS(sample_tube(*e2, {pt({0, 0}), pt({1, 0})}, grid, 1e-9), ConfigError);
}
