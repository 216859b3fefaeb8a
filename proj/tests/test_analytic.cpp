#include <doctest.h>

#include <cmath>
#include <random>

#include "sigmageo/analytic.hpp"
#include "sigmageo/geodesic.hpp"
#include "sigmageo/kernel.hpp"
#include "sigmageo/metric_field.hpp"

using namespace sigmageo;

namespace {

constexpr double kPi = 3.14159265358979323846;

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Does the open unit-a disk meet the segment [x, y]? Independent oracle used
// against the shadow test inside punctured_plane_sigma.
bool segment_hits_disk(double a, const Eigen::Vector2d& x, const Eigen::Vector2d& y) {
  Eigen::Vector2d d = y - x;
  double dd = d.squaredNorm();
  double t = dd > 0 ? -x.dot(d) / dd : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (x + t * d).norm() < a;
}

}  // namespace

TEST_CASE("make_space kinds and basic values") {
  SpaceSpec e;
  e.kind = SpaceKind::Euclidean;
  e.dim = 2;
  CHECK(make_space(e)->sigma(pt({0, 0}), pt({3, 4})) == doctest::Approx(12.5));

  SpaceSpec m;
  m.kind = SpaceKind::PseudoEuclidean;
  m.dim = 2;
  CHECK(make_space(m)->sigma(pt({1, 0}), pt({0, 0})) == doctest::Approx(0.5));

  SpaceSpec p;
  p.kind = SpaceKind::PuncturedPlane;
  p.hole_radius = 1.0;
  double expected = 0.5 * std::pow(2.0 * std::sqrt(3.0) + kPi / 3.0, 2.0);
  CHECK(make_space(p)->sigma(pt({-2, 0}), pt({2, 0})) == doctest::Approx(expected).epsilon(1e-12));

  SpaceSpec bad;
  bad.kind = SpaceKind::ConstantMetric;
  bad.metric.resize(2, 2);
  bad.metric << 1, 2, 3, 1;  // asymmetric
  CHECK_THROWS_AS(make_space(bad), ConfigError);

  bad.metric << 1, 1, 1, 1;  // singular
  CHECK_THROWS_AS(make_space(bad), ConfigError);
}

TEST_CASE("interval classification") {
  SpaceSpec m;
  m.kind = SpaceKind::PseudoEuclidean;
  m.dim = 2;
  auto space = make_space(m);
  CHECK(classify_interval(*space, pt({0, 0}), pt({1, 0}), 1e-9) == IntervalKind::Timelike);
  CHECK(classify_interval(*space, pt({0, 0}), pt({1, 1}), 1e-9) == IntervalKind::Null);
  CHECK(classify_interval(*space, pt({0, 0}), pt({0, 1}), 1e-9) == IntervalKind::Spacelike);
}

TEST_CASE("classification is invariant under reflection isometries") {
  SpaceSpec m;
  m.kind = SpaceKind::PseudoEuclidean;
  m.dim = 2;
  auto space = make_space(m);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd a(2), b(2);
    a << -2 + 4 * u01(rng), -2 + 4 * u01(rng);
    b << -2 + 4 * u01(rng), -2 + 4 * u01(rng);
    IntervalKind base = classify_interval(*space, Point::Coords(a), Point::Coords(b), 1e-9);
    Eigen::VectorXd at = a, bt = b;
    at[0] = -at[0];
    bt[0] = -bt[0];
    CHECK(classify_interval(*space, Point::Coords(at), Point::Coords(bt), 1e-9) == base);
    Eigen::VectorXd ax = a, bx = b;
    ax[1] = -ax[1];
    bx[1] = -bx[1];
    CHECK(classify_interval(*space, Point::Coords(ax), Point::Coords(bx), 1e-9) == base);
  }
}

TEST_CASE("punctured plane world function") {
  Eigen::Vector2d left(-2, 0), right(2, 0), up_left(-2, 2), up_right(2, 2);
  double wrap = 0.5 * std::pow(2.0 * std::sqrt(3.0) + kPi / 3.0, 2.0);
  CHECK(punctured_plane_sigma(1.0, left, right) == doctest::Approx(wrap).epsilon(1e-12));
  CHECK(punctured_plane_sigma(1.0, up_left, up_right) == doctest::Approx(8.0).epsilon(1e-15));
  Eigen::Vector2d inside(0.5, 0);
  CHECK_THROWS_AS(punctured_plane_sigma(1.0, inside, right), PointInsideHoleError);
}

TEST_CASE("punctured sigma dominates the Euclidean one, equality off the shadow") {
  std::mt19937_64 rng(9);
  int shadowed = 0;
  for (int i = 0; i < 500; ++i) {
    Eigen::Vector2d x(-3 + 6 * u01(rng), -3 + 6 * u01(rng));
    Eigen::Vector2d y(-3 + 6 * u01(rng), -3 + 6 * u01(rng));
    if (x.norm() < 1.0 || y.norm() < 1.0) {
      --i;
      continue;
    }
    double s = punctured_plane_sigma(1.0, x, y);
    double se = 0.5 * (x - y).squaredNorm();
    CHECK(s >= se - 1e-12 * std::max(1.0, se));
    if (segment_hits_disk(1.0, x, y)) {
      ++shadowed;
      CHECK(s > se + 1e-12);
    } else {
      CHECK(s == doctest::Approx(se).epsilon(1e-14));
    }
  }
  CHECK(shadowed > 10);
}

TEST_CASE("punctured sigma is continuous across the shadow boundary") {
  // moving endpoint crosses the shadow boundary as t passes 1
  auto sigma_at = [](double t) {
    Eigen::Vector2d x(-2, 1.0 * t), y(2, 1.0 * t);
    return punctured_plane_sigma(1.0, x, y);
  };
  double prev_jump = 0.0;
  for (int k = 1; k <= 4; ++k) {
    double delta = std::pow(10.0, -k);
    double jump = std::abs(sigma_at(1.0 + delta) - sigma_at(1.0 - delta));
    if (k > 1) CHECK(jump < 0.35 * prev_jump);  // shrinks at least linearly
    prev_jump = jump;
  }
  CHECK(prev_jump < 1e-3);
}

TEST_CASE("sphere world function") {
  SpaceSpec s;
  s.kind = SpaceKind::Sphere;
  s.sphere_radius = 1.0;
  auto sphere = make_space(s);
  // quarter of the equator
  CHECK(sphere->sigma(pt({kPi / 2, 0}), pt({kPi / 2, kPi / 2})) ==
        doctest::Approx(kPi * kPi / 8.0).epsilon(1e-12));
  bool antipodal = false;
  Eigen::Vector2d a(kPi / 2, 0), b(kPi / 2, kPi);
  double full = sphere_sigma(1.0, a, b, &antipodal);
  CHECK(antipodal);
  CHECK(full == doctest::Approx(0.5 * kPi * kPi).epsilon(1e-12));

  auto* sp = dynamic_cast<const SphereSpace*>(sphere.get());
  REQUIRE(sp != nullptr);
  CHECK(sp->is_antipodal(pt({kPi / 2, 0}), pt({kPi / 2, kPi}), 1e-9));
  CHECK_FALSE(sp->is_antipodal(pt({kPi / 2, 0}), pt({kPi / 2, 1.0}), 1e-9));
}

TEST_CASE("sphere sigma matches the discrete geodesic solver") {
  SpaceSpec s;
  s.kind = SpaceKind::Sphere;
  s.sphere_radius = 1.0;
  auto sphere = make_space(s);
  MetricField metric = sphere_metric(1.0);
  SolverOptions opts;
  opts.nodes = 128;
  std::mt19937_64 rng(17);
  int done = 0;
  while (done < 10) {
    Eigen::VectorXd a(2), b(2);
    a << 0.5 + 2.1 * u01(rng), -1.4 + 2.8 * u01(rng);
    b << 0.5 + 2.1 * u01(rng), -1.4 + 2.8 * u01(rng);
    double closed = sphere->sigma(Point::Coords(a), Point::Coords(b));
    double arc = std::sqrt(2.0 * closed);
    if (arc < 0.05 || arc > 2.8) continue;
    double solved = sigma_riemannian(metric, a, b, opts);
    CHECK(std::abs(solved - closed) <= 1e-6 * std::max(1.0, closed));
    ++done;
  }
}

TEST_CASE("flat sigma is translation invariant") {
  SpaceSpec m;
  m.kind = SpaceKind::ConstantMetric;
  m.metric.resize(2, 2);
  m.metric << 2, 0.5, 0.5, 1;
  auto space = make_space(m);
  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd a(2), b(2), shift(2);
    a << u01(rng), u01(rng);
    b << u01(rng), u01(rng);
    shift << 4 * u01(rng), -3 * u01(rng);
    double base = space->sigma(Point::Coords(a), Point::Coords(b));
    double moved = space->sigma(Point::Coords(a + shift), Point::Coords(b + shift));
    CHECK(moved == doctest::Approx(base).epsilon(1e-12));
  }
}
