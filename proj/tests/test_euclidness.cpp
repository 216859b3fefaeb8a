#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "sigmageo/analytic.hpp"
#include "sigmageo/euclidness.hpp"
#include "sigmageo/kernel.hpp"

using namespace sigmageo;

namespace {

constexpr double kPi = 3.14159265358979323846;

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

std::vector<Point> box_samples(const SigmaSpace& space, int count, std::uint64_t seed,
                               double lo = -2.0, double hi = 2.0) {
  Eigen::VectorXd lov = Eigen::VectorXd::Constant(space.dimension(), lo);
  Eigen::VectorXd hiv = Eigen::VectorXd::Constant(space.dimension(), hi);
  return sample_box(space, lov, hiv, count, seed);
}

}  // namespace

TEST_CASE("chart construction") {
  auto e2 = euclid(2);
  Chart ortho = build_chart(*e2, {pt({0, 0}), pt({1, 0}), pt({0, 1})});
  CHECK((ortho.g_cov - Eigen::MatrixXd::Identity(2, 2)).norm() <= 1e-12);
  CHECK((ortho.g_cov * ortho.g_contra - Eigen::MatrixXd::Identity(2, 2)).norm() <= 1e-9);
  CHECK(ortho.positive_eigenvalues == 2);
  CHECK(ortho.negative_eigenvalues == 0);

  Chart skew = build_chart(*e2, {pt({0, 0}), pt({2, 0}), pt({0, 1})});
  CHECK(skew.g_cov(0, 0) == doctest::Approx(4.0));
  CHECK(skew.g_cov(1, 1) == doctest::Approx(1.0));
  CHECK(skew.g_cov(0, 1) == doctest::Approx(0.0));

  auto m2 = minkowski(2);
  Chart mink = build_chart(*m2, {pt({0, 0}), pt({1, 0}), pt({0, 1})});
  CHECK(mink.g_cov(0, 0) == doctest::Approx(1.0));
  CHECK(mink.g_cov(1, 1) == doctest::Approx(-1.0));
  CHECK(mink.positive_eigenvalues == 1);
  CHECK(mink.negative_eigenvalues == 1);

  CHECK_THROWS_AS(build_chart(*e2, {pt({0, 0}), pt({1, 0}), pt({2, 0})}),
                  DegenerateBasisError);
}

TEST_CASE("covariant coordinates") {
  auto e2 = euclid(2);
  Chart ortho = build_chart(*e2, {pt({0, 0}), pt({1, 0}), pt({0, 1})});
  Eigen::VectorXd x = covariant_coordinates(*e2, ortho, pt({3, 4}));
  CHECK(x[0] == doctest::Approx(3.0));
  CHECK(x[1] == doctest::Approx(4.0));
  CHECK(covariant_coordinates(*e2, ortho, pt({0, 0})).norm() == 0.0);

  Chart skew = build_chart(*e2, {pt({0, 0}), pt({2, 0}), pt({0, 1})});
  CHECK(covariant_coordinates(*e2, skew, pt({3, 4}))[0] == doctest::Approx(6.0));
}

TEST_CASE("sigma reconstruction in a chart") {
  auto e2 = euclid(2);
  Chart ortho = build_chart(*e2, {pt({0, 0}), pt({1, 0}), pt({0, 1})});
  Eigen::VectorXd a(2), b(2);
  a << 0, 0;
  b << 3, 4;
  CHECK(reconstruct_sigma(ortho, a, b) == doctest::Approx(12.5));
  CHECK(reconstruct_sigma(ortho, b, b) == 0.0);

  auto m2 = minkowski(2);
  Chart mink = build_chart(*m2, {pt({0, 0}), pt({1, 0}), pt({0, 1})});
  Eigen::VectorXd y(2);
  y << 0, 1;
  CHECK(reconstruct_sigma(mink, a, y) == doctest::Approx(-0.5));
}

TEST_CASE("round trip: reconstruction equals direct sigma on flat spaces") {
  std::mt19937_64 rng(3);
  for (int dim = 1; dim <= 4; ++dim) {
    auto space = euclid(dim);
    auto samples = box_samples(*space, 60, 77 + static_cast<std::uint64_t>(dim));
    auto [n, basis] = detect_dimension(*space, samples, 6, 1e-9);
    REQUIRE(n == dim);
    Chart chart = build_chart(*space, basis);
    for (auto& pr : sample_pairs(samples, 200, 5)) {
      double direct = space->sigma(pr.first, pr.second);
      double recon = reconstruct_sigma(chart, covariant_coordinates(*space, chart, pr.first),
                                       covariant_coordinates(*space, chart, pr.second));
      CHECK(std::abs(direct - recon) <= 1e-9 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("dimension detection") {
  SUBCASE("Euclidean 3-space") {
    auto e3 = euclid(3);
    auto samples = box_samples(*e3, 200, 1);
    auto [n, basis] = detect_dimension(*e3, samples, 6, 1e-9);
    CHECK(n == 3);
    CHECK(basis.size() == 4);
    CHECK(std::abs(gram(*e3, basis).determinant) > 1e-12);
  }

  SUBCASE("pseudo-Euclidean plane: rank counting is signature-blind") {
    auto m2 = minkowski(2);
    auto samples = box_samples(*m2, 200, 2);
    auto [n, basis] = detect_dimension(*m2, samples, 6, 1e-9);
    CHECK(n == 2);
  }

  SUBCASE("unit square corners as a finite space") {
    auto e2 = euclid(2);
    std::vector<Point> corners = {pt({0, 0}), pt({1, 0}), pt({1, 1}), pt({0, 1})};
    Eigen::MatrixXd table(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k)
        table(i, k) = e2->sigma(corners[static_cast<std::size_t>(i)],
                                corners[static_cast<std::size_t>(k)]);
    FiniteSigmaSpace finite(table);
    auto labels = all_labels(finite);
    auto [n, basis] = detect_dimension(finite, labels, 4, 1e-9);
    CHECK(n == 2);
  }

  SUBCASE("detection is seed independent on flat spaces") {
    auto e2 = euclid(2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto samples = box_samples(*e2, 120, seed);
      CHECK(try_detect_dimension(*e2, samples, 6, 1e-9).dim == 2);
    }
  }

  SUBCASE("cap exceeded throws") {
    SpaceSpec s;
    s.kind = SpaceKind::Sphere;
    s.sphere_radius = 1.0;
    auto sphere = make_space(s);
    auto samples = box_samples(*sphere, 60, 3, 0.5, 2.6);
    CHECK_THROWS_AS(detect_dimension(*sphere, samples, 4, 1e-9), DimensionCapError);
  }
}

TEST_CASE("three conditions on a flat space") {
  auto e3 = euclid(3);
  auto samples = box_samples(*e3, 150, 4);
  auto [n, basis] = detect_dimension(*e3, samples, 6, 1e-9);
  Chart chart = build_chart(*e3, basis);
  EuclidReport report =
      check_conditions(*e3, chart, samples, sample_pairs(samples, 500, 4), 3, 1e-8);
  CHECK(report.cond1.pass);
  CHECK(report.cond2.pass);
  CHECK(report.cond3.pass);
  CHECK(report.cond3_surjectivity == "verified");
  CHECK(report.cond1.max_residual <= 1e-10);  // rounding scale, not grid scale
}

TEST_CASE("curved spaces fail condition II") {
  SUBCASE("sphere") {
    SpaceSpec s;
    s.kind = SpaceKind::Sphere;
    s.sphere_radius = 1.0;
    auto sphere = make_space(s);
    auto samples = box_samples(*sphere, 80, 5, 0.5, 2.6);
    DetectResult det = try_detect_dimension(*sphere, samples, 4, 1e-9);
    CHECK_FALSE(det.found);
    Chart chart = build_chart(*sphere, det.basis);
    EuclidReport report =
        check_conditions(*sphere, chart, samples, sample_pairs(samples, 300, 5), 3, 1e-8);
    CHECK_FALSE(report.cond2.pass);
    CHECK(report.cond2.max_residual > 1e-3);
    CHECK(report.cond3_surjectivity == "not-assessable");
  }

  SUBCASE("punctured plane with shadowed pairs") {
    SpaceSpec s;
    s.kind = SpaceKind::PuncturedPlane;
    s.hole_radius = 1.0;
    auto space = make_space(s);
    auto samples = box_samples(*space, 150, 6, -3.0, 3.0);
    DetectResult det = try_detect_dimension(*space, samples, 4, 1e-9);
    Chart chart = build_chart(*space, det.basis);
    EuclidReport report =
        check_conditions(*space, chart, samples, sample_pairs(samples, 400, 6), 3, 1e-8);
    CHECK_FALSE(report.cond2.pass);
  }
}

TEST_CASE("chart signature matches the constructing metric") {
  auto m3 = minkowski(3);
  auto samples = box_samples(*m3, 150, 7);
  auto [n, basis] = detect_dimension(*m3, samples, 6, 1e-9);
  REQUIRE(n == 3);
  Chart chart = build_chart(*m3, basis);
  CHECK(chart.positive_eigenvalues == 1);
  CHECK(chart.negative_eigenvalues == 2);
}

TEST_CASE("quarter-arc sphere pair shows the curved mismatch scale") {
  // equator quarter arc: sigma = pi^2/8, chord-based reconstruction cannot
  // reproduce it
  SpaceSpec s;
  s.kind = SpaceKind::Sphere;
  s.sphere_radius = 1.0;
  auto sphere = make_space(s);
  double direct = sphere->sigma(pt({kPi / 2, 0}), pt({kPi / 2, kPi / 2}));
  CHECK(direct == doctest::Approx(1.2337005501361697).epsilon(1e-12));
}
