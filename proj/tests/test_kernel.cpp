#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "abem/error.hpp"
#include "abem/kernel.hpp"
#include "abem/mesh.hpp"
#include "abem/spaces.hpp"
#include "oracle.hpp"

using namespace abem;

namespace {

constexpr double kPi = std::numbers::pi;

Segment random_segment(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {Point(u(rng), u(rng)), Point(u(rng), u(rng))};
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("self entry closed form") {
  const Segment unit{Point(0, 0), Point(1, 0)};
  CHECK(std::abs(slp_galerkin_entry(unit, unit, 0, 0, 0) - 3.0 / (4.0 * kPi)) < 1e-15);
  for (double h : {1e-6, 0.01, 0.3, 2.0, 5.0}) {
    const Segment s{Point(0.2, -0.1), Point(0.2 + 0.6 * h, -0.1 + 0.8 * h)};
    const double exact = h * h * (1.5 - std::log(h)) / (2.0 * kPi);
    CHECK(std::abs(slp_galerkin_entry(s, s, 0, 0, 0) - exact) <= 1e-10 * std::abs(exact));
  }
}

TEST_CASE("far field approaches the point interaction") {
  const double d = 1e4;
  const Segment a{Point(0, 0), Point(1, 0)};
  const Segment b{Point(d, 0), Point(d, 1)};
  const double v = slp_galerkin_entry(a, b, 0, 0, 0);
  const double r = (Point(d, 0.5) - Point(0.5, 0)).norm();  // centroid distance
  CHECK(std::abs(v + std::log(r) / (2.0 * kPi)) < 1e-7);
}

TEST_CASE("Galerkin blocks are symmetric") {
  std::mt19937 rng(5);
  for (int n = 0; n < 50; ++n) {
    const Segment a = random_segment(rng);
    const Segment b = n % 3 == 0 ? Segment{a.b, random_segment(rng).a} : random_segment(rng);
    const Eigen::Matrix2d ab = slp_galerkin_block(a, b);
    const Eigen::Matrix2d ba = slp_galerkin_block(b, a);
    CHECK(ab == ba.transpose());
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(slp_galerkin_entry(a, b, i, j, 1) == slp_galerkin_entry(b, a, j, i, 1));
  }
  const Segment s{Point(0, 0), Point(0.7, 0.2)};
  const Eigen::Matrix2d self = slp_galerkin_block(s, s);
  CHECK(self(0, 1) == self(1, 0));
}

TEST_CASE("Galerkin blocks agree with the brute-force oracle") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0), e(-4.0, 0.0);
  for (int n = 0; n < 24; ++n) {
    const Segment a = random_segment(rng);
    Segment b;
    switch (n % 4) {
      case 0: b = a; break;
      case 1: b = {a.b, a.b + std::pow(10.0, e(rng)) * Point(u(rng), u(rng))}; break;
      case 2: {
        const Point t = (a.b - a.a).normalized();
        const double gap = std::pow(10.0, e(rng));
        b = {a.b + gap * t, a.b + gap * t + Point(u(rng), u(rng))};
        if (segment_distance(a, b) == 0.0) b = {a.b + gap * t, a.b + 2.0 * gap * t};
        break;
      }
      default:
        do b = random_segment(rng);
        while (segment_distance(a, b) < 1e-2);
    }
    const Eigen::Matrix2d got = slp_galerkin_block(a, b);
    const Eigen::Matrix2d ref = oracle::galerkin_block(a, b);
    CHECK((got - ref).cwiseAbs().maxCoeff() <= 1e-9 * ref.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("log moments agree with the oracle, on and off the segment") {
  const Segment s{Point(-0.3, 0.2), Point(0.9, -0.4)};
  for (const Point& x : {Point(0.0, 0.0), s.map(0.3), s.map(-1.0), Point(5.0, 4.0), Point(s.map(1.0) + Point(1e-9, 0.0))}) {
    const Moments m = log_moments(x, s);
    const Eigen::Vector2d r = oracle::reference_moments(x, s);
    CHECK(std::abs(m.m0 - r(0)) < 1e-12);
    CHECK(std::abs(m.m1 - r(1)) < 1e-12);
  }
}

TEST_CASE("classify") {
  const Segment a{Point(0, 0), Point(1, 0)};
  CHECK(classify(a, a) == PanelRelation::Identical);
  CHECK(classify(a, Segment{a.b, a.a}) == PanelRelation::Identical);
  CHECK(classify(a, Segment{a.b, Point(1, 1)}) == PanelRelation::Adjacent);
  CHECK(classify(a, Segment{Point(2, 0), Point(3, 0)}) == PanelRelation::Disjoint);
  CHECK(segment_distance(a, Segment{Point(2, 0), Point(3, 0)}) == 1.0);
  CHECK(segment_distance(a, Segment{Point(0.5, -1), Point(0.5, 1)}) == 0.0);
}

TEST_CASE("invalid arguments") {
  const Segment a{Point(0, 0), Point(1, 0)};
  const Segment z{Point(1, 1), Point(1, 1)};
  CHECK(kind_of([&] { slp_galerkin_entry(a, z, 0, 0, 0); }) == ErrorKind::InvalidGeometry);
  CHECK(kind_of([&] { slp_galerkin_entry(a, a, 0, 0, 2); }) == ErrorKind::Unsupported);
  CHECK(kind_of([&] { slp_galerkin_entry(a, a, 1, 0, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("slp_eval matches panelwise oracle moments") {
  const Mesh m = build_mesh(std::vector<Point>{{0, 0}, {0.4, 0.1}, {0.9, 0.0}, {1.0, 0.6}, {0.3, 0.8}}, true);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd c(2 * m.num_panels());
  for (auto& v : c) v = u(rng);
  const DensityFunction rho = make_function(m, SpaceTag::piecewise(1), c);
  for (const Point& x : {Point(0.5, 0.4), m.map(1, 0.37), Point(30.0, -2.0), m.map(3, -0.9)}) {
    double ref = 0.0;
    for (std::size_t i = 0; i < m.num_panels(); ++i) {
      const Eigen::Vector2d mo = oracle::reference_moments(x, panel_segment(m, i));
      ref += c(2 * i) * mo(0) + c(2 * i + 1) * mo(1);
    }
    ref *= -1.0 / (2.0 * kPi);
    CHECK(std::abs(slp_eval(m, rho, x) - ref) < 1e-12);
  }
  CHECK(slp_eval(m, zero_function(m, SpaceTag::piecewise(1)), Point(0.5, 0.4)) == 0.0);
  CHECK(kind_of([&] { slp_eval(m, rho, m.vertices()[2]); }) == ErrorKind::SingularPoint);
}

TEST_CASE("slp_eval is linear") {
  const Mesh m = build_mesh(std::vector<Point>{{-1, 0}, {-0.2, 0}, {0.5, 0}, {1, 0}}, false);
  const DensityFunction a = make_function(m, SpaceTag::piecewise(0), Eigen::Vector3d(1.0, -2.0, 0.5));
  const DensityFunction b = make_function(m, SpaceTag::piecewise(0), Eigen::Vector3d(0.3, 0.7, 4.0));
  const DensityFunction ab = make_function(m, SpaceTag::piecewise(0), 2.0 * a.coeffs - 3.0 * b.coeffs);
  const Point x(0.1, 0.05);
  CHECK(slp_eval(m, ab, x) == doctest::Approx(2.0 * slp_eval(m, a, x) - 3.0 * slp_eval(m, b, x)).epsilon(1e-13));
}

TEST_CASE("exact slit density reproduces f(s) = s") {
  // -(1/pi) int_0^pi log|x - cos t| cos t dt with a graded rule split at acos(x)
  for (double x : {-0.7, 0.1, 0.5}) {
    const double ts = std::acos(x);
    auto f = [&](double t) {
      const double r = std::abs(x - std::cos(t));
      return r == 0.0 ? 0.0 : std::log(r) * std::cos(t);
    };
    const double v = -(oracle::graded(f, 0.0, ts) + oracle::graded(f, ts, kPi)) / kPi;
    CHECK(std::abs(v - x) < 1e-12);
  }
}

TEST_CASE("tangential derivative") {
  const Mesh m = build_mesh(std::vector<Point>{{0, 0}, {0.4, 0.1}, {0.9, 0.0}, {1.0, 0.6}}, false);
  const DensityFunction rho =
      make_function(m, SpaceTag::piecewise(1), (Eigen::VectorXd(6) << 1.0, 0.3, -0.5, 0.2, 0.8, -1.1).finished());
  for (std::size_t panel : {0u, 1u, 2u}) {
    for (double t : {-0.6, 0.1, 0.8}) {
      const Point x = m.map(panel, t);
      const Point tau = m.tangent(panel);
      const double h = 1e-5;
      const double fd = (slp_eval(m, rho, x + h * tau) - slp_eval(m, rho, x - h * tau)) / (2.0 * h);
      CHECK(std::abs(slp_tangential_derivative(m, rho, panel, x) - fd) < 1e-7);
    }
  }
  const Mesh one = build_mesh(std::vector<Point>{{-1, 0}, {1, 0}}, false);
  const DensityFunction c = make_function(one, SpaceTag::piecewise(0), Eigen::VectorXd::Ones(1));
  CHECK(std::abs(slp_tangential_derivative(one, c, 0, Point(0, 0))) < 1e-15);
  CHECK(kind_of([&] { slp_tangential_derivative(m, rho, 0, m.vertices()[1]); }) == ErrorKind::SingularPoint);
}
