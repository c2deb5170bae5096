#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "abem/assembly.hpp"
#include "abem/error.hpp"
#include "abem/kernel.hpp"
#include "abem/refine.hpp"

using namespace abem;

namespace {

constexpr double kPi = std::numbers::pi;

Mesh slit(int n) {
  std::vector<Point> p;
  for (int i = 0; i <= n; ++i) p.emplace_back(-1.0 + 2.0 * i / n, 0.0);
  return build_mesh(p, false);
}

Mesh unit_square() { return build_mesh(std::vector<Point>{{0, 0}, {0.5, 0}, {0.5, 0.5}, {0, 0.5}}, true); }

const ScalarField f_slit = [](const Point& x) { return x.x(); };
const ScalarField one = [](const Point&) { return 1.0; };

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

TEST_CASE("assemble_V: one panel on the slit") {
  const Eigen::MatrixXd v = assemble_V(slit(1), 0);
  REQUIRE(v.rows() == 1);
  CHECK(v(0, 0) == doctest::Approx(4.0 * (1.5 - std::log(2.0)) / (2.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("assemble_V: symmetric on a random mesh") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.05, 0.3);
  std::vector<Point> p{{0, 0}};
  for (int i = 0; i < 8; ++i) p.push_back(p.back() + Point(u(rng), u(rng) - 0.15));
  const Mesh m = build_mesh(p, false);
  for (int deg : {0, 1}) {
    const Eigen::MatrixXd v = assemble_V(m, deg);
    CHECK(v.rows() == 8 * (deg + 1));
    CHECK((v - v.transpose()).cwiseAbs().maxCoeff() < 1e-12 * v.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("assemble_V: scaling identity") {
  // log|2x - 2y| = log 2 + log|x - y| and the lengths double
  const Mesh m = build_mesh(std::vector<Point>{{0, 0}, {0.3, 0.1}, {0.5, 0.4}, {0.2, 0.6}}, false);
  const Mesh m2 = scale_down(m, 0.5);
  const Eigen::MatrixXd v = assemble_V(m, 0), v2 = assemble_V(m2, 0);
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      const double expect = 4.0 * (v(i, j) - std::log(2.0) / (2.0 * kPi) * m.length(i) * m.length(j));
      CHECK(std::abs(v2(i, j) - expect) < 1e-13);
    }
}

TEST_CASE("assemble_W") {
  const Mesh sq = unit_square();
  const Eigen::MatrixXd w0 = assemble_W(sq, false, false);
  CHECK((w0 * Eigen::VectorXd::Ones(w0.rows())).cwiseAbs().maxCoeff() <= 1e-10 * w0.cwiseAbs().maxCoeff());
  const Eigen::MatrixXd w = assemble_W(uniform_refine(sq), false, true);
  CHECK(Eigen::LLT<Eigen::MatrixXd>(w).info() == Eigen::Success);

  const Mesh two = slit(2);
  const Eigen::MatrixXd w2 = assemble_W(two, true);
  REQUIRE(w2.rows() == 1);
  const Eigen::MatrixXd v = assemble_V(two, 0);
  // interior hat: derivative +1/h on the left panel, -1/h on the right one (h = 1)
  CHECK(w2(0, 0) == doctest::Approx(v(0, 0) - 2.0 * v(0, 1) + v(1, 1)).epsilon(1e-14));

  CHECK(kind_of([&] { assemble_W(sq, true); }) == ErrorKind::InvalidSpace);
  CHECK(kind_of([&] { assemble_W(two, false); }) == ErrorKind::InvalidSpace);
}

TEST_CASE("assemble_rhs") {
  CHECK(assemble_rhs(slit(1), SpaceTag::piecewise(0), f_slit)(0) == doctest::Approx(0.0));
  const Eigen::VectorXd b = assemble_rhs(slit(2), SpaceTag::piecewise(0), f_slit);
  CHECK(b(0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(b(1) == doctest::Approx(0.5).epsilon(1e-15));
  const Eigen::VectorXd h = assemble_rhs(slit(2), SpaceTag::continuous(true), one);
  REQUIRE(h.size() == 1);
  CHECK(h(0) == doctest::Approx(1.0).epsilon(1e-15));
  const Eigen::VectorXd b1 = assemble_rhs(slit(1), SpaceTag::piecewise(1), f_slit);
  CHECK(b1(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));  // int s * t over (-1, 1) with t = s
}

TEST_CASE("solve") {
  const GalerkinSystem sys = assemble_weaksing(slit(1), 0, f_slit);
  CHECK(std::abs(solve(sys).coeffs(0)) < 1e-16);

  GalerkinSystem scalar{Eigen::MatrixXd::Constant(1, 1, 4.0), Eigen::VectorXd::Constant(1, 3.0),
                        SpaceTag::piecewise(0), 7, false};
  CHECK(solve(scalar).coeffs(0) == 0.75);

  std::mt19937 rng(9);
  std::normal_distribution<double> g;
  Eigen::MatrixXd b(20, 20);
  for (auto& x : b.reshaped()) x = g(rng);
  Eigen::VectorXd rhs(20);
  for (auto& x : rhs) x = g(rng);
  GalerkinSystem spd{b * b.transpose() + 20.0 * Eigen::MatrixXd::Identity(20, 20), rhs, SpaceTag::piecewise(0), 1,
                     false};
  const DensityFunction x = solve(spd);
  CHECK((x.coeffs - spd.matrix.inverse() * rhs).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(relative_residual(spd, x) < 1e-10);

  GalerkinSystem indefinite = scalar;
  indefinite.matrix(0, 0) = -1.0;
  CHECK(kind_of([&] { solve(indefinite); }) == ErrorKind::NotPositiveDefinite);
}

TEST_CASE("capacity above one breaks positive definiteness") {
  // slit of length 8 has capacity 2
  const Mesh big = build_mesh(std::vector<Point>{{-4, 0}, {4, 0}}, false);
  CHECK(kind_of([&] { solve(assemble_weaksing(big, 0, f_slit)); }) == ErrorKind::NotPositiveDefinite);
  CHECK_NOTHROW(solve(assemble_weaksing(scale_down(big, 8.0), 0, f_slit)));
}

TEST_CASE("exact slit energy by Gauss-Chebyshev") {
  // int 2 s^2 / sqrt(1 - s^2) ds with s = cos t
  for (int n : {2, 5, 17}) {
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double s = std::cos((2.0 * k - 1.0) * kPi / (2.0 * n));
      sum += kPi / n * 2.0 * s * s;
    }
    CHECK(sum == doctest::Approx(kPi).epsilon(1e-14));
  }
}

TEST_CASE("energy") {
  const Mesh m = slit(4);
  const GalerkinSystem sys = assemble_weaksing(m, 0, f_slit);
  const DensityFunction zero = zero_function(m, SpaceTag::piecewise(0));
  const EnergyReport z = energy(sys, zero, kPi);
  CHECK(z.energy_of_solution == 0.0);
  CHECK(*z.energy_error * *z.energy_error == doctest::Approx(kPi).epsilon(1e-15));

  const DensityFunction u = solve(sys);
  const EnergyReport e = energy(sys, u, kPi);
  CHECK(e.energy_of_solution > 0.0);
  CHECK(e.energy_of_solution < kPi);
  CHECK_FALSE(energy(sys, u).energy_error.has_value());
  CHECK(kind_of([&] { energy(sys, u, 0.5 * e.energy_of_solution); }) == ErrorKind::InconsistentExactEnergy);
}

TEST_CASE("Galerkin orthogonality and energy monotonicity") {
  for (int deg : {0, 1}) {
    Mesh m = slit(2);
    double last = 0.0;
    for (int k = 0; k < 5; ++k) {
      const GalerkinSystem sys = assemble_weaksing(m, deg, f_slit);
      const DensityFunction u = solve(sys);
      CHECK(relative_residual(sys, u) < 1e-10);
      const double en = energy(sys, u, kPi).energy_of_solution;
      CHECK(en >= last - 1e-10);
      last = en;
      m = bisect(m, make_markset(m, {0}), 1.0);
    }
  }
  Mesh m = slit(2);
  double last = 0.0;
  for (int k = 0; k < 5; ++k) {
    const GalerkinSystem sys = assemble_hypsing(m, one);
    const DensityFunction u = solve(sys);
    CHECK(relative_residual(sys, u) < 1e-10);
    const double en = energy(sys, u, kPi).energy_of_solution;
    CHECK(en >= last - 1e-10);
    last = en;
    m = uniform_refine(m);
  }
}

TEST_CASE("slit problems are positive definite on fine meshes") {
  const Mesh m = slit(512);
  CHECK(Eigen::LLT<Eigen::MatrixXd>(assemble_V(m, 0)).info() == Eigen::Success);
  CHECK(Eigen::LLT<Eigen::MatrixXd>(assemble_W(m, true)).info() == Eigen::Success);
}

TEST_CASE("closed curve hypersingular solution is the constant") {
  // phi = 1 on a closed curve of length L: U = 1/L, energy 1
  const Mesh sq = uniform_refine(unit_square());
  const GalerkinSystem sys = assemble_hypsing(sq, one);
  CHECK(sys.stabilized);
  const DensityFunction u = solve(sys);
  CHECK((u.coeffs.array() - 0.5).abs().maxCoeff() < 1e-12);
  CHECK(energy(sys, u).energy_of_solution == doctest::Approx(1.0).epsilon(1e-12));
}
