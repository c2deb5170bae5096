#include <doctest.h>

#include <cmath>

#include "abem/error.hpp"
#include "abem/quadrature.hpp"

using namespace abem;

TEST_CASE("gauss_rule: small orders") {
  const GaussRule& g1 = gauss_rule(1);
  CHECK(g1.nodes[0] == 0.0);
  CHECK(g1.weights[0] == 2.0);
  const GaussRule& g2 = gauss_rule(2);
  CHECK(g2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(g2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(g2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g2.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
  const GaussRule& g3 = gauss_rule(3);
  double x4 = 0.0;
  for (int k = 0; k < 3; ++k) x4 += g3.weights[k] * std::pow(g3.nodes[k], 4);
  CHECK(std::abs(x4 - 0.4) < 1e-15);
}

TEST_CASE("gauss_rule: exactness up to degree 2q-1 for every order") {
  for (int q = 1; q <= kMaxGaussOrder; ++q) {
    const GaussRule& g = gauss_rule(q);
    double wsum = 0.0;
    bool ok = true;
    for (int k = 0; k < q; ++k) {
      ok = ok && g.weights[k] > 0.0 && g.nodes[k] > -1.0 && g.nodes[k] < 1.0;
      if (k > 0) ok = ok && g.nodes[k] > g.nodes[k - 1];
      wsum += g.weights[k];
    }
    CHECK(ok);
    CHECK(std::abs(wsum - 2.0) < 1e-13);
    for (int d = 0; d <= 2 * q - 1; ++d) {
      double s = 0.0;
      for (int k = 0; k < q; ++k) s += g.weights[k] * std::pow(g.nodes[k], d);
      const double exact = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
      CHECK_MESSAGE(std::abs(s - exact) < 1e-13, "q=" << q << " degree " << d);
    }
  }
}

TEST_CASE("gauss_rule: out of range") {
  for (int q : {0, -1, kMaxGaussOrder + 1}) {
    try {
      gauss_rule(q);
      FAIL("expected Unsupported");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Unsupported);
    }
  }
}
