#include "abem/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "abem/error.hpp"

namespace abem {
namespace {

GaussRule compute_rule(int q) {
  GaussRule rule;
  rule.order = q;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  for (int i = 0; i < (q + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_q.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (q == 1) p0 = 1.0;
      const double pq = q == 1 ? x : p1;
      dp = q * (x * pq - p0) / (x * x - 1.0);
      const double dx = pq / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = q == 1 ? 1.0 : q * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[q - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[q - 1 - i] = w;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_rule(int q) {
  static const std::array<GaussRule, kMaxGaussOrder> rules = [] {
    std::array<GaussRule, kMaxGaussOrder> r;
    for (int k = 1; k <= kMaxGaussOrder; ++k) r[k - 1] = compute_rule(k);
    return r;
  }();
  if (q < 1 || q > kMaxGaussOrder)
    fail(ErrorKind::Unsupported, "Gauss order " + std::to_string(q) + " outside [1, 32]");
  return rules[q - 1];
}

}  // namespace abem
