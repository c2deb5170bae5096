#pragma once

#include <vector>

namespace abem {

/// Gauss-Legendre rule on (-1, 1); exact for polynomials of degree 2q - 1.
struct GaussRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMaxGaussOrder = 32;

/// Cached rule for 1 <= q <= 32; throws Unsupported otherwise.
const GaussRule& gauss_rule(int q);

}  // namespace abem
