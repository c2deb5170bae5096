#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "abem/mesh.hpp"
#include "abem/spaces.hpp"

namespace abem {

/// Straight segment from a to b; reference coordinate t in [-1, 1].
struct Segment {
  Point a;
  Point b;

  double length() const { return (b - a).norm(); }
  Point map(double t) const { return 0.5 * (1.0 - t) * a + 0.5 * (1.0 + t) * b; }
};

Segment panel_segment(const Mesh& mesh, std::size_t panel);

enum class PanelRelation { Identical, Adjacent, Disjoint };

/// Identical if both endpoints coincide, adjacent if exactly one does.
PanelRelation classify(const Segment& s, const Segment& t);

double point_segment_distance(const Point& x, const Segment& s);
double segment_distance(const Segment& s, const Segment& t);

/// Moments of the log kernel over a segment against its local basis {1, t}:
/// m0 = int_T log|x - y| dy,  m1 = int_T log|x - y| t(y) dy  (closed form).
struct Moments {
  double m0 = 0.0;
  double m1 = 0.0;
};

Moments log_moments(const Point& x, const Segment& seg);

/// Moments of (x - y).dir / |x - y|^2 against {1, t}; Cauchy principal value
/// when x lies inside the segment. Throws SingularPoint at segment endpoints.
Moments log_gradient_moments(const Point& x, const Point& dir, const Segment& seg);

/// Galerkin block  -1/(2 pi) int_T int_T' log|x - y| psi_j(y) psi_i(x)
/// for the local basis {1, t} on both panels (row i: test panel T, column j:
/// trial panel T'). The p = 0 entry is the (0, 0) element. The result is
/// computed in a canonical panel order, so block(T, T') == block(T', T)^T
/// bitwise.
Eigen::Matrix2d slp_galerkin_block(const Segment& test, const Segment& trial);

double slp_galerkin_entry(const Segment& test, const Segment& trial, int i, int j, int p);

/// Single layer potential (V rho)(x) of a discrete density.
double slp_eval(const Mesh& mesh, const DensityFunction& rho, const Point& x);

/// Arclength derivative of V rho at x inside `panel`, along the panel
/// orientation.
double slp_tangential_derivative(const Mesh& mesh, const DensityFunction& rho, std::size_t panel,
                                 const Point& x);

}  // namespace abem
