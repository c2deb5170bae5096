#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "abem/mesh.hpp"

namespace abem {

enum class SpaceFamily { P0, P1, S1, S1Zero };

/// Discrete space on a mesh: discontinuous piecewise polynomials P^p (p = 0, 1)
/// or continuous piecewise linears S^1, optionally with zero trace at the two
/// endpoints of an open curve.
struct SpaceTag {
  SpaceFamily family = SpaceFamily::P0;

  static SpaceTag piecewise(int p);
  static SpaceTag continuous(bool zero_trace) {
    return {zero_trace ? SpaceFamily::S1Zero : SpaceFamily::S1};
  }
  bool is_continuous() const { return family == SpaceFamily::S1 || family == SpaceFamily::S1Zero; }
  /// Polynomial degree per panel.
  int degree() const { return family == SpaceFamily::P0 ? 0 : 1; }

  friend bool operator==(SpaceTag, SpaceTag) = default;
};

/// Coefficient vector of a discrete function. Ordering: panel-major
/// (c0, c1 per panel) for P^p, vertex order for S^1, interior vertices in
/// order for S^1 with zero trace.
struct DensityFunction {
  SpaceTag space;
  std::uint64_t mesh_id = 0;
  Eigen::VectorXd coeffs;
};

/// Polynomial c0 + c1 * t in the panel's reference coordinate t in [-1, 1].
struct LocalPoly {
  double c0 = 0.0;
  double c1 = 0.0;
  double operator()(double t) const { return c0 + c1 * t; }
};

using ScalarField = std::function<double(const Point&)>;

std::size_t dimension(const Mesh& mesh, SpaceTag space);
DensityFunction make_function(const Mesh& mesh, SpaceTag space, Eigen::VectorXd coeffs);
DensityFunction zero_function(const Mesh& mesh, SpaceTag space);

/// Global S^1 dof of a vertex, or nullopt when the vertex carries none.
std::optional<std::size_t> s1_dof(const Mesh& mesh, std::size_t vertex, bool zero_trace);

/// Throws SpaceMismatch unless `f` lives on `mesh` with the right length.
void check_on_mesh(const Mesh& mesh, const DensityFunction& f);

LocalPoly local_polynomial(const Mesh& mesh, const DensityFunction& f, std::size_t panel);
std::vector<LocalPoly> local_polynomials(const Mesh& mesh, const DensityFunction& f);

/// Arclength derivative along the panel orientation, as a P^{p-1} function
/// (P^0 for S^1 or P^1 input).
DensityFunction arclength_derivative(const Mesh& mesh, const DensityFunction& f);

/// Value on `panel` at the point x (which must lie on that panel).
double evaluate(const Mesh& mesh, const DensityFunction& f, std::size_t panel, const Point& x);
/// Value at x; at shared vertices the lowest-id panel containing x is used.
double evaluate(const Mesh& mesh, const DensityFunction& f, const Point& x);

/// Reference coordinate of x on the panel, or nullopt if x is off the panel.
std::optional<double> locate_on_panel(const Mesh& mesh, std::size_t panel, const Point& x);

/// Mass matrix of {1, t} on (-1, 1): diag(2, 2/3), top-left block for p = 0.
Eigen::MatrixXd reference_mass_matrix(int p);
/// |T| / |T_ref| times the reference mass matrix.
Eigen::MatrixXd local_mass_matrix(const Mesh& mesh, std::size_t panel, int p);

/// Elementwise L2-orthogonal projection onto P^p, q-point Gauss moments.
DensityFunction l2_project_pw(const ScalarField& g, const Mesh& mesh, int p, int q = 4);

/// Coefficients A of the L2-dual basis to the nodal basis of P^1(T).
Eigen::Matrix2d scott_zhang_dual_matrix(const Mesh& mesh, std::size_t panel);

/// Element used for the Scott-Zhang functional of a vertex: the lowest panel
/// id containing it.
std::size_t scott_zhang_element(const Mesh& mesh, std::size_t vertex);

DensityFunction scott_zhang(const ScalarField& g, const Mesh& mesh, bool zero_trace, int q = 4);

/// Restriction of an S^1 function on uniform_refine(coarse) to S^1(coarse) by
/// evaluation at the coarse vertices.
DensityFunction nodal_interpolate(const Mesh& fine, const DensityFunction& gfine, const Mesh& coarse);

/// Piecewise-polynomial function on `fine` (a refinement of `coarse`) equal to
/// `f`. Used to compare coarse and fine solutions in the fine basis.
DensityFunction prolongate(const Mesh& coarse, const DensityFunction& f, const Mesh& fine);

/// Sparse matrix R with R * c = coefficients on `fine` of the coarse function
/// with coefficients c (fine must be a direct refinement of coarse).
Eigen::SparseMatrix<double> prolongation_matrix(const Mesh& coarse, SpaceTag space, const Mesh& fine);

}  // namespace abem
