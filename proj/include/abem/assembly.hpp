#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "abem/mesh.hpp"
#include "abem/spaces.hpp"

namespace abem {

enum class Problem { WeaklySingular, Hypersingular };

struct GalerkinSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  SpaceTag space;
  std::uint64_t mesh_id = 0;
  /// Hypersingular operator on a closed curve with the rank-one term added.
  bool stabilized = false;
};

struct EnergyReport {
  double energy_of_solution = 0.0;
  std::optional<double> exact_energy;
  std::optional<double> energy_error;
};

/// Single layer Galerkin matrix on P^p, p in {0, 1}.
Eigen::MatrixXd assemble_V(const Mesh& mesh, int p);

/// Hypersingular Galerkin matrix on S^1 via <W u, v> = <V u', v'>. Open curves
/// need zero_trace; closed curves get the rank-one term <u,1><v,1> when
/// `stabilize` is set.
Eigen::MatrixXd assemble_W(const Mesh& mesh, bool zero_trace, bool stabilize = true);

/// Matrix mapping S^1 coefficients to the P^0 coefficients of the arclength
/// derivative.
Eigen::SparseMatrix<double> derivative_matrix(const Mesh& mesh, bool zero_trace);

/// Load vector <f, psi_i>; Gauss order defaults to degree + 4.
Eigen::VectorXd assemble_rhs(const Mesh& mesh, SpaceTag space, const ScalarField& f, int q = 0);

GalerkinSystem assemble_weaksing(const Mesh& mesh, int p, const ScalarField& f);
/// S^1 with zero trace on open curves, stabilized S^1 on closed curves.
GalerkinSystem assemble_hypsing(const Mesh& mesh, const ScalarField& phi);
GalerkinSystem assemble(const Mesh& mesh, Problem problem, int p, const ScalarField& data);

/// Dense Cholesky solve; throws NotPositiveDefinite.
DensityFunction solve(const GalerkinSystem& sys);

/// ||A x - b||_inf / ||b||_inf (0 when b = 0 and x solves).
double relative_residual(const GalerkinSystem& sys, const DensityFunction& u);

/// x^T A x, and sqrt(exact - x^T A x) when the exact energy is known.
EnergyReport energy(const GalerkinSystem& sys, const DensityFunction& u,
                    std::optional<double> exact_energy = std::nullopt);

}  // namespace abem
