#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "abem/assembly.hpp"
#include "abem/mesh.hpp"
#include "abem/spaces.hpp"

namespace abem {

struct IndicatorSet {
  std::uint64_t mesh_id = 0;
  std::vector<double> values;  // one per panel
  double total = 0.0;          // sqrt(sum values^2)
};

IndicatorSet make_indicators(const Mesh& mesh, std::vector<double> values);
/// Indicators from squared values.
IndicatorSet indicators_from_squares(const Mesh& mesh, const std::vector<double>& squares);

enum class EstimatorFamily { HH2, TwoLevel, ZZ, WRes };
enum class HH2Variant { Eta, Mu, EtaTilde, MuTilde };

struct EstimatorChoice {
  EstimatorFamily family = EstimatorFamily::HH2;
  HH2Variant variant = HH2Variant::MuTilde;
  Problem problem = Problem::WeaklySingular;
  int q = 0;  // weighted residual quadrature; 0 picks the default

  /// Needs the Galerkin solution on the uniform refinement.
  bool needs_fine_solution() const { return family == EstimatorFamily::HH2; }
  /// Needs the Galerkin solution on the current mesh.
  bool needs_coarse_solution() const {
    return family != EstimatorFamily::HH2 || variant == HH2Variant::Mu || variant == HH2Variant::Eta;
  }
  /// Throws Unsupported for combinations outside the implemented scope.
  void validate() const;
};

/// Parses hh2-mu-tilde, hh2-mu, hh2-eta, hh2-eta-tilde, twolevel, zz, wres.
EstimatorChoice parse_estimator(const std::string& name, Problem problem);
std::string estimator_name(const EstimatorChoice& choice);

/// (h - h/2) indicators for V phi = f on P^p. `fine` is uniform_refine(coarse)
/// and `phi_hat` the fine Galerkin solution. Mu and Eta need the coarse
/// Galerkin solution. Eta and EtaTilde are the energy norms of the error
/// function restricted to the two sons of each panel.
IndicatorSet hh2_weaksing(const Mesh& coarse, const Mesh& fine, const DensityFunction& phi_hat, int p,
                          HH2Variant variant, const DensityFunction* phi_coarse = nullptr);

/// (h - h/2) indicators for W u = phi on S^1.
IndicatorSet hh2_hypsing(const Mesh& coarse, const Mesh& fine, const DensityFunction& u_hat,
                         HH2Variant variant, const DensityFunction* u_coarse = nullptr);

/// Coarse-space approximation of a fine function used by the tilde variants:
/// the elementwise L2 projection (P^p) or the nodal interpolant (S^1).
DensityFunction hh2_coarse_approximation(const Mesh& coarse, const Mesh& fine,
                                         const DensityFunction& fine_function);

/// Global energy norm ||fine_function - coarse_function||, measured with the
/// fine Galerkin matrix. With the coarse Galerkin solution this is eta, with
/// hh2_coarse_approximation(fine_function) it is eta-tilde.
double hh2_global(const Mesh& coarse, const Mesh& fine, const Eigen::MatrixXd& fine_matrix,
                  const DensityFunction& fine_function, const DensityFunction& coarse_function);

/// Two-level indicators for V phi = f on P^0, no fine solve:
/// |<f - V Phi, Psi_T>| / ||Psi_T||_V with Psi_T = -1, +1 on the sons of T.
IndicatorSet twolevel_weaksing(const Mesh& coarse, const DensityFunction& phi, const ScalarField& f);

/// Averaging indicators h_T ||(1 - A) g||^2 with g = Phi (P^0, averages split
/// at corners) or g = grad U (S^1).
IndicatorSet zz(const Mesh& mesh, const DensityFunction& sol, Problem problem);

/// Lagrange derivative matrix for the interpolation nodes (2q-point Gauss
/// nodes and 0), evaluated at the 2q Gauss nodes.
Eigen::MatrixXd wres_derivative_matrix(int q);

/// Weighted residual indicators: h_T ||d/ds (f - V Phi)||^2 on T for the
/// weakly singular problem, h_T ||phi - W U||^2 on T for the hypersingular
/// one. q <= 0 picks the default (p + 1, or 3 for the hypersingular case).
IndicatorSet wres(const Mesh& mesh, const DensityFunction& sol, const ScalarField& data, Problem problem,
                  int q = 0);

}  // namespace abem
