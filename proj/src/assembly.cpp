#include "abem/assembly.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>

#include "abem/error.hpp"
#include "abem/kernel.hpp"
#include "abem/quadrature.hpp"

namespace abem {

Eigen::MatrixXd assemble_V(const Mesh& mesh, int p) {
  if (p < 0 || p > 1) fail(ErrorKind::Unsupported, "only p = 0 and p = 1 are supported");
  const std::size_t n = mesh.num_panels();
  const Eigen::Index k = p + 1;
  Eigen::MatrixXd a(n * k, n * k);
  std::vector<Segment> segs;
  segs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) segs.push_back(panel_segment(mesh, i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Eigen::Matrix2d b = slp_galerkin_block(segs[i], segs[j]);
      a.block(i * k, j * k, k, k) = b.topLeftCorner(k, k);
      a.block(j * k, i * k, k, k) = b.topLeftCorner(k, k).transpose();
    }
  }
  return a;
}

Eigen::SparseMatrix<double> derivative_matrix(const Mesh& mesh, bool zero_trace) {
  const SpaceTag space = SpaceTag::continuous(zero_trace);
  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t i = 0; i < mesh.num_panels(); ++i) {
    const double h = mesh.length(i);
    if (const auto s = s1_dof(mesh, mesh.panels()[i].first, zero_trace)) entries.emplace_back(i, *s, -1.0 / h);
    if (const auto e = s1_dof(mesh, mesh.panels()[i].second, zero_trace)) entries.emplace_back(i, *e, 1.0 / h);
  }
  Eigen::SparseMatrix<double> d(mesh.num_panels(), dimension(mesh, space));
  d.setFromTriplets(entries.begin(), entries.end());
  return d;
}

Eigen::MatrixXd assemble_W(const Mesh& mesh, bool zero_trace, bool stabilize) {
  if (mesh.closed() && zero_trace) fail(ErrorKind::InvalidSpace, "zero trace on a closed curve");
  if (!mesh.closed() && !zero_trace)
    fail(ErrorKind::InvalidSpace, "hypersingular problem on an open curve needs zero trace");
  const Eigen::SparseMatrix<double> d = derivative_matrix(mesh, zero_trace);
  const Eigen::MatrixXd vd = assemble_V(mesh, 0) * d;
  Eigen::MatrixXd w = d.transpose() * vd;
  w = 0.5 * (w + w.transpose()).eval();
  if (mesh.closed() && stabilize) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(w.rows());
    for (std::size_t i = 0; i < mesh.num_panels(); ++i) {
      const double half = 0.5 * mesh.length(i);
      m(*s1_dof(mesh, mesh.panels()[i].first, false)) += half;
      m(*s1_dof(mesh, mesh.panels()[i].second, false)) += half;
    }
    w += m * m.transpose();
  }
  return w;
}

Eigen::VectorXd assemble_rhs(const Mesh& mesh, SpaceTag space, const ScalarField& f, int q) {
  if (q <= 0) q = space.degree() + 4;
  const GaussRule& rule = gauss_rule(q);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dimension(mesh, space));
  const bool zero_trace = space.family == SpaceFamily::S1Zero;
  for (std::size_t i = 0; i < mesh.num_panels(); ++i) {
    double m0 = 0.0, m1 = 0.0;
    for (int k = 0; k < q; ++k) {
      const double v = rule.weights[k] * f(mesh.map(i, rule.nodes[k]));
      m0 += v;
      m1 += v * rule.nodes[k];
    }
    const double half = 0.5 * mesh.length(i);
    m0 *= half;
    m1 *= half;
    switch (space.family) {
      case SpaceFamily::P0:
        b(i) = m0;
        break;
      case SpaceFamily::P1:
        b(2 * i) = m0;
        b(2 * i + 1) = m1;
        break;
      case SpaceFamily::S1:
      case SpaceFamily::S1Zero:
        // hats (1 - t)/2 and (1 + t)/2
        if (const auto s = s1_dof(mesh, mesh.panels()[i].first, zero_trace)) b(*s) += 0.5 * (m0 - m1);
        if (const auto e = s1_dof(mesh, mesh.panels()[i].second, zero_trace)) b(*e) += 0.5 * (m0 + m1);
        break;
    }
  }
  return b;
}

GalerkinSystem assemble_weaksing(const Mesh& mesh, int p, const ScalarField& f) {
  const SpaceTag space = SpaceTag::piecewise(p);
  return {assemble_V(mesh, p), assemble_rhs(mesh, space, f), space, mesh.id(), false};
}

GalerkinSystem assemble_hypsing(const Mesh& mesh, const ScalarField& phi) {
  const bool zero_trace = !mesh.closed();
  const SpaceTag space = SpaceTag::continuous(zero_trace);
  return {assemble_W(mesh, zero_trace, true), assemble_rhs(mesh, space, phi), space, mesh.id(),
          mesh.closed()};
}

GalerkinSystem assemble(const Mesh& mesh, Problem problem, int p, const ScalarField& data) {
  if (problem == Problem::WeaklySingular) return assemble_weaksing(mesh, p, data);
  if (p != 1) fail(ErrorKind::Unsupported, "the hypersingular problem uses continuous piecewise linears");
  return assemble_hypsing(mesh, data);
}

DensityFunction solve(const GalerkinSystem& sys) {
  if (sys.matrix.rows() != sys.rhs.size() || sys.matrix.cols() != sys.rhs.size())
    fail(ErrorKind::InvalidArgument, "matrix and right-hand side sizes differ");
  Eigen::LLT<Eigen::MatrixXd> llt(sys.matrix);
  if (llt.info() != Eigen::Success)
    fail(ErrorKind::NotPositiveDefinite, "Cholesky factorization failed (is the capacity of the curve below 1?)");
  return {sys.space, sys.mesh_id, llt.solve(sys.rhs)};
}

double relative_residual(const GalerkinSystem& sys, const DensityFunction& u) {
  if (u.mesh_id != sys.mesh_id || u.coeffs.size() != sys.rhs.size())
    fail(ErrorKind::SpaceMismatch, "solution does not belong to this system");
  const double r = (sys.matrix * u.coeffs - sys.rhs).lpNorm<Eigen::Infinity>();
  const double b = sys.rhs.lpNorm<Eigen::Infinity>();
  return b > 0.0 ? r / b : r;
}

EnergyReport energy(const GalerkinSystem& sys, const DensityFunction& u, std::optional<double> exact_energy) {
  if (u.mesh_id != sys.mesh_id || u.coeffs.size() != sys.rhs.size())
    fail(ErrorKind::SpaceMismatch, "solution does not belong to this system");
  EnergyReport r;
  r.energy_of_solution = std::max(0.0, u.coeffs.dot(sys.matrix * u.coeffs));
  if (exact_energy) {
    const double gap = *exact_energy - r.energy_of_solution;
    if (gap < -1e-8)
      fail(ErrorKind::InconsistentExactEnergy, "exact energy is below the discrete energy");
    r.exact_energy = exact_energy;
    r.energy_error = std::sqrt(std::max(0.0, gap));
  }
  return r;
}

}  // namespace abem
