#include "abem/spaces.hpp"

#include <cmath>
#include <string>

#include "abem/error.hpp"
#include "abem/quadrature.hpp"

namespace abem {
namespace {

// Reference coordinate of the orthogonal projection of x onto the panel line.
double reference_coordinate(const Mesh& mesh, std::size_t panel, const Point& x) {
  const Point a = mesh.start(panel);
  const Point d = mesh.end(panel) - a;
  return 2.0 * (x - a).dot(d) / d.squaredNorm() - 1.0;
}

}  // namespace

SpaceTag SpaceTag::piecewise(int p) {
  if (p == 0) return {SpaceFamily::P0};
  if (p == 1) return {SpaceFamily::P1};
  fail(ErrorKind::Unsupported, "piecewise polynomial degree " + std::to_string(p));
}

std::size_t dimension(const Mesh& mesh, SpaceTag space) {
  switch (space.family) {
    case SpaceFamily::P0: return mesh.num_panels();
    case SpaceFamily::P1: return 2 * mesh.num_panels();
    case SpaceFamily::S1: return mesh.num_vertices();
    case SpaceFamily::S1Zero:
      if (mesh.closed()) fail(ErrorKind::InvalidSpace, "zero trace requires an open curve");
      return mesh.num_vertices() - 2;
  }
  return 0;
}

DensityFunction make_function(const Mesh& mesh, SpaceTag space, Eigen::VectorXd coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != dimension(mesh, space))
    fail(ErrorKind::SpaceMismatch, "coefficient count does not match the space dimension");
  return DensityFunction{space, mesh.id(), std::move(coeffs)};
}

DensityFunction zero_function(const Mesh& mesh, SpaceTag space) {
  return make_function(mesh, space, Eigen::VectorXd::Zero(dimension(mesh, space)));
}

std::optional<std::size_t> s1_dof(const Mesh& mesh, std::size_t vertex, bool zero_trace) {
  if (!zero_trace) return vertex;
  if (mesh.is_boundary_vertex(vertex)) return std::nullopt;
  return vertex - 1;
}

void check_on_mesh(const Mesh& mesh, const DensityFunction& f) {
  if (f.mesh_id != mesh.id()) fail(ErrorKind::SpaceMismatch, "function lives on another mesh");
  if (static_cast<std::size_t>(f.coeffs.size()) != dimension(mesh, f.space))
    fail(ErrorKind::SpaceMismatch, "coefficient count does not match the space dimension");
}

LocalPoly local_polynomial(const Mesh& mesh, const DensityFunction& f, std::size_t panel) {
  switch (f.space.family) {
    case SpaceFamily::P0: return {f.coeffs[panel], 0.0};
    case SpaceFamily::P1: return {f.coeffs[2 * panel], f.coeffs[2 * panel + 1]};
    case SpaceFamily::S1:
    case SpaceFamily::S1Zero: {
      const bool zt = f.space.family == SpaceFamily::S1Zero;
      const auto dl = s1_dof(mesh, mesh.panels()[panel].first, zt);
      const auto dr = s1_dof(mesh, mesh.panels()[panel].second, zt);
      const double ul = dl ? f.coeffs[*dl] : 0.0;
      const double ur = dr ? f.coeffs[*dr] : 0.0;
      return {0.5 * (ul + ur), 0.5 * (ur - ul)};
    }
  }
  return {};
}

std::vector<LocalPoly> local_polynomials(const Mesh& mesh, const DensityFunction& f) {
  check_on_mesh(mesh, f);
  std::vector<LocalPoly> out(mesh.num_panels());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = local_polynomial(mesh, f, i);
  return out;
}

DensityFunction arclength_derivative(const Mesh& mesh, const DensityFunction& f) {
  check_on_mesh(mesh, f);
  if (f.space.family == SpaceFamily::P0)
    fail(ErrorKind::SpaceMismatch, "derivative of a piecewise constant is not a function");
  Eigen::VectorXd d(mesh.num_panels());
  for (std::size_t i = 0; i < mesh.num_panels(); ++i)
    d[i] = 2.0 * local_polynomial(mesh, f, i).c1 / mesh.length(i);
  return DensityFunction{SpaceTag{SpaceFamily::P0}, mesh.id(), std::move(d)};
}

std::optional<double> locate_on_panel(const Mesh& mesh, std::size_t panel, const Point& x) {
  const double t = reference_coordinate(mesh, panel, x);
  constexpr double tol = 1e-12;
  if (t < -1.0 - tol || t > 1.0 + tol) return std::nullopt;
  if ((mesh.map(panel, t) - x).norm() > tol * mesh.length(panel)) return std::nullopt;
  return std::clamp(t, -1.0, 1.0);
}

double evaluate(const Mesh& mesh, const DensityFunction& f, std::size_t panel, const Point& x) {
  check_on_mesh(mesh, f);
  if (panel >= mesh.num_panels()) fail(ErrorKind::InvalidArgument, "panel id out of range");
  const auto t = locate_on_panel(mesh, panel, x);
  if (!t) fail(ErrorKind::OffCurve, "point is not on the given panel");
  return local_polynomial(mesh, f, panel)(*t);
}

double evaluate(const Mesh& mesh, const DensityFunction& f, const Point& x) {
  check_on_mesh(mesh, f);
  for (std::size_t i = 0; i < mesh.num_panels(); ++i)
    if (const auto t = locate_on_panel(mesh, i, x)) return local_polynomial(mesh, f, i)(*t);
  fail(ErrorKind::OffCurve, "point is not on the curve");
}

Eigen::MatrixXd reference_mass_matrix(int p) {
  if (p == 0) return Eigen::MatrixXd::Constant(1, 1, 2.0);
  if (p == 1) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 2.0 / 3.0;
    return m;
  }
  fail(ErrorKind::Unsupported, "mass matrix for degree " + std::to_string(p));
}

Eigen::MatrixXd local_mass_matrix(const Mesh& mesh, std::size_t panel, int p) {
  return 0.5 * mesh.length(panel) * reference_mass_matrix(p);
}

DensityFunction l2_project_pw(const ScalarField& g, const Mesh& mesh, int p, int q) {
  const SpaceTag space = SpaceTag::piecewise(p);
  const GaussRule& rule = gauss_rule(q);
  Eigen::VectorXd coeffs(dimension(mesh, space));
  for (std::size_t i = 0; i < mesh.num_panels(); ++i) {
    // The reference basis {1, t} is orthogonal, so M_T x_T = g_T decouples.
    double m0 = 0.0, m1 = 0.0;
    for (int k = 0; k < rule.order; ++k) {
      const double t = rule.nodes[k];
      const double gv = g(mesh.map(i, t));
      m0 += rule.weights[k] * gv;
      m1 += rule.weights[k] * gv * t;
    }
    if (p == 0) {
      coeffs[i] = m0 / 2.0;
    } else {
      coeffs[2 * i] = m0 / 2.0;
      coeffs[2 * i + 1] = m1 * 1.5;
    }
  }
  return DensityFunction{space, mesh.id(), std::move(coeffs)};
}

Eigen::Matrix2d scott_zhang_dual_matrix(const Mesh& mesh, std::size_t panel) {
  // Inverse of the nodal mass matrix |T|/6 (2 1; 1 2).
  Eigen::Matrix2d a;
  a << 4.0, -2.0, -2.0, 4.0;
  return a / mesh.length(panel);
}

std::size_t scott_zhang_element(const Mesh& mesh, std::size_t vertex) {
  if (vertex >= mesh.num_vertices()) fail(ErrorKind::InvalidArgument, "vertex id out of range");
  if (vertex == 0) return 0;
  return vertex - 1;
}

DensityFunction scott_zhang(const ScalarField& g, const Mesh& mesh, bool zero_trace, int q) {
  const SpaceTag space = SpaceTag::continuous(zero_trace);
  const GaussRule& rule = gauss_rule(q);
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(dimension(mesh, space));
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const auto dof = s1_dof(mesh, v, zero_trace);
    if (!dof) continue;
    const std::size_t t = scott_zhang_element(mesh, v);
    const Eigen::Matrix2d a = scott_zhang_dual_matrix(mesh, t);
    const int k = mesh.panels()[t].first == v ? 0 : 1;
    // psi = A(k,0) phi_start + A(k,1) phi_end, integrated against g.
    double integral = 0.0;
    for (int j = 0; j < rule.order; ++j) {
      const double s = rule.nodes[j];
      const double phi_start = 0.5 * (1.0 - s);
      const double phi_end = 0.5 * (1.0 + s);
      const double psi = a(k, 0) * phi_start + a(k, 1) * phi_end;
      integral += rule.weights[j] * psi * g(mesh.map(t, s));
    }
    coeffs[*dof] = 0.5 * mesh.length(t) * integral;
  }
  return DensityFunction{space, mesh.id(), std::move(coeffs)};
}

DensityFunction nodal_interpolate(const Mesh& fine, const DensityFunction& gfine, const Mesh& coarse) {
  check_on_mesh(fine, gfine);
  if (!gfine.space.is_continuous()) fail(ErrorKind::SpaceMismatch, "nodal interpolation needs S^1 input");
  if (fine.parent_id() != coarse.id() || fine.num_panels() != 2 * coarse.num_panels())
    fail(ErrorKind::SpaceMismatch, "fine mesh is not the uniform refinement of the coarse mesh");
  const bool zt = gfine.space.family == SpaceFamily::S1Zero;
  const SpaceTag space = gfine.space;
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(dimension(coarse, space));
  for (std::size_t v = 0; v < coarse.num_vertices(); ++v) {
    const auto cd = s1_dof(coarse, v, zt);
    if (!cd) continue;
    // Coarse vertex v is fine vertex 2v in chain order.
    const auto fd = s1_dof(fine, 2 * v, zt);
    coeffs[*cd] = fd ? gfine.coeffs[*fd] : 0.0;
  }
  return DensityFunction{space, coarse.id(), std::move(coeffs)};
}

DensityFunction prolongate(const Mesh& coarse, const DensityFunction& f, const Mesh& fine) {
  check_on_mesh(coarse, f);
  if (fine.parent_id() != coarse.id())
    fail(ErrorKind::SpaceMismatch, "prolongation needs a direct refinement of the mesh");
  const SpaceTag space = f.space;
  Eigen::VectorXd out(dimension(fine, space));
  if (space.is_continuous()) {
    const bool zt = space.family == SpaceFamily::S1Zero;
    out.setZero();
    for (std::size_t v = 0; v < fine.num_vertices(); ++v) {
      const auto dof = s1_dof(fine, v, zt);
      if (!dof) continue;
      // Vertex v starts fine panel v (or ends the last one of an open curve).
      const std::size_t panel = v < fine.num_panels() ? v : fine.num_panels() - 1;
      const std::size_t father = *fine.panels()[panel].father;
      const double t = reference_coordinate(coarse, father, fine.vertices()[v]);
      out[*dof] = local_polynomial(coarse, f, father)(t);
    }
  } else {
    for (std::size_t i = 0; i < fine.num_panels(); ++i) {
      const std::size_t father = *fine.panels()[i].father;
      const LocalPoly c = local_polynomial(coarse, f, father);
      const double t0 = reference_coordinate(coarse, father, fine.start(i));
      const double t1 = reference_coordinate(coarse, father, fine.end(i));
      if (space.family == SpaceFamily::P0) {
        out[i] = c.c0;
      } else {
        out[2 * i] = c.c0 + c.c1 * 0.5 * (t0 + t1);
        out[2 * i + 1] = c.c1 * 0.5 * (t1 - t0);
      }
    }
  }
  return DensityFunction{space, fine.id(), std::move(out)};
}

Eigen::SparseMatrix<double> prolongation_matrix(const Mesh& coarse, SpaceTag space, const Mesh& fine) {
  if (fine.parent_id() != coarse.id())
    fail(ErrorKind::SpaceMismatch, "prolongation needs a direct refinement of the mesh");
  std::vector<Eigen::Triplet<double>> entries;
  if (space.is_continuous()) {
    const bool zt = space.family == SpaceFamily::S1Zero;
    for (std::size_t v = 0; v < fine.num_vertices(); ++v) {
      const auto dof = s1_dof(fine, v, zt);
      if (!dof) continue;
      const std::size_t panel = v < fine.num_panels() ? v : fine.num_panels() - 1;
      const std::size_t father = *fine.panels()[panel].father;
      const double t = reference_coordinate(coarse, father, fine.vertices()[v]);
      const Panel& f = coarse.panels()[father];
      const double wl = 0.5 * (1.0 - t), wr = 0.5 * (1.0 + t);
      if (const auto d = s1_dof(coarse, f.first, zt); d && wl != 0.0) entries.emplace_back(*dof, *d, wl);
      if (const auto d = s1_dof(coarse, f.second, zt); d && wr != 0.0) entries.emplace_back(*dof, *d, wr);
    }
  } else {
    for (std::size_t i = 0; i < fine.num_panels(); ++i) {
      const std::size_t father = *fine.panels()[i].father;
      if (space.family == SpaceFamily::P0) {
        entries.emplace_back(i, father, 1.0);
        continue;
      }
      const double t0 = reference_coordinate(coarse, father, fine.start(i));
      const double t1 = reference_coordinate(coarse, father, fine.end(i));
      entries.emplace_back(2 * i, 2 * father, 1.0);
      if (t0 + t1 != 0.0) entries.emplace_back(2 * i, 2 * father + 1, 0.5 * (t0 + t1));
      entries.emplace_back(2 * i + 1, 2 * father + 1, 0.5 * (t1 - t0));
    }
  }
  Eigen::SparseMatrix<double> r(dimension(fine, space), dimension(coarse, space));
  r.setFromTriplets(entries.begin(), entries.end());
  return r;
}

}  // namespace abem
