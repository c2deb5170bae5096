#include "abem/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "abem/error.hpp"
#include "abem/kernel.hpp"
#include "abem/quadrature.hpp"

namespace abem {
namespace {

void check_uniform_refinement(const Mesh& coarse, const Mesh& fine) {
  if (fine.parent_id() != coarse.id() || fine.num_panels() != 2 * coarse.num_panels())
    fail(ErrorKind::SpaceMismatch, "fine mesh is not the uniform refinement of the coarse mesh");
  for (std::size_t i = 0; i < coarse.num_panels(); ++i) {
    const Panel& a = fine.panels()[2 * i];
    const Panel& b = fine.panels()[2 * i + 1];
    if (a.father != i || b.father != i || a.generation != coarse.panels()[i].generation + 1)
      fail(ErrorKind::SpaceMismatch, "fine mesh is not the uniform refinement of the coarse mesh");
  }
}

// Restriction of c0 + c1 t on a panel to its first (k = 0) or second son, in
// the son's reference coordinate.
LocalPoly restrict_to_son(const LocalPoly& c, int k) {
  const double shift = k == 0 ? -0.5 * c.c1 : 0.5 * c.c1;
  return {c.c0 + shift, 0.5 * c.c1};
}

// L2 projection of the son polynomials onto P^p of the father.
LocalPoly project_sons(const LocalPoly& s0, const LocalPoly& s1, int p) {
  LocalPoly c{0.5 * (s0.c0 + s1.c0), 0.0};
  if (p == 1) c.c1 = 0.25 * (s0.c1 + s1.c1) + 0.75 * (s1.c0 - s0.c0);
  return c;
}

// Gram matrix of {1, t} on both sons in the V inner product (k x k blocks).
Eigen::MatrixXd sons_gram(const Mesh& fine, std::size_t i, int k) {
  const Segment s[2] = {panel_segment(fine, 2 * i), panel_segment(fine, 2 * i + 1)};
  Eigen::MatrixXd g(2 * k, 2 * k);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) g.block(a * k, b * k, k, k) = slp_galerkin_block(s[a], s[b]).topLeftCorner(k, k);
  return 0.5 * (g + g.transpose());
}

bool is_tilde(HH2Variant v) { return v == HH2Variant::EtaTilde || v == HH2Variant::MuTilde; }
bool is_energy(HH2Variant v) { return v == HH2Variant::Eta || v == HH2Variant::EtaTilde; }

double vertex_value(const Mesh& mesh, const DensityFunction& u, std::size_t v) {
  const auto dof = s1_dof(mesh, v, u.space.family == SpaceFamily::S1Zero);
  return dof ? u.coeffs[static_cast<Eigen::Index>(*dof)] : 0.0;
}

// Barycentric weights of the nodes.
std::vector<double> barycentric_weights(const std::vector<double>& z) {
  std::vector<double> w(z.size(), 1.0);
  for (std::size_t k = 0; k < z.size(); ++k)
    for (std::size_t m = 0; m < z.size(); ++m)
      if (m != k) w[k] /= z[k] - z[m];
  return w;
}

}  // namespace

IndicatorSet make_indicators(const Mesh& mesh, std::vector<double> values) {
  if (values.size() != mesh.num_panels()) fail(ErrorKind::SpaceMismatch, "one indicator per panel expected");
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) fail(ErrorKind::InvalidArgument, "indicators must be finite and nonnegative");
    sum += v * v;
  }
  return {mesh.id(), std::move(values), std::sqrt(sum)};
}

IndicatorSet indicators_from_squares(const Mesh& mesh, const std::vector<double>& squares) {
  std::vector<double> v(squares.size());
  std::transform(squares.begin(), squares.end(), v.begin(), [](double s) { return std::sqrt(std::max(0.0, s)); });
  return make_indicators(mesh, std::move(v));
}

void EstimatorChoice::validate() const {
  if (family == EstimatorFamily::TwoLevel && problem != Problem::WeaklySingular)
    fail(ErrorKind::Unsupported, "the two-level estimator is implemented for the weakly singular problem only");
  if (q < 0 || q > 16) fail(ErrorKind::Unsupported, "weighted residual quadrature order must be in 1..16");
}

EstimatorChoice parse_estimator(const std::string& name, Problem problem) {
  EstimatorChoice c;
  c.problem = problem;
  if (name == "hh2-mu-tilde") {
    c.variant = HH2Variant::MuTilde;
  } else if (name == "hh2-mu") {
    c.variant = HH2Variant::Mu;
  } else if (name == "hh2-eta") {
    c.variant = HH2Variant::Eta;
  } else if (name == "hh2-eta-tilde") {
    c.variant = HH2Variant::EtaTilde;
  } else if (name == "twolevel") {
    c.family = EstimatorFamily::TwoLevel;
  } else if (name == "zz") {
    c.family = EstimatorFamily::ZZ;
  } else if (name == "wres") {
    c.family = EstimatorFamily::WRes;
  } else {
    fail(ErrorKind::InvalidArgument, "unknown estimator '" + name + "'");
  }
  c.validate();
  return c;
}

std::string estimator_name(const EstimatorChoice& c) {
  switch (c.family) {
    case EstimatorFamily::TwoLevel: return "twolevel";
    case EstimatorFamily::ZZ: return "zz";
    case EstimatorFamily::WRes: return "wres";
    case EstimatorFamily::HH2: break;
  }
  switch (c.variant) {
    case HH2Variant::Mu: return "hh2-mu";
    case HH2Variant::Eta: return "hh2-eta";
    case HH2Variant::EtaTilde: return "hh2-eta-tilde";
    case HH2Variant::MuTilde: break;
  }
  return "hh2-mu-tilde";
}

IndicatorSet hh2_weaksing(const Mesh& coarse, const Mesh& fine, const DensityFunction& phi_hat, int p,
                          HH2Variant variant, const DensityFunction* phi_coarse) {
  check_uniform_refinement(coarse, fine);
  check_on_mesh(fine, phi_hat);
  if (phi_hat.space != SpaceTag::piecewise(p)) fail(ErrorKind::SpaceMismatch, "fine solution is not in P^p");
  if (!is_tilde(variant)) {
    if (phi_coarse == nullptr) fail(ErrorKind::InvalidArgument, "this variant needs the coarse solution");
    check_on_mesh(coarse, *phi_coarse);
    if (phi_coarse->space != phi_hat.space) fail(ErrorKind::SpaceMismatch, "coarse and fine spaces differ");
  }
  const int k = p + 1;
  std::vector<double> sq(coarse.num_panels());
  for (std::size_t i = 0; i < coarse.num_panels(); ++i) {
    const LocalPoly s[2] = {local_polynomial(fine, phi_hat, 2 * i), local_polynomial(fine, phi_hat, 2 * i + 1)};
    const LocalPoly c = is_tilde(variant) ? project_sons(s[0], s[1], p) : local_polynomial(coarse, *phi_coarse, i);
    Eigen::VectorXd e(2 * k);
    for (int son = 0; son < 2; ++son) {
      const LocalPoly r = restrict_to_son(c, son);
      e(son * k) = s[son].c0 - r.c0;
      if (p == 1) e(son * k + 1) = s[son].c1 - r.c1;
    }
    const double h = coarse.length(i);
    if (is_energy(variant)) {
      sq[i] = e.dot(sons_gram(fine, i, k) * e);
    } else {
      double l2 = 0.0;  // ||e||^2 on T divided by h/4
      for (int son = 0; son < 2; ++son) {
        l2 += 2.0 * e(son * k) * e(son * k);
        if (p == 1) l2 += 2.0 / 3.0 * e(son * k + 1) * e(son * k + 1);
      }
      sq[i] = 0.25 * h * h * l2;
    }
  }
  return indicators_from_squares(coarse, sq);
}

IndicatorSet hh2_hypsing(const Mesh& coarse, const Mesh& fine, const DensityFunction& u_hat, HH2Variant variant,
                         const DensityFunction* u_coarse) {
  check_uniform_refinement(coarse, fine);
  check_on_mesh(fine, u_hat);
  if (!u_hat.space.is_continuous()) fail(ErrorKind::SpaceMismatch, "fine solution is not in S^1");
  if (!is_tilde(variant)) {
    if (u_coarse == nullptr) fail(ErrorKind::InvalidArgument, "this variant needs the coarse solution");
    check_on_mesh(coarse, *u_coarse);
    if (u_coarse->space != u_hat.space) fail(ErrorKind::SpaceMismatch, "coarse and fine spaces differ");
  }
  std::vector<double> sq(coarse.num_panels());
  for (std::size_t i = 0; i < coarse.num_panels(); ++i) {
    const Panel& t = coarse.panels()[i];
    const double u1 = vertex_value(fine, u_hat, fine.panels()[2 * i].first);
    const double u3 = vertex_value(fine, u_hat, fine.panels()[2 * i].second);
    const double u2 = vertex_value(fine, u_hat, fine.panels()[2 * i + 1].second);
    double c1 = u1, c2 = u2;
    if (!is_tilde(variant)) {
      c1 = vertex_value(coarse, *u_coarse, t.first);
      c2 = vertex_value(coarse, *u_coarse, t.second);
    }
    const double e1 = u1 - c1, e2 = u2 - c2, e3 = u3 - 0.5 * (c1 + c2);
    if (is_energy(variant)) {
      const double half = 0.5 * coarse.length(i);
      const Eigen::Vector2d g((e3 - e1) / half, (e2 - e3) / half);
      sq[i] = g.dot(sons_gram(fine, i, 1) * g);
    } else {
      sq[i] = 2.0 * (e1 - e3) * (e1 - e3) + 2.0 * (e2 - e3) * (e2 - e3);
    }
  }
  return indicators_from_squares(coarse, sq);
}

DensityFunction hh2_coarse_approximation(const Mesh& coarse, const Mesh& fine, const DensityFunction& f) {
  check_uniform_refinement(coarse, fine);
  check_on_mesh(fine, f);
  if (f.space.is_continuous()) return nodal_interpolate(fine, f, coarse);
  const int p = f.space.degree();
  Eigen::VectorXd c(dimension(coarse, f.space));
  for (std::size_t i = 0; i < coarse.num_panels(); ++i) {
    const LocalPoly pr = project_sons(local_polynomial(fine, f, 2 * i), local_polynomial(fine, f, 2 * i + 1), p);
    if (p == 0) {
      c(i) = pr.c0;
    } else {
      c(2 * i) = pr.c0;
      c(2 * i + 1) = pr.c1;
    }
  }
  return make_function(coarse, f.space, std::move(c));
}

double hh2_global(const Mesh& coarse, const Mesh& fine, const Eigen::MatrixXd& fine_matrix,
                  const DensityFunction& fine_function, const DensityFunction& coarse_function) {
  check_on_mesh(fine, fine_function);
  const DensityFunction pc = prolongate(coarse, coarse_function, fine);
  if (pc.space != fine_function.space) fail(ErrorKind::SpaceMismatch, "coarse and fine spaces differ");
  if (fine_matrix.rows() != fine_function.coeffs.size() || fine_matrix.cols() != fine_function.coeffs.size())
    fail(ErrorKind::SpaceMismatch, "fine matrix does not match the fine space");
  const Eigen::VectorXd e = fine_function.coeffs - pc.coeffs;
  return std::sqrt(std::max(0.0, e.dot(fine_matrix * e)));
}

IndicatorSet twolevel_weaksing(const Mesh& coarse, const DensityFunction& phi, const ScalarField& f) {
  check_on_mesh(coarse, phi);
  if (phi.space.family != SpaceFamily::P0) fail(ErrorKind::Unsupported, "two-level indicators need p = 0");
  const std::size_t n = coarse.num_panels();
  std::vector<Segment> panel(n), minus(n), plus(n);
  for (std::size_t i = 0; i < n; ++i) {
    panel[i] = panel_segment(coarse, i);
    const Point m = coarse.midpoint(i);
    minus[i] = {panel[i].a, m};
    plus[i] = {m, panel[i].b};
  }
  const GaussRule& rule = gauss_rule(4);
  auto integral = [&](const Segment& s) {
    double sum = 0.0;
    for (int k = 0; k < rule.order; ++k) sum += rule.weights[k] * f(s.map(rule.nodes[k]));
    return 0.5 * s.length() * sum;
  };
  std::vector<double> values(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double vpp = slp_galerkin_block(plus[j], plus[j])(0, 0);
    const double vmm = slp_galerkin_block(minus[j], minus[j])(0, 0);
    const double vpm = slp_galerkin_block(plus[j], minus[j])(0, 0);
    double r = integral(plus[j]) - integral(minus[j]);
    for (std::size_t k = 0; k < n; ++k) {
      const double c = phi.coeffs[static_cast<Eigen::Index>(k)];
      if (c == 0.0) continue;
      if (k == j) {
        // <V chi_T, Psi_T> split over the sons
        r -= c * ((vpp + vpm) - (vpm + vmm));
      } else {
        r -= c * (slp_galerkin_block(plus[j], panel[k])(0, 0) - slp_galerkin_block(minus[j], panel[k])(0, 0));
      }
    }
    const double norm2 = vpp + vmm - 2.0 * vpm;
    values[j] = std::abs(r) / std::sqrt(norm2);
  }
  return make_indicators(coarse, std::move(values));
}

IndicatorSet zz(const Mesh& mesh, const DensityFunction& sol, Problem problem) {
  check_on_mesh(mesh, sol);
  const std::size_t n = mesh.num_panels();
  std::vector<double> sq(n);
  if (problem == Problem::WeaklySingular) {
    if (sol.space.family != SpaceFamily::P0) fail(ErrorKind::SpaceMismatch, "averaging needs a P^0 density");
    const std::vector<bool> corner = corner_vertices(mesh);
    auto node_value = [&](std::size_t i, std::size_t v, std::optional<std::size_t> other) {
      const double own = sol.coeffs[static_cast<Eigen::Index>(i)];
      if (!other || corner[v]) return own;
      const double hi = mesh.length(i), ho = mesh.length(*other);
      return (hi * own + ho * sol.coeffs[static_cast<Eigen::Index>(*other)]) / (hi + ho);
    };
    for (std::size_t i = 0; i < n; ++i) {
      const double c = sol.coeffs[static_cast<Eigen::Index>(i)];
      const double dl = node_value(i, mesh.panels()[i].first, mesh.previous_panel(i)) - c;
      const double dr = node_value(i, mesh.panels()[i].second, mesh.next_panel(i)) - c;
      const double h = mesh.length(i);
      sq[i] = h * h * (dl * dl + dl * dr + dr * dr) / 3.0;
    }
  } else {
    if (!sol.space.is_continuous()) fail(ErrorKind::SpaceMismatch, "averaging of the gradient needs an S^1 function");
    const DensityFunction d = arclength_derivative(mesh, sol);
    std::vector<Point> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = d.coeffs[static_cast<Eigen::Index>(i)] * mesh.tangent(i);
    auto node_value = [&](std::size_t i, std::optional<std::size_t> other) -> Point {
      if (!other) return g[i];
      const double hi = mesh.length(i), ho = mesh.length(*other);
      return (hi * g[i] + ho * g[*other]) / (hi + ho);
    };
    for (std::size_t i = 0; i < n; ++i) {
      const Point dl = node_value(i, mesh.previous_panel(i)) - g[i];
      const Point dr = node_value(i, mesh.next_panel(i)) - g[i];
      const double h = mesh.length(i);
      sq[i] = h * h * (dl.squaredNorm() + dl.dot(dr) + dr.squaredNorm()) / 3.0;
    }
  }
  return indicators_from_squares(mesh, sq);
}

Eigen::MatrixXd wres_derivative_matrix(int q) {
  if (q < 1 || q > 16) fail(ErrorKind::Unsupported, "weighted residual quadrature order must be in 1..16");
  const GaussRule& rule = gauss_rule(2 * q);
  std::vector<double> z = rule.nodes;
  z.push_back(0.0);
  const std::vector<double> w = barycentric_weights(z);
  Eigen::MatrixXd d(2 * q, z.size());
  for (int i = 0; i < 2 * q; ++i) {
    double diag = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (static_cast<int>(k) == i) continue;
      d(i, k) = w[k] / w[i] / (z[i] - z[k]);
      diag += 1.0 / (z[i] - z[k]);
    }
    d(i, i) = diag;
  }
  return d;
}

IndicatorSet wres(const Mesh& mesh, const DensityFunction& sol, const ScalarField& data, Problem problem, int q) {
  check_on_mesh(mesh, sol);
  const std::size_t n = mesh.num_panels();
  std::vector<double> sq(n);
  if (problem == Problem::WeaklySingular) {
    if (sol.space.is_continuous()) fail(ErrorKind::SpaceMismatch, "weakly singular residual needs a P^p density");
    const int p = sol.space.degree();
    if (q <= 0) q = p + 1;
    if (q > 16) fail(ErrorKind::Unsupported, "weighted residual quadrature order must be in 1..16");
    if (q < p + 1) fail(ErrorKind::InvalidArgument, "weighted residual quadrature needs q >= p + 1");
    const Eigen::MatrixXd d = wres_derivative_matrix(q);
    const GaussRule& rule = gauss_rule(2 * q);
    Eigen::VectorXd beta(2 * q + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k <= 2 * q; ++k) {
        const Point x = mesh.map(i, k < 2 * q ? rule.nodes[k] : 0.0);
        beta(k) = data(x) - slp_eval(mesh, sol, x);
      }
      const Eigen::VectorXd db = d * beta;
      double s = 0.0;
      for (int k = 0; k < 2 * q; ++k) s += rule.weights[k] * db(k) * db(k);
      sq[i] = 2.0 * s;
    }
  } else {
    if (!sol.space.is_continuous()) fail(ErrorKind::SpaceMismatch, "hypersingular residual needs an S^1 function");
    if (q <= 0) q = 3;
    if (q > 16) fail(ErrorKind::Unsupported, "weighted residual quadrature order must be in 1..16");
    if (q < 2) fail(ErrorKind::InvalidArgument, "hypersingular residual quadrature needs q >= 2");
    const DensityFunction du = arclength_derivative(mesh, sol);
    double mean = 0.0;
    if (mesh.closed()) {
      for (std::size_t i = 0; i < n; ++i) mean += local_polynomial(mesh, sol, i).c0 * mesh.length(i);
    }
    const GaussRule& rule = gauss_rule(q);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = 0; k < q; ++k) {
        const Point x = mesh.map(i, rule.nodes[k]);
        const double wu = -slp_tangential_derivative(mesh, du, i, x);
        const double r = data(x) - wu - mean;
        s += rule.weights[k] * r * r;
      }
      const double h = mesh.length(i);
      sq[i] = h * 0.5 * h * s;
    }
  }
  return indicators_from_squares(mesh, sq);
}

}  // namespace abem
