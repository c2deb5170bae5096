#include "abem/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "abem/error.hpp"
#include "abem/quadrature.hpp"

namespace abem {
namespace {

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;

// Gauss order for a smooth log-kernel integrand whose nearest singularity is
// `ratio` panel lengths away; chosen so that rho^(-2q) stays near 1e-15 where
// rho is the Bernstein ellipse parameter. Returns 0 when the pair is too
// close for plain Gauss.
int far_field_order(double ratio) {
  if (ratio >= 50.0) return 3;
  if (ratio >= 16.0) return 4;
  if (ratio >= 8.0) return 5;
  if (ratio >= 4.0) return 6;
  if (ratio >= 2.0) return 8;
  return 0;
}

// Order for one piece of the adaptive outer integration; `ratio` >= 1.
int near_piece_order(double ratio) {
  if (ratio >= 4.0) return 6;
  if (ratio >= 2.0) return 8;
  return 12;
}

// Pieces shorter than this fraction of the outer panel are integrated
// without further splitting; their contribution is O(eps^2 log eps).
constexpr double kMinPieceFraction = 1e-8;

struct Frame {
  double length;
  Point tau;
  Point normal;
};

Frame frame_of(const Segment& s) {
  const double l = s.length();
  const Point tau = (s.b - s.a) / l;
  return {l, tau, Point(-tau.y(), tau.x())};
}

struct LocalCoords {
  double xi;  // coordinate along the segment from a
  double d;   // signed distance from the segment line
};

LocalCoords local_coords(const Point& x, const Segment& s, const Frame& f) {
  const Point r = x - s.a;
  double d = r.dot(f.normal);
  if (std::abs(d) <= 1e-14 * f.length) d = 0.0;
  return {r.dot(f.tau), d};
}

bool lexicographically_less(const Segment& s, const Segment& t) {
  return std::tie(s.a.x(), s.a.y(), s.b.x(), s.b.y()) < std::tie(t.a.x(), t.a.y(), t.b.x(), t.b.y());
}

Eigen::Matrix2d tensor_gauss_block(const Segment& test, const Segment& trial, int q) {
  const GaussRule& rule = gauss_rule(q);
  Eigen::Matrix2d block = Eigen::Matrix2d::Zero();
  for (int k = 0; k < q; ++k) {
    const Point x = test.map(rule.nodes[k]);
    double s0 = 0.0, s1 = 0.0;
    for (int l = 0; l < q; ++l) {
      const double w = rule.weights[l] * std::log((x - trial.map(rule.nodes[l])).norm());
      s0 += w;
      s1 += w * rule.nodes[l];
    }
    const double wk = rule.weights[k];
    const double tk = rule.nodes[k];
    block(0, 0) += wk * s0;
    block(0, 1) += wk * s1;
    block(1, 0) += wk * tk * s0;
    block(1, 1) += wk * tk * s1;
  }
  return -kInvTwoPi * 0.25 * test.length() * trial.length() * block;
}

// Outer integration over `test` of the closed-form inner moments, with
// recursive bisection of the outer parameter range towards the points where
// the inner integral is not analytic.
Eigen::Matrix2d adaptive_outer_block(const Segment& test, const Segment& trial, bool identical) {
  const double outer_length = test.length();
  auto singular_distance = [&](const Segment& piece) {
    if (identical)
      return std::min(point_segment_distance(trial.a, piece), point_segment_distance(trial.b, piece));
    return segment_distance(piece, trial);
  };

  Eigen::Matrix2d block = Eigen::Matrix2d::Zero();
  std::vector<std::pair<double, double>> stack{{-1.0, 1.0}};
  while (!stack.empty()) {
    const auto [t0, t1] = stack.back();
    stack.pop_back();
    const Segment piece{test.map(t0), test.map(t1)};
    const double piece_length = 0.5 * (t1 - t0) * outer_length;
    const double dist = singular_distance(piece);
    int q = 0;
    if (dist >= piece_length) {
      q = near_piece_order(dist / piece_length);
    } else if (piece_length < kMinPieceFraction * outer_length) {
      q = 12;
    } else {
      const double tm = 0.5 * (t0 + t1);
      stack.emplace_back(t0, tm);
      stack.emplace_back(tm, t1);
      continue;
    }
    const GaussRule& rule = gauss_rule(q);
    const double half = 0.5 * (t1 - t0);
    const double mid = 0.5 * (t0 + t1);
    for (int k = 0; k < q; ++k) {
      const double t = mid + half * rule.nodes[k];
      const Moments m = log_moments(test.map(t), trial);
      const double w = rule.weights[k] * half;
      block(0, 0) += w * m.m0;
      block(0, 1) += w * m.m1;
      block(1, 0) += w * t * m.m0;
      block(1, 1) += w * t * m.m1;
    }
  }
  return -kInvTwoPi * 0.5 * outer_length * block;
}

Eigen::Matrix2d canonical_block(const Segment& test, const Segment& trial) {
  const PanelRelation rel = classify(test, trial);
  if (rel == PanelRelation::Identical) {
    const Eigen::Matrix2d b = adaptive_outer_block(test, trial, true);
    return 0.5 * (b + b.transpose());
  }
  if (rel == PanelRelation::Disjoint) {
    const double ratio = segment_distance(test, trial) / std::max(test.length(), trial.length());
    if (const int q = far_field_order(ratio); q > 0) return tensor_gauss_block(test, trial, q);
  }
  return adaptive_outer_block(test, trial, false);
}

}  // namespace

Segment panel_segment(const Mesh& mesh, std::size_t panel) {
  return {mesh.start(panel), mesh.end(panel)};
}

PanelRelation classify(const Segment& s, const Segment& t) {
  const bool aa = s.a == t.a, ab = s.a == t.b, ba = s.b == t.a, bb = s.b == t.b;
  if ((aa && bb) || (ab && ba)) return PanelRelation::Identical;
  if (aa || ab || ba || bb) return PanelRelation::Adjacent;
  return PanelRelation::Disjoint;
}

double point_segment_distance(const Point& x, const Segment& s) {
  const Point d = s.b - s.a;
  const double len2 = d.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((x - s.a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (x - (s.a + t * d)).norm();
}

double segment_distance(const Segment& s, const Segment& t) {
  auto cross = [](const Point& u, const Point& v) { return u.x() * v.y() - u.y() * v.x(); };
  const Point r = s.b - s.a, q = t.b - t.a;
  const double denom = cross(r, q);
  if (denom != 0.0) {
    const double u = cross(t.a - s.a, q) / denom;
    const double v = cross(t.a - s.a, r) / denom;
    if (u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0) return 0.0;
  }
  return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t),
                   point_segment_distance(t.a, s), point_segment_distance(t.b, s)});
}

Moments log_moments(const Point& x, const Segment& seg) {
  const Frame f = frame_of(seg);
  const auto [xi, d] = local_coords(x, seg, f);
  const double ad = std::abs(d);
  // Antiderivatives in u = sigma - xi of  log|x - y|  and  u log|x - y|.
  auto f0 = [&](double u) {
    if (ad == 0.0) return u == 0.0 ? 0.0 : u * std::log(std::abs(u)) - u;
    return 0.5 * u * std::log(u * u + d * d) - u + ad * std::atan(u / ad);
  };
  auto f1 = [&](double u) {
    const double q = u * u + d * d;
    return q == 0.0 ? 0.0 : 0.25 * q * (std::log(q) - 1.0);
  };
  const double u0 = -xi, u1 = f.length - xi;
  const double i0 = f0(u1) - f0(u0);
  const double m1 = 2.0 / f.length * (f1(u1) - f1(u0)) + (2.0 * xi / f.length - 1.0) * i0;
  return {i0, m1};
}

Moments log_gradient_moments(const Point& x, const Point& dir, const Segment& seg) {
  const Frame f = frame_of(seg);
  const auto [xi, d] = local_coords(x, seg, f);
  const double u0 = -xi, u1 = f.length - xi;
  if (d == 0.0 && (std::abs(u0) <= 1e-14 * f.length || std::abs(u1) <= 1e-14 * f.length))
    fail(ErrorKind::SingularPoint, "evaluation point coincides with a panel endpoint");
  const double c_tau = f.tau.dot(dir);
  const double c_n = f.normal.dot(dir);
  const double a0 = -0.5 * (std::log(u1 * u1 + d * d) - std::log(u0 * u0 + d * d));
  const double b0 = d == 0.0 ? 0.0 : std::atan(u1 / d) - std::atan(u0 / d);
  const double a1 = -(u1 - u0) + d * b0;
  const double b1 = -d * a0;
  const double k0 = c_tau * a0 + c_n * b0;
  const double k1 = 2.0 / f.length * (c_tau * a1 + c_n * b1) + (2.0 * xi / f.length - 1.0) * k0;
  return {k0, k1};
}

Eigen::Matrix2d slp_galerkin_block(const Segment& test, const Segment& trial) {
  if (!(test.length() > 0.0) || !(trial.length() > 0.0))
    fail(ErrorKind::InvalidGeometry, "zero-length panel");
  if (lexicographically_less(trial, test)) return canonical_block(trial, test).transpose();
  return canonical_block(test, trial);
}

double slp_galerkin_entry(const Segment& test, const Segment& trial, int i, int j, int p) {
  if (p < 0 || p > 1) fail(ErrorKind::Unsupported, "only p = 0 and p = 1 are supported");
  if (i < 0 || j < 0 || i > p || j > p) fail(ErrorKind::InvalidArgument, "local basis index out of range");
  return slp_galerkin_block(test, trial)(i, j);
}

double slp_eval(const Mesh& mesh, const DensityFunction& rho, const Point& x) {
  check_on_mesh(mesh, rho);
  double sum = 0.0;
  for (std::size_t i = 0; i < mesh.num_panels(); ++i) {
    const LocalPoly c = local_polynomial(mesh, rho, i);
    if (c.c0 == 0.0 && c.c1 == 0.0) continue;
    const Segment seg = panel_segment(mesh, i);
    const double len = seg.length();
    if (x == seg.a || x == seg.b)
      fail(ErrorKind::SingularPoint, "evaluation point coincides with a panel endpoint");
    const int q = far_field_order(point_segment_distance(x, seg) / len);
    if (q > 0) {
      const GaussRule& rule = gauss_rule(q);
      double s = 0.0;
      for (int k = 0; k < q; ++k)
        s += rule.weights[k] * c(rule.nodes[k]) * std::log((x - seg.map(rule.nodes[k])).norm());
      sum += 0.5 * len * s;
    } else {
      const Moments m = log_moments(x, seg);
      sum += c.c0 * m.m0 + c.c1 * m.m1;
    }
  }
  return -kInvTwoPi * sum;
}

double slp_tangential_derivative(const Mesh& mesh, const DensityFunction& rho, std::size_t panel,
                                 const Point& x) {
  check_on_mesh(mesh, rho);
  if (panel >= mesh.num_panels()) fail(ErrorKind::InvalidArgument, "panel id out of range");
  const Point dir = mesh.tangent(panel);
  double sum = 0.0;
  for (std::size_t i = 0; i < mesh.num_panels(); ++i) {
    const LocalPoly c = local_polynomial(mesh, rho, i);
    const Segment seg = panel_segment(mesh, i);
    const double len = seg.length();
    if (x == seg.a || x == seg.b)
      fail(ErrorKind::SingularPoint, "evaluation point coincides with a panel endpoint");
    if (c.c0 == 0.0 && c.c1 == 0.0) continue;
    const int q = i == panel ? 0 : far_field_order(point_segment_distance(x, seg) / len);
    if (q > 0) {
      const GaussRule& rule = gauss_rule(q);
      double s = 0.0;
      for (int k = 0; k < q; ++k) {
        const Point r = x - seg.map(rule.nodes[k]);
        s += rule.weights[k] * c(rule.nodes[k]) * r.dot(dir) / r.squaredNorm();
      }
      sum += 0.5 * len * s;
    } else {
      const Moments m = log_gradient_moments(x, dir, seg);
      sum += c.c0 * m.m0 + c.c1 * m.m1;
    }
  }
  return -kInvTwoPi * sum;
}

}  // namespace abem
