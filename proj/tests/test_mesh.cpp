#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "abem/error.hpp"
#include "abem/mesh.hpp"
#include "abem/refine.hpp"

using namespace abem;

namespace {

Mesh open_mesh(std::vector<Point> p) { return build_mesh(p, false); }
Mesh closed_mesh(std::vector<Point> p) { return build_mesh(p, true); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("build_mesh: slit, square, degenerate") {
  const Mesh slit = open_mesh({{-1, 0}, {1, 0}});
  CHECK(slit.num_panels() == 1);
  CHECK(slit.length(0) == 2.0);
  CHECK_FALSE(slit.closed());
  CHECK(slit.panels()[0].generation == 0);
  CHECK_FALSE(slit.panels()[0].father.has_value());

  const Mesh sq = closed_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(sq.num_panels() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(sq.length(i) == 1.0);
  CHECK(sq.end(3) == Point(0, 0));

  CHECK(kind_of([] { open_mesh({{0, 0}, {0, 0}}); }) == ErrorKind::InvalidGeometry);
  CHECK(kind_of([] { open_mesh({{0, 0}}); }) == ErrorKind::InvalidGeometry);
  CHECK(kind_of([] { closed_mesh({{0, 0}, {1, 0}}); }) == ErrorKind::InvalidGeometry);
  CHECK(kind_of([] { closed_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 0}}); }) == ErrorKind::InvalidGeometry);
  CHECK(kind_of([] { open_mesh({{0, 0}, {NAN, 1}}); }) == ErrorKind::InvalidGeometry);
}

TEST_CASE("mesh_ratio") {
  CHECK(mesh_ratio(open_mesh({{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}})) == 1.0);
  CHECK(mesh_ratio(open_mesh({{0, 0}, {1, 0}, {1.5, 0}, {1.75, 0}})) == 2.0);
  CHECK(mesh_ratio(open_mesh({{-1, 0}, {1, 0}})) == 1.0);
  // the first and last panels of a closed curve are neighbours
  CHECK(mesh_ratio(closed_mesh({{0, 0}, {4, 0}, {4, 1}})) == doctest::Approx(std::sqrt(17.0)));
  CHECK(mesh_ratio(closed_mesh({{0, 0}, {1, 0}, {1, 1}, {0.5, 1}, {0, 1}})) == 2.0);
}

TEST_CASE("mesh_ratio is invariant under rigid motions") {
  const std::vector<Point> p{{0, 0}, {0.3, 0.1}, {1.0, 0.4}, {1.2, 1.5}, {0.2, 1.1}};
  const double r0 = mesh_ratio(closed_mesh(p));
  const double c = std::cos(0.7), s = std::sin(0.7);
  std::vector<Point> q;
  for (const Point& x : p) q.emplace_back(c * x.x() - s * x.y() + 3.0, s * x.x() + c * x.y() - 2.0);
  CHECK(mesh_ratio(closed_mesh(q)) == doctest::Approx(r0).epsilon(1e-12));
}

TEST_CASE("node_patches") {
  auto sizes = [](const Mesh& m) {
    std::vector<std::size_t> s;
    for (const NodePatch& p : node_patches(m)) s.push_back(p.panels.size());
    return s;
  };
  CHECK(sizes(open_mesh({{0, 0}, {1, 0}, {2, 0}})) == std::vector<std::size_t>{1, 2, 1});
  CHECK(sizes(closed_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}})) == std::vector<std::size_t>{2, 2, 2, 2});
  CHECK(sizes(open_mesh({{-1, 0}, {1, 0}})) == std::vector<std::size_t>{1, 1});
  const Mesh sq = closed_mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  for (const NodePatch& p : node_patches(sq))
    for (std::size_t t : p.panels) CHECK((sq.panels()[t].first == p.node || sq.panels()[t].second == p.node));
}

TEST_CASE("total length equals the polyline length") {
  const std::vector<Point> p{{0, 0}, {0.3, 0.1}, {1.0, 0.4}, {1.2, 1.5}};
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) len += (p[i + 1] - p[i]).norm();
  const Mesh m = open_mesh(p);
  CHECK(m.total_length() == doctest::Approx(len).epsilon(1e-12));
  CHECK(uniform_refine(uniform_refine(m)).total_length() == doctest::Approx(len).epsilon(1e-12));
}

TEST_CASE("neighbours and corners") {
  const Mesh sq = closed_mesh({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(sq.previous_panel(0) == 4u);
  CHECK(sq.next_panel(4) == 0u);
  const std::vector<bool> c = corner_vertices(sq);
  CHECK(c == std::vector<bool>{true, false, true, true, true});
  const Mesh slit = open_mesh({{-1, 0}, {0, 0}, {1, 0}});
  CHECK_FALSE(slit.previous_panel(0).has_value());
  CHECK_FALSE(slit.next_panel(1).has_value());
  CHECK(corner_vertices(slit) == std::vector<bool>{false, false, false});
}

TEST_CASE("scale_down divides coordinates") {
  const Mesh m = scale_down(open_mesh({{-1, 0}, {1, 0}}), 4.0);
  CHECK(m.length(0) == 0.5);
  CHECK(m.panels()[0].generation == 0);
  CHECK(kind_of([] { scale_down(open_mesh({{-1, 0}, {1, 0}}), 0.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("geometry file parsing") {
  std::istringstream ok("# slit\nopen\n-1 0\n\n0 0\n1 0\n");
  const Mesh m = parse_geometry(ok);
  CHECK(m.num_panels() == 2);
  CHECK_FALSE(m.closed());

  std::istringstream sq("closed\n0 0\n1 0\n1 1\n0 1\n");
  CHECK(parse_geometry(sq).num_panels() == 4);

  std::istringstream bad_header("polygon\n0 0\n1 0\n");
  CHECK(kind_of([&] { parse_geometry(bad_header); }) == ErrorKind::ParseError);
  std::istringstream bad_number("open\n0 0\n1 x\n");
  CHECK(kind_of([&] { parse_geometry(bad_number); }) == ErrorKind::ParseError);
  std::istringstream extra("open\n0 0 0\n1 0\n");
  CHECK(kind_of([&] { parse_geometry(extra); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { load_geometry("/nonexistent/geometry.txt"); }) == ErrorKind::ParseError);
}
