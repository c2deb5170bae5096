#include "abem/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "abem/error.hpp"

namespace abem {
namespace {

std::uint64_t next_mesh_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

Mesh Mesh::from_parts(std::vector<Point> vertices, std::vector<Panel> panels, bool closed,
                      std::optional<std::uint64_t> parent_id, std::uint64_t root_id,
                      std::size_t initial_panels) {
  const std::size_t n = panels.size();
  if (n == 0) fail(ErrorKind::InvalidGeometry, "mesh without panels");
  if (vertices.size() != (closed ? n : n + 1))
    fail(ErrorKind::InvalidGeometry, "vertex count does not match panel chain");
  if (closed && n < 3) fail(ErrorKind::InvalidGeometry, "closed curve needs at least 3 panels");
  for (const auto& v : vertices)
    if (!std::isfinite(v.x()) || !std::isfinite(v.y()))
      fail(ErrorKind::InvalidGeometry, "non-finite vertex coordinate");
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t expected_second = (i + 1) % vertices.size();
    if (panels[i].first != i || panels[i].second != expected_second)
      fail(ErrorKind::InvalidGeometry, "panels do not form a chain");
    if (!((vertices[panels[i].second] - vertices[panels[i].first]).norm() > 0.0))
      fail(ErrorKind::InvalidGeometry, "degenerate panel " + std::to_string(i));
  }
  Mesh m;
  m.vertices_ = std::move(vertices);
  m.panels_ = std::move(panels);
  m.closed_ = closed;
  m.id_ = next_mesh_id();
  m.parent_id_ = parent_id;
  m.root_id_ = root_id != 0 ? root_id : m.id_;
  m.initial_panels_ = root_id != 0 ? initial_panels : m.panels_.size();
  return m;
}

double Mesh::total_length() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < num_panels(); ++i) sum += length(i);
  return sum;
}

std::optional<std::size_t> Mesh::previous_panel(std::size_t panel) const {
  if (panel > 0) return panel - 1;
  if (closed_) return num_panels() - 1;
  return std::nullopt;
}

std::optional<std::size_t> Mesh::next_panel(std::size_t panel) const {
  if (panel + 1 < num_panels()) return panel + 1;
  if (closed_) return 0;
  return std::nullopt;
}

Mesh build_mesh(std::span<const Point> polyline, bool closed) {
  const std::size_t nv = polyline.size();
  if (nv < (closed ? 3u : 2u))
    fail(ErrorKind::InvalidGeometry, closed ? "closed curve needs at least 3 vertices"
                                            : "open curve needs at least 2 vertices");
  for (std::size_t i = 0; i + 1 < nv; ++i)
    if (polyline[i] == polyline[i + 1])
      fail(ErrorKind::InvalidGeometry, "duplicate consecutive vertex at index " + std::to_string(i));
  if (closed && polyline.front() == polyline.back())
    fail(ErrorKind::InvalidGeometry, "closed curve repeats its first vertex; omit the last point");

  const std::size_t np = closed ? nv : nv - 1;
  std::vector<Panel> panels(np);
  for (std::size_t i = 0; i < np; ++i) {
    panels[i].first = i;
    panels[i].second = (i + 1) % nv;
    panels[i].root = i;
  }
  return Mesh::from_parts({polyline.begin(), polyline.end()}, std::move(panels), closed);
}

double mesh_ratio(const Mesh& mesh) {
  double ratio = 1.0;
  for (std::size_t i = 0; i < mesh.num_panels(); ++i) {
    const auto next = mesh.next_panel(i);
    if (!next || *next == i) continue;
    const double a = mesh.length(i);
    const double b = mesh.length(*next);
    ratio = std::max({ratio, a / b, b / a});
  }
  return ratio;
}

std::vector<NodePatch> node_patches(const Mesh& mesh) {
  std::vector<NodePatch> patches(mesh.num_vertices());
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) patches[v].node = v;
  for (std::size_t i = 0; i < mesh.num_panels(); ++i) {
    patches[mesh.panels()[i].first].panels.push_back(i);
    patches[mesh.panels()[i].second].panels.push_back(i);
  }
  for (auto& p : patches) std::sort(p.panels.begin(), p.panels.end());
  return patches;
}

std::vector<bool> corner_vertices(const Mesh& mesh, double angle_tol) {
  std::vector<bool> corner(mesh.num_vertices(), false);
  for (std::size_t i = 0; i < mesh.num_panels(); ++i) {
    const auto next = mesh.next_panel(i);
    if (!next) continue;
    const Point t0 = mesh.tangent(i);
    const Point t1 = mesh.tangent(*next);
    const double cross = t0.x() * t1.y() - t0.y() * t1.x();
    const double angle = std::abs(std::atan2(cross, t0.dot(t1)));
    if (angle > angle_tol) corner[mesh.panels()[i].second] = true;
  }
  return corner;
}

Mesh scale_down(const Mesh& mesh, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    fail(ErrorKind::InvalidArgument, "scale factor must be positive and finite");
  std::vector<Point> pts = mesh.vertices();
  for (auto& p : pts) p /= factor;
  return build_mesh(pts, mesh.closed());
}

Mesh parse_geometry(std::istream& in) {
  std::optional<bool> closed;
  std::vector<Point> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (!closed) {
      if (t == "open") closed = false;
      else if (t == "closed") closed = true;
      else fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 'open' or 'closed'");
      continue;
    }
    std::istringstream ls(t);
    ls.imbue(std::locale::classic());
    double x = 0.0, y = 0.0;
    std::string rest;
    if (!(ls >> x >> y) || (ls >> rest))
      fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 'x y'");
    pts.emplace_back(x, y);
  }
  if (!closed) fail(ErrorKind::ParseError, "missing 'open'/'closed' header");
  return build_mesh(pts, *closed);
}

Mesh load_geometry(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, "cannot open geometry file " + path.string());
  return parse_geometry(in);
}

}  // namespace abem
