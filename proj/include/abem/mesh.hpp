#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace abem {

using Point = Eigen::Vector2d;

/// Straight boundary element. `father` indexes the panel of the parent mesh
/// that contains this one (itself, if it was not refined); `root` is the
/// generation-0 panel it descends from.
struct Panel {
  std::size_t first = 0;
  std::size_t second = 0;
  std::optional<std::size_t> father;
  unsigned generation = 0;
  std::size_t root = 0;
};

/// Node patch: the panels whose closure contains `node` (one or two in 1D).
struct NodePatch {
  std::size_t node = 0;
  std::vector<std::size_t> panels;
};

/// Partition of an open or closed polygonal curve into straight panels.
///
/// Vertices are stored in chain order, so panel i always runs from vertex i to
/// vertex i + 1 (wrapping to vertex 0 for the last panel of a closed curve).
/// The orientation of the curve is the panel order. Meshes are immutable; the
/// refinement routines create new meshes that record their parent's id.
class Mesh {
 public:
  /// Low-level factory used by refinement; validates the chain invariants.
  /// A zero `root_id` makes the new mesh its own generation-0 root.
  static Mesh from_parts(std::vector<Point> vertices, std::vector<Panel> panels, bool closed,
                         std::optional<std::uint64_t> parent_id = std::nullopt,
                         std::uint64_t root_id = 0, std::size_t initial_panels = 0);

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<Panel>& panels() const noexcept { return panels_; }
  bool closed() const noexcept { return closed_; }
  std::size_t num_panels() const noexcept { return panels_.size(); }
  std::size_t num_vertices() const noexcept { return vertices_.size(); }

  /// Unique per constructed mesh; copies share it.
  std::uint64_t id() const noexcept { return id_; }
  std::optional<std::uint64_t> parent_id() const noexcept { return parent_id_; }
  /// Id of the generation-0 mesh this mesh descends from.
  std::uint64_t root_id() const noexcept { return root_id_; }
  std::size_t initial_panels() const noexcept { return initial_panels_; }

  const Point& start(std::size_t panel) const { return vertices_[panels_[panel].first]; }
  const Point& end(std::size_t panel) const { return vertices_[panels_[panel].second]; }
  Point midpoint(std::size_t panel) const { return 0.5 * (start(panel) + end(panel)); }
  double length(std::size_t panel) const { return (end(panel) - start(panel)).norm(); }
  Point tangent(std::size_t panel) const { return (end(panel) - start(panel)) / length(panel); }
  /// Maps the reference coordinate t in [-1, 1] onto the panel.
  Point map(std::size_t panel, double t) const {
    return 0.5 * (1.0 - t) * start(panel) + 0.5 * (1.0 + t) * end(panel);
  }
  double total_length() const;

  std::optional<std::size_t> previous_panel(std::size_t panel) const;
  std::optional<std::size_t> next_panel(std::size_t panel) const;

  /// True for the two endpoints of an open curve.
  bool is_boundary_vertex(std::size_t vertex) const {
    return !closed_ && (vertex == 0 || vertex + 1 == vertices_.size());
  }

 private:
  Mesh() = default;

  std::vector<Point> vertices_;
  std::vector<Panel> panels_;
  bool closed_ = false;
  std::uint64_t id_ = 0;
  std::optional<std::uint64_t> parent_id_;
  std::uint64_t root_id_ = 0;
  std::size_t initial_panels_ = 0;
};

/// One panel per consecutive vertex pair. Self-intersection is not checked.
Mesh build_mesh(std::span<const Point> polyline, bool closed);

/// Largest diameter ratio over neighbouring panels (first/last count as
/// neighbours on a closed curve). Returns 1 for a single panel.
double mesh_ratio(const Mesh& mesh);

std::vector<NodePatch> node_patches(const Mesh& mesh);

/// Flags vertices where the tangent turns by more than `angle_tol` radians.
/// Endpoints of an open curve are never corners.
std::vector<bool> corner_vertices(const Mesh& mesh, double angle_tol = 1e-9);

/// Divides every coordinate by `factor` (geometry prescaling for the
/// logarithmic-capacity condition). Returns a fresh generation-0 mesh.
Mesh scale_down(const Mesh& mesh, double factor);

/// Geometry text format: first non-comment line "open" or "closed", then one
/// "x y" pair per line; lines starting with '#' are comments.
Mesh parse_geometry(std::istream& in);
Mesh load_geometry(const std::filesystem::path& path);

}  // namespace abem
