#include "abem/refine.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "abem/error.hpp"

namespace abem {
namespace {

// Midpoints computed in floating point halve lengths only up to rounding, so
// "strictly larger" is read with a relative slack far below any real ratio.
constexpr double kRatioSlack = 1e-10;

void check_panel_ids(const Mesh& mesh, std::span<const std::size_t> ids) {
  for (auto id : ids)
    if (id >= mesh.num_panels())
      fail(ErrorKind::InvalidArgument, "panel id " + std::to_string(id) + " out of range");
}

}  // namespace

MarkSet make_markset(const Mesh& mesh, std::vector<std::size_t> panels) {
  check_panel_ids(mesh, panels);
  std::sort(panels.begin(), panels.end());
  panels.erase(std::unique(panels.begin(), panels.end()), panels.end());
  return MarkSet{mesh.id(), std::move(panels)};
}

void RefinementLedger::record(std::size_t marked, std::size_t before, std::size_t after) {
  if (after < before) fail(ErrorKind::InvalidArgument, "refinement cannot remove panels");
  steps.push_back({marked, before, after});
}

std::vector<std::size_t> bisection_closure(const Mesh& mesh, std::span<const std::size_t> marked,
                                           double sigma0) {
  check_panel_ids(mesh, marked);
  std::vector<bool> in_set(mesh.num_panels(), false);
  std::deque<std::size_t> work;
  for (auto id : marked) {
    if (!in_set[id]) work.push_back(id);
    in_set[id] = true;
  }
  while (!work.empty()) {
    const std::size_t t = work.front();
    work.pop_front();
    const double threshold = sigma0 * mesh.length(t) * (1.0 + kRatioSlack);
    for (auto nb : {mesh.previous_panel(t), mesh.next_panel(t)}) {
      if (!nb || in_set[*nb]) continue;
      if (mesh.length(*nb) > threshold) {
        in_set[*nb] = true;
        work.push_back(*nb);
      }
    }
  }
  std::vector<std::size_t> result;
  for (std::size_t i = 0; i < in_set.size(); ++i)
    if (in_set[i]) result.push_back(i);
  return result;
}

Mesh bisect_panels(const Mesh& mesh, std::span<const std::size_t> panels) {
  check_panel_ids(mesh, panels);
  std::vector<bool> refine(mesh.num_panels(), false);
  for (auto id : panels) refine[id] = true;

  std::vector<Point> vertices;
  std::vector<Panel> out;
  vertices.reserve(mesh.num_vertices() + panels.size());
  out.reserve(mesh.num_panels() + panels.size());
  auto push = [&](const Point& start, std::size_t father, unsigned generation, std::size_t root) {
    Panel p;
    p.first = vertices.size();
    p.second = p.first + 1;
    p.father = father;
    p.generation = generation;
    p.root = root;
    vertices.push_back(start);
    out.push_back(p);
  };
  for (std::size_t i = 0; i < mesh.num_panels(); ++i) {
    const Panel& src = mesh.panels()[i];
    if (refine[i]) {
      push(mesh.start(i), i, src.generation + 1, src.root);
      push(mesh.midpoint(i), i, src.generation + 1, src.root);
    } else {
      push(mesh.start(i), i, src.generation, src.root);
    }
  }
  if (mesh.closed()) {
    out.back().second = 0;
  } else {
    vertices.push_back(mesh.vertices().back());
  }
  return Mesh::from_parts(std::move(vertices), std::move(out), mesh.closed(), mesh.id(),
                          mesh.root_id(), mesh.initial_panels());
}

Mesh bisect(const Mesh& mesh, const MarkSet& marked, double sigma0) {
  if (marked.panels.empty()) fail(ErrorKind::NoOp, "empty mark set");
  if (marked.mesh_id != mesh.id()) fail(ErrorKind::SpaceMismatch, "mark set refers to another mesh");
  const auto closure = bisection_closure(mesh, marked.panels, sigma0);
  return bisect_panels(mesh, closure);
}

Mesh uniform_refine(const Mesh& mesh) {
  std::vector<std::size_t> all(mesh.num_panels());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return bisect_panels(mesh, all);
}

Mesh overlay(const Mesh& a, const Mesh& b) {
  if (a.root_id() != b.root_id() || a.closed() != b.closed())
    fail(ErrorKind::OverlayMismatch, "meshes do not share an initial mesh");

  std::vector<Point> vertices;
  std::vector<Panel> out;
  auto emit = [&](const Mesh& m, std::size_t i) {
    Panel p = m.panels()[i];
    p.first = vertices.size();
    p.second = p.first + 1;
    p.father.reset();
    vertices.push_back(m.start(i));
    out.push_back(p);
  };

  // Both meshes are dyadic refinements of the same roots in the same chain
  // order, so whenever the two cursors start at the same point one panel is
  // nested in the other. Shared dyadic points are produced by the same
  // midpoint sequence in both meshes and therefore compare bitwise equal.
  std::size_t i = 0, j = 0;
  while (i < a.num_panels() && j < b.num_panels()) {
    const Panel& pa = a.panels()[i];
    const Panel& pb = b.panels()[j];
    if (pa.root != pb.root)
      fail(ErrorKind::OverlayMismatch, "incompatible genealogies");
    if (pa.generation == pb.generation) {
      if (a.start(i) != b.start(j) || a.end(i) != b.end(j))
        fail(ErrorKind::OverlayMismatch, "panels of equal generation do not coincide");
      emit(a, i);
      ++i;
      ++j;
    } else if (pa.generation > pb.generation) {
      emit(a, i);
      if (a.end(i) == b.end(j)) ++j;
      ++i;
    } else {
      emit(b, j);
      if (b.end(j) == a.end(i)) ++i;
      ++j;
    }
  }
  if (i != a.num_panels() || j != b.num_panels())
    fail(ErrorKind::OverlayMismatch, "meshes cover different curves");
  if (a.closed()) {
    out.back().second = 0;
  } else {
    vertices.push_back(a.vertices().back());
  }
  return Mesh::from_parts(std::move(vertices), std::move(out), a.closed(), std::nullopt,
                          a.root_id(), a.initial_panels());
}

double closure_report(const RefinementLedger& ledger) {
  if (ledger.steps.empty()) fail(ErrorKind::InsufficientData, "no refinement steps recorded");
  double worst = 0.0;
  std::size_t cumulative_marks = 0;
  bool any = false;
  for (const auto& step : ledger.steps) {
    cumulative_marks += step.marked;
    if (cumulative_marks == 0) continue;
    any = true;
    const double grown =
        static_cast<double>(step.panels_after) - static_cast<double>(ledger.initial_panels);
    worst = std::max(worst, grown / static_cast<double>(cumulative_marks));
  }
  if (!any) fail(ErrorKind::InvalidArgument, "closure constant undefined without marked panels");
  return worst;
}

}  // namespace abem
