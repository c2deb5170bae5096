#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "abem/mesh.hpp"

namespace abem {

/// Panels of a specific mesh selected for refinement (sorted, unique).
struct MarkSet {
  std::uint64_t mesh_id = 0;
  std::vector<std::size_t> panels;
};

MarkSet make_markset(const Mesh& mesh, std::vector<std::size_t> panels);

struct RefinementStep {
  std::size_t marked = 0;
  std::size_t panels_before = 0;
  std::size_t panels_after = 0;
};

/// Per-step bookkeeping for the mesh-closure estimate.
struct RefinementLedger {
  std::size_t initial_panels = 0;
  std::vector<RefinementStep> steps;

  void record(std::size_t marked, std::size_t before, std::size_t after);
};

/// Closure of the marked set: repeatedly adds every unmarked neighbour T' of a
/// marked T with diam(T') > sigma0 * diam(T), until nothing changes.
std::vector<std::size_t> bisection_closure(const Mesh& mesh, std::span<const std::size_t> marked,
                                           double sigma0);

/// Midpoint bisection of exactly the given panels, no closure.
Mesh bisect_panels(const Mesh& mesh, std::span<const std::size_t> panels);

/// Extended 1D bisection: closure of `marked` with the initial mesh ratio
/// `sigma0`, then midpoint bisection. Keeps mesh_ratio <= 2 * sigma0.
Mesh bisect(const Mesh& mesh, const MarkSet& marked, double sigma0);

Mesh uniform_refine(const Mesh& mesh);

/// Coarsest common refinement of two refinements of the same initial mesh.
Mesh overlay(const Mesh& a, const Mesh& b);

/// Empirical mesh-closure constant max_l (#T_{l+1} - #T_0) / sum_{k<=l} #M_k.
double closure_report(const RefinementLedger& ledger);

}  // namespace abem
