#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abem/assembly.hpp"
#include "abem/estimators.hpp"
#include "abem/mesh.hpp"
#include "abem/refine.hpp"

namespace abem {

/// Doerfler marking with minimal cardinality: indicators sorted descending
/// (ties by ascending panel id), shortest prefix with
/// theta * total^2 <= sum of marked squares. All-zero indicators mark the
/// longest panel.
MarkSet doerfler_mark(const Mesh& mesh, const IndicatorSet& ind, double theta);

struct StepRecord {
  std::size_t step = 0;
  std::size_t panels = 0;
  std::size_t dofs = 0;
  double estimator = 0.0;
  std::optional<double> error;
  std::size_t marked = 0;
  double theta = 0.0;
  double wall_ms = 0.0;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct RunRecord {
  std::vector<StepRecord> steps;
  /// Mesh and Galerkin solution of every step (not part of the CSV).
  std::vector<Mesh> meshes;
  std::vector<DensityFunction> solutions;
  /// ||U_fine - U|| in the fine energy norm, for steps that solved on the
  /// uniform refinement.
  std::vector<std::optional<double>> fine_distance;
  RefinementLedger ledger;
  /// Set when the run stopped early.
  std::optional<std::string> diagnostic;
};

struct AdaptiveOptions {
  Problem problem = Problem::WeaklySingular;
  /// Degree for the weakly singular problem; the hypersingular one uses S^1.
  int p = 0;
  EstimatorChoice estimator;
  double theta = 0.25;
  std::size_t max_dofs = 1000;
  /// f for the weakly singular problem, phi for the hypersingular one.
  ScalarField data;
  std::optional<double> exact_energy;
  /// Refine every panel instead of marking.
  bool uniform = false;
};

void validate(const AdaptiveOptions& opt);

/// solve -> estimate -> mark -> refine, stopping after the first step whose
/// dofs exceed max_dofs. A failed factorization ends the run with the steps
/// so far and a diagnostic.
RunRecord adaptive_loop(const Mesh& initial, const AdaptiveOptions& opt);

struct ReductionReport {
  std::vector<double> ratios;  // eta_{l+1}^2 / eta_l^2
  double contracting_fraction = 0.0;
};

ReductionReport estimator_reduction_monitor(const RunRecord& run, double q_est, double slack = 1e-12);

struct RateEstimate {
  double slope = 0.0;
  std::size_t first = 0;  // window, inclusive step indices
  std::size_t last = 0;
  double r_squared = 1.0;
};

inline constexpr std::size_t kMinRatePoints = 4;

/// Least-squares slope of log(values) over log(dofs) on the last
/// ceil(tail_fraction * n) points (at least 4). Nonpositive values are skipped.
RateEstimate fit_rate(std::span<const double> dofs, std::span<const double> values, double tail_fraction = 0.5);

struct RateReport {
  RateEstimate estimator;
  std::optional<RateEstimate> error;
};

RateReport estimate_rate(const RunRecord& run, double tail_fraction = 0.5);

void write_csv(std::ostream& out, const std::vector<StepRecord>& steps);
std::vector<StepRecord> parse_csv(std::istream& in);

}  // namespace abem
