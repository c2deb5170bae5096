#include "abem/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "abem/error.hpp"

namespace abem {

MarkSet doerfler_mark(const Mesh& mesh, const IndicatorSet& ind, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) fail(ErrorKind::InvalidArgument, "theta must lie in (0, 1]");
  if (ind.mesh_id != mesh.id() || ind.values.size() != mesh.num_panels())
    fail(ErrorKind::SpaceMismatch, "indicators do not belong to this mesh");
  const auto& v = ind.values;
  for (double x : v)
    if (!std::isfinite(x)) fail(ErrorKind::InvalidArgument, "indicators must be finite");
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });

  double total = 0.0;
  for (std::size_t i : order) total += v[i] * v[i];
  if (total == 0.0) {
    std::size_t longest = 0;
    for (std::size_t i = 1; i < mesh.num_panels(); ++i)
      if (mesh.length(i) > mesh.length(longest)) longest = i;
    return make_markset(mesh, {longest});
  }
  std::vector<std::size_t> marked;
  double sum = 0.0;
  for (std::size_t i : order) {
    sum += v[i] * v[i];
    marked.push_back(i);
    if (theta * total <= sum) break;
  }
  return make_markset(mesh, std::move(marked));
}

void validate(const AdaptiveOptions& opt) {
  if (!(opt.theta > 0.0 && opt.theta <= 1.0)) fail(ErrorKind::InvalidArgument, "theta must lie in (0, 1]");
  if (!opt.data) fail(ErrorKind::InvalidArgument, "missing right-hand side data");
  if (opt.estimator.problem != opt.problem)
    fail(ErrorKind::InvalidArgument, "estimator was configured for the other problem");
  opt.estimator.validate();
  if (opt.problem == Problem::WeaklySingular) {
    if (opt.p != 0 && opt.p != 1) fail(ErrorKind::Unsupported, "only p = 0 and p = 1 are supported");
    if (opt.p != 0 && (opt.estimator.family == EstimatorFamily::TwoLevel || opt.estimator.family == EstimatorFamily::ZZ))
      fail(ErrorKind::Unsupported, "this estimator is implemented for p = 0 only");
  } else if (opt.p != 1) {
    fail(ErrorKind::Unsupported, "the hypersingular problem uses continuous piecewise linears (p = 1)");
  }
}

RunRecord adaptive_loop(const Mesh& initial, const AdaptiveOptions& opt) {
  validate(opt);
  using clock = std::chrono::steady_clock;
  const double sigma0 = mesh_ratio(initial);
  const EstimatorChoice& est = opt.estimator;
  RunRecord run;
  run.ledger.initial_panels = initial.num_panels();
  Mesh mesh = initial;
  for (std::size_t step = 0;; ++step) {
    const auto start = clock::now();
    StepRecord rec;
    rec.step = step;
    rec.panels = mesh.num_panels();
    rec.theta = opt.uniform ? 1.0 : opt.theta;
    std::optional<Mesh> fine;
    std::optional<GalerkinSystem> fine_sys;
    std::optional<DensityFunction> fine_sol;
    GalerkinSystem sys;
    DensityFunction sol;
    IndicatorSet ind;
    try {
      if (est.needs_fine_solution()) {
        fine = uniform_refine(mesh);
        fine_sys = assemble(*fine, opt.problem, opt.p, opt.data);
        fine_sol = solve(*fine_sys);
        // Coarse system as the Galerkin restriction of the fine one.
        const Eigen::SparseMatrix<double> r = prolongation_matrix(mesh, fine_sys->space, *fine);
        const Eigen::MatrixXd ar = fine_sys->matrix * r;
        sys.matrix = r.transpose() * ar;
        sys.matrix = 0.5 * (sys.matrix + sys.matrix.transpose()).eval();
        sys.rhs = r.transpose() * fine_sys->rhs;
        sys.space = fine_sys->space;
        sys.mesh_id = mesh.id();
        sys.stabilized = fine_sys->stabilized;
      } else {
        sys = assemble(mesh, opt.problem, opt.p, opt.data);
      }
      sol = solve(sys);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
      run.diagnostic = "step " + std::to_string(step) + ": " + e.what();
      return run;
    }
    rec.dofs = static_cast<std::size_t>(sol.coeffs.size());
    rec.error = energy(sys, sol, opt.exact_energy).energy_error;

    switch (est.family) {
      case EstimatorFamily::HH2:
        ind = opt.problem == Problem::WeaklySingular
                  ? hh2_weaksing(mesh, *fine, *fine_sol, opt.p, est.variant, &sol)
                  : hh2_hypsing(mesh, *fine, *fine_sol, est.variant, &sol);
        break;
      case EstimatorFamily::TwoLevel:
        ind = twolevel_weaksing(mesh, sol, opt.data);
        break;
      case EstimatorFamily::ZZ:
        ind = zz(mesh, sol, opt.problem);
        break;
      case EstimatorFamily::WRes:
        ind = wres(mesh, sol, opt.data, opt.problem, est.q);
        break;
    }
    rec.estimator = ind.total;

    std::optional<double> distance;
    if (fine) distance = hh2_global(mesh, *fine, fine_sys->matrix, *fine_sol, sol);

    const bool last = rec.dofs > opt.max_dofs;
    std::optional<Mesh> next;
    if (!last) {
      if (opt.uniform) {
        next = fine ? *fine : uniform_refine(mesh);
        rec.marked = mesh.num_panels();
      } else {
        const MarkSet marks = doerfler_mark(mesh, ind, opt.theta);
        rec.marked = marks.panels.size();
        next = bisect(mesh, marks, sigma0);
      }
      run.ledger.record(rec.marked, mesh.num_panels(), next->num_panels());
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    run.steps.push_back(rec);
    run.meshes.push_back(mesh);
    run.solutions.push_back(std::move(sol));
    run.fine_distance.push_back(distance);
    if (last) break;
    mesh = std::move(*next);
  }
  return run;
}

ReductionReport estimator_reduction_monitor(const RunRecord& run, double q_est, double slack) {
  if (run.steps.size() < 2) fail(ErrorKind::InsufficientData, "need at least two steps");
  ReductionReport r;
  std::size_t contracting = 0;
  for (std::size_t l = 0; l + 1 < run.steps.size(); ++l) {
    const double a = run.steps[l].estimator, b = run.steps[l + 1].estimator;
    const double ratio = a > 0.0 ? (b * b) / (a * a) : (b > 0.0 ? INFINITY : 0.0);
    r.ratios.push_back(ratio);
    if (ratio <= q_est + slack) ++contracting;
  }
  r.contracting_fraction = static_cast<double>(contracting) / static_cast<double>(r.ratios.size());
  return r;
}

RateEstimate fit_rate(std::span<const double> dofs, std::span<const double> values, double tail_fraction) {
  if (dofs.size() != values.size()) fail(ErrorKind::InvalidArgument, "dofs and values differ in length");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    fail(ErrorKind::InvalidArgument, "tail fraction must lie in (0, 1]");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] > 0.0 && dofs[i] > 0.0) idx.push_back(i);
  const std::size_t window =
      std::max(kMinRatePoints, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(idx.size()))));
  if (idx.size() < window) fail(ErrorKind::InsufficientData, "not enough points for a rate estimate");
  idx.erase(idx.begin(), idx.end() - static_cast<std::ptrdiff_t>(window));

  double mx = 0.0, my = 0.0;
  for (std::size_t i : idx) {
    mx += std::log(dofs[i]);
    my += std::log(values[i]);
  }
  mx /= static_cast<double>(window);
  my /= static_cast<double>(window);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i : idx) {
    const double dx = std::log(dofs[i]) - mx, dy = std::log(values[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) fail(ErrorKind::InsufficientData, "all points have the same number of dofs");
  RateEstimate r;
  r.slope = sxy / sxx;
  r.first = idx.front();
  r.last = idx.back();
  const double ss_res = std::max(0.0, syy - r.slope * sxy);
  r.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return r;
}

RateReport estimate_rate(const RunRecord& run, double tail_fraction) {
  std::vector<double> n, est;
  for (const StepRecord& s : run.steps) {
    n.push_back(static_cast<double>(s.dofs));
    est.push_back(s.estimator);
  }
  RateReport r{fit_rate(n, est, tail_fraction), std::nullopt};
  std::vector<double> en, err;
  for (const StepRecord& s : run.steps) {
    if (!s.error) continue;
    en.push_back(static_cast<double>(s.dofs));
    err.push_back(*s.error);
  }
  if (!err.empty()) r.error = fit_rate(en, err, tail_fraction);
  return r;
}

namespace {

constexpr const char* kCsvHeader = "step,panels,dofs,estimator,error,marked,theta,wall_ms";

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s, std::size_t line) {
  double x = 0.0;
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  in >> x;
  if (in.fail() || !in.eof()) fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad number '" + s + "'");
  return x;
}

std::size_t parse_count(const std::string& s, std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad integer '" + s + "'");
  return std::stoull(s);
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<StepRecord>& steps) {
  out << kCsvHeader << '\n';
  for (const StepRecord& s : steps) {
    out << s.step << ',' << s.panels << ',' << s.dofs << ',' << format_double(s.estimator) << ','
        << (s.error ? format_double(*s.error) : std::string()) << ',' << s.marked << ','
        << format_double(s.theta) << ',' << format_double(s.wall_ms) << '\n';
  }
}

std::vector<StepRecord> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) fail(ErrorKind::ParseError, "missing or wrong CSV header");
  std::vector<StepRecord> steps;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (;;) {
      const std::size_t comma = line.find(',', pos);
      f.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (f.size() != 8) fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 8 fields");
    StepRecord s;
    s.step = parse_count(f[0], lineno);
    s.panels = parse_count(f[1], lineno);
    s.dofs = parse_count(f[2], lineno);
    s.estimator = parse_double(f[3], lineno);
    if (!f[4].empty()) s.error = parse_double(f[4], lineno);
    s.marked = parse_count(f[5], lineno);
    s.theta = parse_double(f[6], lineno);
    s.wall_ms = parse_double(f[7], lineno);
    steps.push_back(s);
  }
  return steps;
}

}  // namespace abem
