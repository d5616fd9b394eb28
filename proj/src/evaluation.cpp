#include "tomo/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "tomo/parallel.hpp"

namespace tomo {

Pairing match_scatterers(const std::vector<double>& true_elevations,
                         const std::vector<double>& estimated_elevations) {
  const int kt = static_cast<int>(true_elevations.size());
  const int ke = static_cast<int>(estimated_elevations.size());
  Pairing pairing;
  if (kt == 0) {
    pairing.full = true;
    return pairing;
  }
  if (ke == 0) return pairing;

  // For sorted lists and convex costs the optimal assignment never
  // crosses, so alignment DP over (truth, estimate) prefixes suffices.
  const int rows = std::min(kt, ke);
  const bool truths_lead = kt <= ke;
  const std::vector<double>& small = truths_lead ? true_elevations : estimated_elevations;
  const std::vector<double>& large = truths_lead ? estimated_elevations : true_elevations;
  const int ns = static_cast<int>(small.size());
  const int nl = static_cast<int>(large.size());

  constexpr double inf = std::numeric_limits<double>::infinity();
  RMat cost = RMat::Constant(ns + 1, nl + 1, inf);
  cost.row(0).setZero();
  for (int i = 1; i <= ns; ++i)
    for (int j = i; j <= nl; ++j) {
      const double d = small[i - 1] - large[j - 1];
      cost(i, j) = std::min(cost(i, j - 1), cost(i - 1, j - 1) + d * d);
    }

  // Backtrack.
  std::vector<std::pair<int, int>> pairs;
  int i = ns, j = nl;
  while (i > 0) {
    const double d = small[i - 1] - large[j - 1];
    if (j > i && cost(i, j - 1) <= cost(i - 1, j - 1) + d * d) {
      --j;
    } else {
      pairs.emplace_back(i - 1, j - 1);
      --i;
      --j;
    }
  }
  std::reverse(pairs.begin(), pairs.end());

  pairing.cost = cost(ns, nl);
  pairing.pairs.reserve(pairs.size());
  for (auto [si, li] : pairs)
    pairing.pairs.emplace_back(truths_lead ? si : li, truths_lead ? li : si);
  pairing.full = static_cast<int>(pairing.pairs.size()) == kt;
  return pairing;
}

bool TrialOutcome::detected(double threshold_m) const {
  if (solver_failed || !full_pairing) return false;
  for (double e : matched_errors)
    if (std::abs(e) > threshold_m) return false;
  return true;
}

SigmaS sigma_s(const std::vector<TrialOutcome>& trials, double rho_s) {
  SigmaS out;
  double acc = 0.0;
  for (const TrialOutcome& t : trials) {
    if (t.solver_failed || !t.full_pairing || t.matched_errors.empty()) continue;
    double per_trial = 0.0;
    for (double e : t.matched_errors) per_trial += e * e;
    acc += per_trial / t.matched_errors.size();
    ++out.eligible_trials;
  }
  if (out.eligible_trials > 0) {
    out.value = std::sqrt(acc / out.eligible_trials) / rho_s;
    out.defined = true;
  }
  return out;
}

Wilson wilson_interval(int successes, int trials) {
  Wilson w;
  if (trials <= 0) return w;
  const double z = 1.959963984540054;
  const double n = trials;
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  w.lo = std::max(0.0, center - half);
  w.hi = std::min(1.0, center + half);
  return w;
}

double prob_detection(const std::vector<TrialOutcome>& trials, double threshold_m) {
  if (trials.empty()) return 0.0;
  int hits = 0;
  for (const TrialOutcome& t : trials)
    if (t.detected(threshold_m)) ++hits;
  return static_cast<double>(hits) / trials.size();
}

namespace {

std::vector<double> draw_elevations(const McCell& cell, const McConfig& config, RngStream& rng) {
  const double half = config.extent_m / 2.0;
  if (cell.n_scatterers == 1) return {rng.uniform(-half, half)};
  if (cell.n_scatterers != 2)
    throw std::invalid_argument("monte carlo trials support K in {1, 2}");

  if (cell.separation_m > 0.0) {
    const double margin = (config.extent_m - cell.separation_m) / 2.0;
    if (margin <= 0.0)
      throw std::invalid_argument("separation exceeds the scene extent");
    const double mid = rng.uniform(-margin, margin);
    return {mid - cell.separation_m / 2.0, mid + cell.separation_m / 2.0};
  }

  // Random well-separated pair: distance above 4 S1 / (N - 1).
  const double min_sep = 4.0 * config.extent_m / (config.full_geometry.n_full - 1);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double a = rng.uniform(-half, half);
    const double b = rng.uniform(-half, half);
    if (std::abs(a - b) > min_sep) return {std::min(a, b), std::max(a, b)};
  }
  throw SolverError("draw_elevations: rejection sampling failed");
}

TrialOutcome run_trial(const McConfig& config, const McCell& cell, std::uint64_t cell_index,
                       std::uint64_t trial_index) {
  RngStream rng(derive_seed(config.seed, cell_index, trial_index));
  TrialOutcome outcome;

  ArrayGeometry geometry = config.full_geometry;
  geometry.observed_indices = random_subset(geometry.n_full, config.subset_size, rng);

  outcome.true_elevations = draw_elevations(cell, config, rng);
  std::sort(outcome.true_elevations.begin(), outcome.true_elevations.end());

  const int snapshots = cell.method == Method::empast ? cell.snapshots : 1;
  const Scene scene =
      make_random_phase_scene(outcome.true_elevations, 1.0, snapshots, config.extent_m, rng);
  const double sigma = snr_to_variance(scene, geometry, cell.snr_db);
  const Observation obs = simulate_observation(geometry, scene, sigma, rng.engine()());

  MethodOptions options;
  options.method = cell.method;
  options.solver = config.solver;
  options.gbcs_grid_step_m = config.gbcs_grid_step_m;
  options.expected_order = cell.n_scatterers;

  const auto start = std::chrono::steady_clock::now();
  try {
    const EstimationResult est = estimate_elevations(geometry, obs, options, config.extent_m);
    outcome.estimated_elevations = est.elevations_m;
  } catch (const std::exception&) {
    outcome.solver_failed = true;
  }
  outcome.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  const Pairing pairing = match_scatterers(outcome.true_elevations, outcome.estimated_elevations);
  outcome.full_pairing = pairing.full && !outcome.solver_failed;
  for (auto [ti, ei] : pairing.pairs)
    outcome.matched_errors.push_back(outcome.estimated_elevations[ei] -
                                     outcome.true_elevations[ti]);
  return outcome;
}

McRow summarize(const McConfig& config, const McCell& cell,
                const std::vector<TrialOutcome>& outcomes) {
  McRow row;
  row.cell = cell;
  row.trials = static_cast<int>(outcomes.size());
  const double rho = rayleigh_resolution(config.full_geometry);
  row.sigma = sigma_s(outcomes, rho);
  const double threshold = config.threshold_m > 0.0 ? config.threshold_m : rho / 8.0;
  for (const TrialOutcome& t : outcomes) {
    if (t.detected(threshold)) ++row.detections;
    if (t.solver_failed) ++row.solver_failures;
    row.mean_runtime_ms += t.runtime_ms;
  }
  if (row.trials > 0) {
    row.p_d = static_cast<double>(row.detections) / row.trials;
    row.mean_runtime_ms /= row.trials;
  }
  row.ci = wilson_interval(row.detections, row.trials);
  return row;
}

}  // namespace

std::vector<TrialOutcome> run_cell(const McConfig& config, const McCell& cell,
                                   std::uint64_t cell_index) {
  std::vector<TrialOutcome> outcomes(config.trials_per_cell);
  parallel_for(config.trials_per_cell, config.threads, [&](int t) {
    outcomes[t] = run_trial(config, cell, cell_index, static_cast<std::uint64_t>(t));
  });
  return outcomes;
}

McReport run_monte_carlo(const McConfig& config, const std::vector<McCell>& cells) {
  McReport report;
  report.rho_s = rayleigh_resolution(config.full_geometry);
  report.threshold_m = config.threshold_m > 0.0 ? config.threshold_m : report.rho_s / 8.0;
  report.seed = config.seed;
  if (config.trials_per_cell <= 0) return report;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::vector<TrialOutcome> outcomes = run_cell(config, cells[c], c);
    report.rows.push_back(summarize(config, cells[c], outcomes));
  }
  return report;
}

std::string report_to_csv(const McReport& report, bool include_timing) {
  std::ostringstream os;
  os << "method,snr_db,alpha,L,trials,sigma_s,p_d,p_d_ci_lo,p_d_ci_hi,mean_runtime_ms\n";
  char buf[512];
  for (const McRow& row : report.rows) {
    const double alpha = row.cell.separation_m > 0.0 ? row.cell.separation_m / report.rho_s : 0.0;
    const double runtime = include_timing ? row.mean_runtime_ms : 0.0;
    std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%d,%d,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                  method_name(row.cell.method).c_str(), row.cell.snr_db, alpha,
                  row.cell.snapshots, row.trials, row.sigma.defined ? row.sigma.value : -1.0,
                  row.p_d, row.ci.lo, row.ci.hi, runtime);
    os << buf;
  }
  return os.str();
}

KappaResult super_resolution_factor(const McConfig& config, Method method, int snapshots,
                                    double snr_db, double pd_target) {
  if (!(pd_target > 0.0 && pd_target < 1.0))
    throw std::invalid_argument("super_resolution_factor: pd_target must be in (0,1)");
  const double rho = rayleigh_resolution(config.full_geometry);
  KappaResult result;
  result.sweep.rho_s = rho;
  result.sweep.threshold_m = config.threshold_m > 0.0 ? config.threshold_m : rho / 8.0;
  result.sweep.seed = config.seed;

  bool any_pass = false;
  double smallest_pass = 0.0;
  for (int j = 40; j >= 1; --j) {  // separation 2 rho_s down to rho_s / 20
    McCell cell;
    cell.method = method;
    cell.snapshots = snapshots;
    cell.snr_db = snr_db;
    cell.n_scatterers = 2;
    cell.separation_m = rho * j / 20.0;
    const std::vector<TrialOutcome> outcomes =
        run_cell(config, cell, static_cast<std::uint64_t>(1000 + j));
    const McRow full = summarize(config, cell, outcomes);
    result.sweep.rows.push_back(full);
    if (full.p_d >= pd_target) {
      any_pass = true;
      smallest_pass = cell.separation_m;
    } else if (any_pass) {
      break;  // descending sweep stops at the first failure past a pass
    } else {
      break;  // target missed already at the widest separation
    }
  }

  if (!any_pass) {
    result.floor_flag = true;
    result.kappa = 0.5;
    result.rho_pd_m = 2.0 * rho;
    return result;
  }
  result.rho_pd_m = smallest_pass;
  result.kappa = rho / smallest_pass;
  return result;
}

}  // namespace tomo
