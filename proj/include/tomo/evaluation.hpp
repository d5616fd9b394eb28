#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tomo/pipeline.hpp"

namespace tomo {

/// Order-preserving minimum-squared-error assignment between the sorted
/// truth and estimate lists. All truths are matched when enough estimates
/// exist; otherwise the pairing is partial.
struct Pairing {
  std::vector<std::pair<int, int>> pairs;  // (truth index, estimate index)
  double cost = 0.0;
  bool full = false;  // every truth matched
};

Pairing match_scatterers(const std::vector<double>& true_elevations,
                         const std::vector<double>& estimated_elevations);

/// One Monte-Carlo trial after matching.
struct TrialOutcome {
  std::vector<double> true_elevations;
  std::vector<double> estimated_elevations;
  std::vector<double> matched_errors;  // estimate - truth per matched truth
  bool full_pairing = false;
  bool solver_failed = false;
  double runtime_ms = 0.0;

  bool detected(double threshold_m) const;
};

struct SigmaS {
  double value = 0.0;
  int eligible_trials = 0;
  bool defined = false;
};

/// Normalized elevation RMSE over trials with a full pairing; trials with
/// missed detections are excluded here and only count against P_D.
SigmaS sigma_s(const std::vector<TrialOutcome>& trials, double rho_s);

struct Wilson {
  double lo = 0.0;
  double hi = 1.0;
};

/// 95% Wilson score interval for a binomial proportion.
Wilson wilson_interval(int successes, int trials);

/// Fraction of trials where every true scatterer has a matched estimate
/// within threshold_m.
double prob_detection(const std::vector<TrialOutcome>& trials, double threshold_m);

/// Fixed experiment conditions shared by all cells of one sweep.
struct McConfig {
  ArrayGeometry full_geometry;  // uniform N-element array
  int subset_size = 0;          // M elements redrawn per trial
  double extent_m = 0.0;        // S1
  int trials_per_cell = 0;
  std::uint64_t seed = 0;
  double threshold_m = 0.0;  // detection threshold T, default rho_s / 8
  int threads = 0;
  SolverConfig solver;           // tau <= 0: closed form per trial
  double gbcs_grid_step_m = 0.0; // 0: rho_s / 8
  bool collect_timing = false;
};

/// One sweep cell: a method at one operating point.
struct McCell {
  Method method = Method::empast;
  int snapshots = 1;     // L used by the method (1 for past/gbcs)
  double snr_db = 10.0;
  int n_scatterers = 1;       // K
  double separation_m = 0.0;  // > 0: fixed; 0: random well-separated draw
};

struct McRow {
  McCell cell;
  int trials = 0;
  int detections = 0;
  SigmaS sigma;
  double p_d = 0.0;
  Wilson ci;
  double mean_runtime_ms = 0.0;
  int solver_failures = 0;
};

struct McReport {
  std::vector<McRow> rows;
  double rho_s = 0.0;
  double threshold_m = 0.0;
  std::uint64_t seed = 0;
};

/// Executes trials for one cell with per-trial derived seeds and a fresh
/// random M-of-N element subset per trial. Deterministic for fixed seeds
/// regardless of thread count.
std::vector<TrialOutcome> run_cell(const McConfig& config, const McCell& cell,
                                   std::uint64_t cell_index);

McReport run_monte_carlo(const McConfig& config, const std::vector<McCell>& cells);

/// CSV per the report schema; runtime column is zeroed unless timing
/// collection was requested, keeping fixed-seed reruns byte-identical.
std::string report_to_csv(const McReport& report, bool include_timing);

struct KappaResult {
  double kappa = 0.0;
  double rho_pd_m = 0.0;
  bool floor_flag = false;  // target never reached on the sweep
  McReport sweep;
};

/// Descending separation sweep over (0, 2 rho_s] in steps of rho_s / 20;
/// kappa = rho_s / (smallest separation whose P_D estimate still meets
/// pd_target before the first failure).
KappaResult super_resolution_factor(const McConfig& config, Method method, int snapshots,
                                    double snr_db, double pd_target);

}  // namespace tomo
