#pragma once

#include <vector>

#include "tomo/observation.hpp"

namespace tomo {

/// Discretized elevation dictionary; columns are restricted steering
/// vectors at uniform grid points over the scene extent.
struct Dictionary {
  std::vector<double> grid_elevations_m;
  CMat matrix;  // M x Q

  int grid_size() const { return static_cast<int>(grid_elevations_m.size()); }
};

/// Uniform grid of floor(extent/step)+1 points centered on the extent.
/// The conventional step is rho_s / 8.
Dictionary build_dictionary(const ArrayGeometry& geometry, double extent_m, double grid_step_m);

struct L1Result {
  CVec gamma;  // length Q
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
};

/// min 1/2 ||g - A gamma||_2^2 + tau_l1 ||gamma||_1 by monotone accelerated
/// proximal gradient with step 1/L_A; converged when the relative objective
/// change drops below tol.
L1Result solve_l1(const CVec& g, const Dictionary& dictionary, double tau_l1, int max_iters = 2000,
                  double tol = 1e-10);

/// Conventional threshold sigma * sqrt(2 log Q).
double default_l1_tau(double noise_variance, int grid_size);

struct Peak {
  double elevation_m = 0.0;
  double amplitude = 0.0;
};

/// Local maxima of |gamma| above rel_threshold * max, greedily accepted in
/// descending amplitude under the separation constraint, re-sorted by
/// elevation. Plateau ties go to the leftmost index.
std::vector<Peak> extract_peaks(const RVec& magnitudes, const Dictionary& dictionary,
                                int max_peaks, double min_separation_m,
                                double rel_threshold = 0.1);

/// Multi-snapshot wrapper: solves each column independently and averages
/// the recovered powers, returning per-grid-point root-mean amplitudes.
RVec solve_l1_mmv(const CMat& g, const Dictionary& dictionary, double tau_l1, int max_iters = 2000,
                  double tol = 1e-10);

}  // namespace tomo
