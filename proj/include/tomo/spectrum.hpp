#pragma once

#include <vector>

#include "tomo/atomic.hpp"
#include "tomo/observation.hpp"

namespace tomo {

/// Frequencies and powers extracted from a PSD Toeplitz matrix, plus the
/// physical elevations once mapped through the array geometry.
struct SpectralEstimate {
  std::vector<double> frequencies;   // sorted ascending, in [0,1)
  std::vector<double> powers;        // positive
  std::vector<double> elevations_m;  // filled by map_to_elevations
  int model_order = 0;
  bool degenerate = false;  // requested order exceeded the numerical rank
};

/// Count of eigenvalues of T(u) above max(noise_floor, rel_thresh * lambda_max).
int estimate_model_order(const ToeplitzGenerator& u, double noise_floor,
                         double rel_thresh = 1e-2);

/// Frequencies via noise-subspace polynomial rooting on T(u) (the `order`
/// roots nearest the unit circle, ties broken by subspace orthogonality),
/// powers via nonnegative least squares against the recovered atoms.
/// Requires 1 <= order <= N-1 and T(u) PSD within tolerance.
SpectralEstimate vandermonde_decompose(const ToeplitzGenerator& u, int order);

/// Normalized frequency of an elevation: (2 db / (lambda r0)) s mod 1.
double elevation_to_frequency(double elevation_m, const ArrayGeometry& geometry);

/// Inverse mapping into the principal window [-W/2, W/2) with
/// W = lambda r0 / (2 db); omega = 0.5 lands on the negative edge.
double frequency_to_elevation(double omega, const ArrayGeometry& geometry);

/// Fills estimate.elevations_m from estimate.frequencies and re-sorts all
/// components by elevation.
void map_to_elevations(SpectralEstimate& estimate, const ArrayGeometry& geometry);

/// Least-squares amplitude refit at fixed elevations:
/// argmin || G_Omega - A_Omega(s) Gamma ||_F. Throws on rank-deficient
/// steering matrices, naming the colliding elevations.
CMat estimate_amplitudes(const Observation& observation, const ArrayGeometry& geometry,
                         const std::vector<double>& elevations_m);

/// Nonnegative least squares min ||b - A x||_2 s.t. x >= 0 (active set).
RVec nnls(const RMat& a, const RVec& b, int max_iters = 0);

}  // namespace tomo
