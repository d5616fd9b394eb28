#pragma once

#include <cstdint>
#include <optional>

#include "tomo/scene.hpp"

namespace tomo {

/// Measured M x L snapshot matrix over the observed array elements, with
/// the noiseless matrix kept alongside when the data came from simulation.
struct Observation {
  CMat data;                  // M x L
  std::optional<CMat> clean;  // M x L
  double noise_variance = 0.0;
  std::optional<double> snr_db;

  int n_observed() const { return static_cast<int>(data.rows()); }
  int snapshots() const { return static_cast<int>(data.cols()); }
};

/// Steering matrix over the observed elements for the scene's elevations.
CMat steering_matrix(const ArrayGeometry& geometry, const std::vector<double>& elevations_m,
                     bool restrict_observed);

/// clean = A_Omega * Gamma, data = clean + E with E i.i.d. circularly
/// symmetric complex Gaussian of per-element variance noise_variance.
/// Bit-reproducible for a fixed seed.
Observation simulate_observation(const ArrayGeometry& geometry, const Scene& scene,
                                 double noise_variance, std::uint64_t seed);

/// Noise variance that realizes the requested SNR against the scene's mean
/// per-element clean power.
double snr_to_variance(const Scene& scene, const ArrayGeometry& geometry, double snr_db);

}  // namespace tomo
