#include "tomo/observation.hpp"

#include <cmath>

namespace tomo {

CMat steering_matrix(const ArrayGeometry& geometry, const std::vector<double>& elevations_m,
                     bool restrict_observed) {
  const int rows = restrict_observed ? geometry.n_observed() : geometry.n_full;
  CMat a(rows, static_cast<int>(elevations_m.size()));
  for (std::size_t k = 0; k < elevations_m.size(); ++k)
    a.col(static_cast<int>(k)) = steering_vector(geometry, elevations_m[k], restrict_observed);
  return a;
}

Observation simulate_observation(const ArrayGeometry& geometry, const Scene& scene,
                                 double noise_variance, std::uint64_t seed) {
  scene.validate(geometry);
  if (noise_variance < 0.0)
    throw std::invalid_argument("simulate_observation: negative noise variance");

  const int m = geometry.n_observed();
  const int l = scene.snapshots();
  CMat clean = CMat::Zero(m, l);
  for (const Scatterer& sc : scene.scatterers) {
    const CVec a = steering_vector(geometry, sc.elevation_m, true);
    clean += a * sc.amplitudes.transpose();
  }

  Observation obs;
  obs.clean = clean;
  obs.noise_variance = noise_variance;
  obs.data = clean;
  if (noise_variance > 0.0) {
    RngStream rng(seed);
    for (int j = 0; j < l; ++j)
      for (int i = 0; i < m; ++i) obs.data(i, j) += rng.complex_gaussian(noise_variance);
  }
  return obs;
}

double snr_to_variance(const Scene& scene, const ArrayGeometry& geometry, double snr_db) {
  if (scene.scatterers.empty())
    throw std::invalid_argument("snr_to_variance: scene has no scatterers");
  const int m = geometry.n_observed();
  const int l = scene.snapshots();
  CMat clean = CMat::Zero(m, l);
  for (const Scatterer& sc : scene.scatterers)
    clean += steering_vector(geometry, sc.elevation_m, true) * sc.amplitudes.transpose();
  const double mean_power = clean.squaredNorm() / (static_cast<double>(m) * l);
  return mean_power / std::pow(10.0, snr_db / 10.0);
}

}  // namespace tomo
