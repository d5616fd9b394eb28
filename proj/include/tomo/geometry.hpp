#pragma once

#include <vector>

#include "tomo/rng.hpp"
#include "tomo/types.hpp"

namespace tomo {

/// Multi-baseline acquisition geometry: a uniform virtual array of n_full
/// elements of which only `observed_indices` (0-based, strictly increasing)
/// are populated. Baselines are centered about zero, so element n sits at
/// b_n = n * element_spacing_m - aperture/2.
struct ArrayGeometry {
  double wavelength_m = 0.0;
  double reference_range_m = 0.0;
  int n_full = 0;
  double element_spacing_m = 0.0;
  std::vector<int> observed_indices;

  int n_observed() const { return static_cast<int>(observed_indices.size()); }
  double aperture_m() const { return (n_full - 1) * element_spacing_m; }

  double baseline_m(int n) const { return n * element_spacing_m - aperture_m() / 2.0; }

  /// Spatial frequency of element n: zeta_n = -2 b_n / (lambda r0).
  double spatial_frequency(int n) const {
    return -2.0 * baseline_m(n) / (wavelength_m * reference_range_m);
  }

  /// Width of the unambiguous elevation window, lambda r0 / (2 db).
  /// Elevations live in [-window/2, window/2).
  double unambiguous_window_m() const {
    return wavelength_m * reference_range_m / (2.0 * element_spacing_m);
  }

  /// Throws std::invalid_argument on violated invariants.
  void validate() const;
};

/// Uniform fully observed array with the given full aperture.
ArrayGeometry make_uniform_geometry(double wavelength_m, double reference_range_m, int n_full,
                                    double aperture_m);

std::vector<int> all_indices(int n_full);

/// Uniformly random size-m subset of {0..n_full-1}, sorted.
std::vector<int> random_subset(int n_full, int m, RngStream& rng);

/// Steering vector entries exp(-j 2 pi zeta_n s) over the full array, or
/// restricted to the observed indices. Throws std::domain_error when the
/// elevation leaves the unambiguous window.
CVec steering_vector(const ArrayGeometry& geometry, double elevation_m, bool restrict_observed);

/// Rayleigh elevation resolution lambda r0 / (2 D).
double rayleigh_resolution(const ArrayGeometry& geometry);

/// Slow-time decimation plan: L interleaved snapshot streams at PRF/L each.
struct PrfPlan {
  double prf_hz = 0.0;
  double doppler_bandwidth_hz = 0.0;
  int snapshots = 1;

  double sub_prf_hz() const { return prf_hz / snapshots; }
};

/// Validates PRF/L > doppler bandwidth; on violation throws
/// std::invalid_argument naming the maximal admissible L.
PrfPlan plan_emmv(double prf_hz, double doppler_bandwidth_hz, int snapshots);

}  // namespace tomo
