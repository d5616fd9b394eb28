#pragma once

#include <vector>

#include "tomo/geometry.hpp"
#include "tomo/types.hpp"

namespace tomo {

/// One elevation scatterer with its per-snapshot complex backscatter row.
struct Scatterer {
  double elevation_m = 0.0;
  CVec amplitudes;  // length L
};

/// Scatterers within the elevation extent of the illuminated scene.
struct Scene {
  double extent_m = 0.0;
  std::vector<Scatterer> scatterers;

  int snapshots() const {
    return scatterers.empty() ? 0 : static_cast<int>(scatterers.front().amplitudes.size());
  }
  int n_scatterers() const { return static_cast<int>(scatterers.size()); }

  /// Check extent vs the unambiguous window, elevation bounds, pairwise
  /// distinct elevations and consistent snapshot counts.
  void validate(const ArrayGeometry& geometry) const;
};

/// Scene with the given elevations, equal amplitude magnitudes and
/// independent uniform phases per scatterer per snapshot.
Scene make_random_phase_scene(const std::vector<double>& elevations_m, double amplitude,
                              int snapshots, double extent_m, RngStream& rng);

}  // namespace tomo
