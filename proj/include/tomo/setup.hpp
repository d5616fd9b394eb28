#pragma once

#include "tomo/config.hpp"
#include "tomo/evaluation.hpp"
#include "tomo/scene3d.hpp"

namespace tomo {

/// geometry.* keys: wavelength_m, reference_range_m, n_full, and either
/// element_spacing_m or aperture_m; observed elements from
/// observed_indices (0-based list) or random_subset_size (drawn from the
/// seed). Omitting both observes the full array.
ArrayGeometry build_geometry(const Config& config, std::uint64_t seed);

/// scene.* keys: extent_m and scatterers ("elev:amp,..."); per-snapshot
/// phases are drawn from the seed.
Scene build_scene(const Config& config, int snapshots, std::uint64_t seed);

/// noise.variance directly, or noise.snr_db resolved against the scene.
double build_noise_variance(const Config& config, const Scene& scene,
                            const ArrayGeometry& geometry);

SolverConfig build_solver_config(const Config& config);

MethodOptions build_method_options(const Config& config);

/// montecarlo.* keys: axis (snr|alpha|L), values, methods, trials, k,
/// snr_db, alpha, snapshots.
struct MonteCarloSetup {
  McConfig config;
  std::vector<McCell> cells;
  std::string axis;
};

MonteCarloSetup build_monte_carlo(const Config& config, std::uint64_t seed, int threads);

BuildingSceneConfig build_building_scene_config(const Config& config);

std::uint64_t resolve_seed(const Config& config, std::uint64_t cli_seed);

}  // namespace tomo
