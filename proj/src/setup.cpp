#include "tomo/setup.hpp"

#include <algorithm>

namespace tomo {

ArrayGeometry build_geometry(const Config& config, std::uint64_t seed) {
  ArrayGeometry g;
  g.wavelength_m = config.get_double("geometry.wavelength_m");
  g.reference_range_m = config.get_double("geometry.reference_range_m");
  g.n_full = static_cast<int>(config.get_int("geometry.n_full"));
  if (config.has("geometry.element_spacing_m")) {
    g.element_spacing_m = config.get_double("geometry.element_spacing_m");
  } else if (config.has("geometry.aperture_m")) {
    g.element_spacing_m = config.get_double("geometry.aperture_m") / (g.n_full - 1);
  } else {
    throw ConfigError("missing config key 'geometry.element_spacing_m' (or 'geometry.aperture_m')");
  }
  if (config.has("geometry.observed_indices")) {
    g.observed_indices = config.get_int_list("geometry.observed_indices");
  } else if (config.has("geometry.random_subset_size")) {
    RngStream rng(derive_seed(seed, 11));
    g.observed_indices =
        random_subset(g.n_full, static_cast<int>(config.get_int("geometry.random_subset_size")),
                      rng);
  } else {
    g.observed_indices = all_indices(g.n_full);
  }
  g.validate();
  return g;
}

Scene build_scene(const Config& config, int snapshots, std::uint64_t seed) {
  Scene scene;
  scene.extent_m = config.get_double("scene.extent_m");
  RngStream rng(derive_seed(seed, 13));
  for (const auto& [elev, amp] : config.get_pair_list("scene.scatterers")) {
    Scatterer sc;
    sc.elevation_m = elev;
    sc.amplitudes = CVec(snapshots);
    for (int l = 0; l < snapshots; ++l) sc.amplitudes(l) = amp * rng.random_phase();
    scene.scatterers.push_back(std::move(sc));
  }
  return scene;
}

double build_noise_variance(const Config& config, const Scene& scene,
                            const ArrayGeometry& geometry) {
  if (config.has("noise.variance")) return config.get_double("noise.variance");
  if (config.has("noise.snr_db"))
    return snr_to_variance(scene, geometry, config.get_double("noise.snr_db"));
  throw ConfigError("missing config key 'noise.variance' (or 'noise.snr_db')");
}

SolverConfig build_solver_config(const Config& config) {
  SolverConfig s;
  s.tau = config.get_double_or("solver.tau", 0.0);
  s.penalty_eta = config.get_double_or("solver.eta", 1.0);
  s.max_iters = static_cast<int>(config.get_int_or("solver.max_iters", 5000));
  s.tol_primal = config.get_double_or("solver.tol_primal", 1e-6);
  s.tol_change = config.get_double_or("solver.tol_change", 1e-8);
  s.adaptive_eta = config.get_bool_or("solver.adaptive_eta", false);
  s.validate();
  return s;
}

MethodOptions build_method_options(const Config& config) {
  MethodOptions opt;
  opt.method = parse_method(config.get_string_or("method", "empast"));
  opt.solver = build_solver_config(config);
  opt.gbcs_grid_step_m = config.get_double_or("gbcs.grid_step_m", 0.0);
  opt.gbcs_tau_l1 = config.get_double_or("gbcs.tau_l1", -1.0);
  opt.gbcs_max_iters = static_cast<int>(config.get_int_or("gbcs.max_iters", 2000));
  opt.gbcs_tol = config.get_double_or("gbcs.tol", 1e-10);
  opt.expected_order = static_cast<int>(config.get_int_or("model_order", 0));
  opt.max_auto_order = static_cast<int>(config.get_int_or("max_model_order", 0));
  return opt;
}

MonteCarloSetup build_monte_carlo(const Config& config, std::uint64_t seed, int threads) {
  MonteCarloSetup setup;
  setup.config.full_geometry = [&] {
    ArrayGeometry g;
    g.wavelength_m = config.get_double("geometry.wavelength_m");
    g.reference_range_m = config.get_double("geometry.reference_range_m");
    g.n_full = static_cast<int>(config.get_int("geometry.n_full"));
    g.element_spacing_m = config.has("geometry.element_spacing_m")
                              ? config.get_double("geometry.element_spacing_m")
                              : config.get_double("geometry.aperture_m") / (g.n_full - 1);
    g.observed_indices = all_indices(g.n_full);
    g.validate();
    return g;
  }();
  const double rho = rayleigh_resolution(setup.config.full_geometry);
  setup.config.subset_size =
      static_cast<int>(config.get_int_or("montecarlo.subset_size",
                                         config.get_int_or("geometry.random_subset_size",
                                                           setup.config.full_geometry.n_full)));
  setup.config.extent_m = config.get_double_or("scene.extent_m", 4.0 * rho);
  setup.config.trials_per_cell = static_cast<int>(config.get_int("montecarlo.trials"));
  setup.config.seed = seed;
  setup.config.threshold_m = config.get_double_or("montecarlo.threshold_m", rho / 8.0);
  setup.config.threads = threads;
  setup.config.solver = build_solver_config(config);
  setup.config.gbcs_grid_step_m = config.get_double_or("gbcs.grid_step_m", 0.0);
  setup.config.collect_timing = config.get_bool_or("montecarlo.timing", false);

  struct MethodEntry {
    Method method;
    int snapshots;
  };
  std::vector<MethodEntry> methods;
  for (const std::string& tag : [&] {
         std::vector<std::string> tags;
         std::stringstream ss(config.get_string_or("montecarlo.methods", "empast"));
         std::string item;
         while (std::getline(ss, item, ',')) {
           item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
           if (!item.empty()) tags.push_back(item);
         }
         return tags;
       }()) {
    // "empast:8" carries the snapshot count; bare tags default to L from
    // emmv.snapshots (gridless SMV methods always run L = 1).
    const auto colon = tag.find(':');
    const std::string name = colon == std::string::npos ? tag : tag.substr(0, colon);
    const Method method = parse_method(name);
    int l = static_cast<int>(config.get_int_or("emmv.snapshots", 1));
    if (colon != std::string::npos) l = std::stoi(tag.substr(colon + 1));
    if (method != Method::empast) l = 1;
    methods.push_back({method, l});
  }

  setup.axis = config.get_string_or("montecarlo.axis", "snr");
  const std::vector<double> values = config.get_double_list("montecarlo.values");
  const int k = static_cast<int>(config.get_int_or("montecarlo.k", 1));
  const double snr_db = config.get_double_or("montecarlo.snr_db", 10.0);
  const double alpha = config.get_double_or("montecarlo.alpha", 0.0);

  for (const MethodEntry& me : methods) {
    for (double v : values) {
      McCell cell;
      cell.method = me.method;
      cell.snapshots = me.snapshots;
      cell.n_scatterers = k;
      cell.snr_db = snr_db;
      cell.separation_m = alpha > 0.0 ? alpha * rho : 0.0;
      if (setup.axis == "snr") {
        cell.snr_db = v;
      } else if (setup.axis == "alpha") {
        cell.n_scatterers = 2;
        cell.separation_m = v * rho;
      } else if (setup.axis == "L") {
        if (me.method == Method::empast) cell.snapshots = static_cast<int>(v);
      } else {
        throw ConfigError("montecarlo.axis must be one of snr|alpha|L");
      }
      setup.cells.push_back(cell);
    }
  }
  return setup;
}

BuildingSceneConfig build_building_scene_config(const Config& config) {
  BuildingSceneConfig c;
  c.building_height_m = config.get_double_or("scene3d.height_m", c.building_height_m);
  c.incidence_deg = config.get_double_or("scene3d.incidence_deg", c.incidence_deg);
  c.wall_ground_range_m = config.get_double_or("scene3d.wall_range_m", c.wall_ground_range_m);
  c.roof_depth_m = config.get_double_or("scene3d.roof_depth_m", c.roof_depth_m);
  c.ground_front_m = config.get_double_or("scene3d.ground_front_m", c.ground_front_m);
  c.ground_back_m = config.get_double_or("scene3d.ground_back_m", c.ground_back_m);
  c.azimuth_extent_m = config.get_double_or("scene3d.azimuth_extent_m", c.azimuth_extent_m);
  c.azimuth_spacing_m = config.get_double_or("scene3d.azimuth_spacing_m", c.azimuth_spacing_m);
  c.range_spacing_m = config.get_double_or("scene3d.range_spacing_m", c.range_spacing_m);
  c.extent_m = config.get_double_or("scene3d.extent_m", c.extent_m);
  c.truth_spacing_m = config.get_double_or("scene3d.truth_spacing_m", c.truth_spacing_m);
  return c;
}

std::uint64_t resolve_seed(const Config& config, std::uint64_t cli_seed) {
  if (cli_seed != 0) return cli_seed;
  return static_cast<std::uint64_t>(config.get_int_or("seed", 1));
}

}  // namespace tomo
