#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "tomo/io.hpp"
#include "tomo/setup.hpp"
#include "tomo/version.hpp"

namespace fs = std::filesystem;
using namespace tomo;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int threads = 0;
  std::vector<std::string> formats = {"csv", "svg", "xyz"};

  bool wants(const std::string& f) const {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  }
};

int effective_threads(int cli_threads) {
  if (const char* env = std::getenv("GRIDLESS_TOMO_THREADS")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError("GRIDLESS_TOMO_THREADS is not an integer");
    }
  }
  return cli_threads;
}

int count_observed(const Config& config) {
  if (config.has("geometry.n_observed"))
    return static_cast<int>(config.get_int("geometry.n_observed"));
  if (config.has("geometry.observed_indices"))
    return static_cast<int>(config.get_int_list("geometry.observed_indices").size());
  if (config.has("geometry.random_subset_size"))
    return static_cast<int>(config.get_int("geometry.random_subset_size"));
  return static_cast<int>(config.get_int("geometry.n_full"));
}

int cmd_tau(const GlobalArgs& args) {
  const Config config = Config::parse_file(args.config_path);
  RegularizationInput in;
  in.noise_variance = config.get_double("noise.variance");
  in.n_full = static_cast<int>(config.get_int("geometry.n_full"));
  in.n_observed = count_observed(config);
  in.snapshots = static_cast<int>(config.get_int_or("emmv.snapshots", 1));
  const double p = regularization_p(in.snapshots, in.n_full);
  const double tau = regularization_tau(in);
  std::printf("p = %.6g\n", p);
  std::printf("tau = %.6g\n", tau);
  return 0;
}

int cmd_reconstruct(const GlobalArgs& args, const std::string& input_path) {
  const Config config = Config::parse_file(args.config_path);
  const std::uint64_t seed = resolve_seed(config, args.seed);
  const ArrayGeometry geometry = build_geometry(config, seed);

  Observation obs;
  obs.data = complex_matrix_from_csv_file(input_path);
  obs.noise_variance = config.get_double_or("noise.variance", 0.0);
  if (obs.data.rows() != geometry.n_observed())
    throw DataError("observation has " + std::to_string(obs.data.rows()) +
                    " rows but the geometry observes " + std::to_string(geometry.n_observed()) +
                    " elements");

  MethodOptions options = build_method_options(config);
  const double rho = rayleigh_resolution(geometry);
  const double extent =
      config.get_double_or("scene.extent_m", 0.8 * geometry.unambiguous_window_m());
  const EstimationResult est = estimate_elevations(geometry, obs, options, extent);

  fs::create_directories(args.out_dir);
  std::ostringstream csv;
  csv << "elevation_m,power\n";
  char buf[96];
  for (std::size_t k = 0; k < est.elevations_m.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", est.elevations_m[k],
                  k < est.powers.size() ? est.powers[k] : 0.0);
    csv << buf;
  }
  const std::string out_path = (fs::path(args.out_dir) / "estimates.csv").string();
  write_text_file(out_path, csv.str());
  std::printf("wrote %s (%d scatterers, solver iters %d, residual %.3g)\n", out_path.c_str(),
              est.model_order, est.solver_iters, est.solver_residual);

  RunManifest manifest("reconstruct", config.digest(), seed);
  manifest.add_output(out_path);
  manifest.write(args.out_dir);
  return 0;
}

double axis_value(const std::string& axis, const McRow& row, double rho_s) {
  if (axis == "alpha") return row.cell.separation_m / rho_s;
  if (axis == "L") return row.cell.snapshots;
  return row.cell.snr_db;
}

int cmd_montecarlo(const GlobalArgs& args) {
  const Config config = Config::parse_file(args.config_path);
  const std::uint64_t seed = resolve_seed(config, args.seed);
  MonteCarloSetup setup = build_monte_carlo(config, seed, effective_threads(args.threads));
  const McReport report = run_monte_carlo(setup.config, setup.cells);

  fs::create_directories(args.out_dir);
  RunManifest manifest("montecarlo", config.digest(), seed);

  const std::string csv_path = (fs::path(args.out_dir) / "report.csv").string();
  write_text_file(csv_path, report_to_csv(report, setup.config.collect_timing));
  manifest.add_output(csv_path);

  if (args.wants("svg") && !report.rows.empty()) {
    std::map<std::string, SvgSeries> sigma_series, pd_series;
    for (const McRow& row : report.rows) {
      std::string label = method_name(row.cell.method);
      if (row.cell.method == Method::empast) label += " L=" + std::to_string(row.cell.snapshots);
      const double x = axis_value(setup.axis, row, report.rho_s);
      auto& ss = sigma_series[label];
      ss.label = label;
      if (row.sigma.defined) {
        ss.x.push_back(x);
        ss.y.push_back(row.sigma.value);
      }
      auto& ps = pd_series[label];
      ps.label = label;
      ps.x.push_back(x);
      ps.y.push_back(row.p_d);
    }
    const auto collect = [](const std::map<std::string, SvgSeries>& m) {
      std::vector<SvgSeries> v;
      for (const auto& [k, s] : m) v.push_back(s);
      return v;
    };
    const std::string sigma_path = (fs::path(args.out_dir) / "sigma_s.svg").string();
    write_text_file(sigma_path, render_line_chart("normalized elevation RMSE", setup.axis,
                                                  "sigma_s", collect(sigma_series)));
    manifest.add_output(sigma_path);
    const std::string pd_path = (fs::path(args.out_dir) / "p_d.svg").string();
    write_text_file(pd_path, render_line_chart("probability of detection", setup.axis, "P_D",
                                               collect(pd_series)));
    manifest.add_output(pd_path);
  }
  manifest.write(args.out_dir);
  std::printf("wrote %s (%zu rows)\n", csv_path.c_str(), report.rows.size());
  return 0;
}

int cmd_scene3d(const GlobalArgs& args) {
  const Config config = Config::parse_file(args.config_path);
  const std::uint64_t seed = resolve_seed(config, args.seed);
  const int threads = effective_threads(args.threads);

  const BuildingSceneConfig scene_cfg = build_building_scene_config(config);
  const BuildingScene scene = synth_building_scene(scene_cfg);

  ArrayGeometry geometry;
  geometry.wavelength_m = config.get_double("geometry.wavelength_m");
  geometry.reference_range_m = config.get_double("geometry.reference_range_m");
  geometry.n_full = static_cast<int>(config.get_int("geometry.n_full"));
  geometry.element_spacing_m = config.has("geometry.element_spacing_m")
                                   ? config.get_double("geometry.element_spacing_m")
                                   : config.get_double("geometry.aperture_m") /
                                         (geometry.n_full - 1);
  geometry.observed_indices = all_indices(geometry.n_full);
  geometry.validate();

  std::vector<std::string> method_tags;
  {
    std::stringstream ss(config.get_string_or("scene3d.methods", "empast"));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) method_tags.push_back(item);
    }
  }
  std::vector<double> snrs = config.has("scene3d.snr_values")
                                 ? config.get_double_list("scene3d.snr_values")
                                 : std::vector<double>{config.get_double_or("noise.snr_db", 10.0)};

  fs::create_directories(args.out_dir);
  RunManifest manifest("scene3d", config.digest(), seed);

  const std::string cloud_ext = args.wants("ply") ? "ply" : "xyz";
  const auto write_cloud = [&](const PointCloud& cloud, const std::string& stem) {
    const std::string path = (fs::path(args.out_dir) / (stem + "." + cloud_ext)).string();
    write_text_file(path, cloud_ext == std::string("ply") ? cloud_to_ply(cloud)
                                                          : cloud_to_xyz(cloud));
    manifest.add_output(path);
  };
  write_cloud(scene.truth, "truth");

  std::ostringstream heights_csv, metrics_csv;
  heights_csv << "snr_db,method,plane,mu_m,sigma_m,n_points\n";
  metrics_csv << "snr_db,method,acc_mu_m,acc_sigma_m,comp_mu_m,comp_sigma_m,n_points\n";
  char buf[256];

  for (double snr : snrs) {
    for (const std::string& tag : method_tags) {
      ReconstructionConfig rc;
      rc.method = parse_method(tag);
      rc.snapshots = static_cast<int>(config.get_int_or("emmv.snapshots", 8));
      rc.snr_db = snr;
      rc.seed = derive_seed(seed, 31, static_cast<std::uint64_t>(snr * 100.0 + 1e6));
      rc.subset_size = static_cast<int>(config.get_int_or("geometry.random_subset_size",
                                                          geometry.n_full));
      rc.solver = build_solver_config(config);
      rc.gbcs_grid_step_m = config.get_double_or("gbcs.grid_step_m", 0.0);
      rc.threads = threads;

      const PointCloud cloud = reconstruct_cloud(scene, geometry, rc);
      std::snprintf(buf, sizeof(buf), "recon_%s_snr%g", tag.c_str(), snr);
      write_cloud(cloud, buf);

      if (cloud.size() >= 6 && scene_cfg.building_height_m > 0.0) {
        const BuildingPlanes planes = extract_building_planes(cloud, 0.5, 1000, derive_seed(seed, 37));
        const auto collect = [&](const RansacResult& r) {
          std::vector<Eigen::Vector3d> pts;
          for (int i : r.inliers) pts.push_back(cloud.points[i]);
          return pts;
        };
        const HeightStats gs = plane_height_stats(collect(planes.ground), 0.0);
        const HeightStats rs = plane_height_stats(collect(planes.roof),
                                                  scene_cfg.building_height_m);
        std::snprintf(buf, sizeof(buf), "%g,%s,ground,%.6g,%.6g,%d\n", snr, tag.c_str(), gs.mu,
                      gs.sigma, gs.n);
        heights_csv << buf;
        std::snprintf(buf, sizeof(buf), "%g,%s,roof,%.6g,%.6g,%d\n", snr, tag.c_str(), rs.mu,
                      rs.sigma, rs.n);
        heights_csv << buf;
      }
      if (cloud.size() > 0) {
        const CloudMetrics cm = cloud_accuracy_completeness(cloud, scene.truth);
        std::snprintf(buf, sizeof(buf), "%g,%s,%.6g,%.6g,%.6g,%.6g,%d\n", snr, tag.c_str(),
                      cm.accuracy_mu, cm.accuracy_sigma, cm.completeness_mu, cm.completeness_sigma,
                      cloud.size());
        metrics_csv << buf;
      }
    }
  }

  const std::string heights_path = (fs::path(args.out_dir) / "heights.csv").string();
  write_text_file(heights_path, heights_csv.str());
  manifest.add_output(heights_path);
  const std::string metrics_path = (fs::path(args.out_dir) / "cloud_metrics.csv").string();
  write_text_file(metrics_path, metrics_csv.str());
  manifest.add_output(metrics_path);
  manifest.write(args.out_dir);
  std::printf("wrote %s and %s\n", heights_path.c_str(), metrics_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridless_tomo: gridless super-resolution tomographic elevation reconstruction"};
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "flat dotted-key config file");
  app.add_option("--seed", args.seed, "master seed (overrides the config)");
  app.add_option("--out", args.out_dir, "output directory")->default_val(".");
  app.add_option("--threads", args.threads,
                 "worker threads (0 = hardware; env GRIDLESS_TOMO_THREADS overrides)");
  app.add_option("--format", args.formats, "output formats: csv svg xyz ply");

  auto* tau_cmd = app.add_subcommand("tau", "print the closed-form regularization weight");
  auto* rec_cmd = app.add_subcommand("reconstruct", "estimate elevations from an observation CSV");
  std::string input_path;
  rec_cmd->add_option("--input", input_path, "observation CSV (interleaved re/im columns)")
      ->required();
  auto* mc_cmd = app.add_subcommand("montecarlo", "run a Monte-Carlo sweep");
  auto* s3_cmd = app.add_subcommand("scene3d", "synthesize and reconstruct the building scene");
  auto* ver_cmd = app.add_subcommand("version", "print the tool version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ver_cmd->parsed()) {
      std::printf("gridless_tomo %s\n", kVersion);
      return 0;
    }
    if (args.config_path.empty()) throw ConfigError("--config is required");
    if (tau_cmd->parsed()) return cmd_tau(args);
    if (rec_cmd->parsed()) return cmd_reconstruct(args, input_path);
    if (mc_cmd->parsed()) return cmd_montecarlo(args);
    if (s3_cmd->parsed()) return cmd_scene3d(args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 3;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
