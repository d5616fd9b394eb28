#pragma once

#include <cstdint>
#include <vector>

#include "tomo/pipeline.hpp"

namespace tomo {

struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> powers;  // optional, empty or one per point

  int size() const { return static_cast<int>(points.size()); }
};

/// Ground / wall / roof synthetic building scene. The radar looks along
/// increasing ground range y from above at the given incidence angle; x is
/// azimuth and z is height. Per-pixel elevations are taken relative to a
/// mid-height deramping reference so the scene sits centered inside the
/// per-pixel estimation window.
struct BuildingSceneConfig {
  double building_height_m = 20.0;
  double incidence_deg = 45.0;
  double wall_ground_range_m = 100.0;  // y of the wall plane
  double roof_depth_m = 25.0;          // building extent along y
  double ground_front_m = 14.0;        // front ground strip ending at the layover onset
  double ground_back_m = 18.0;         // rear ground strip starting past the shadow
  double azimuth_extent_m = 6.0;
  double azimuth_spacing_m = 1.0;
  double range_spacing_m = 1.0;
  double extent_m = 30.0;       // per-pixel elevation window S1
  double truth_spacing_m = 0.5; // ground-truth sampling density
};

/// Elevation content of one azimuth-range pixel: zero, one or two
/// scatterers (layover pixels carry the wall plus the roof).
struct PixelTruth {
  double azimuth_m = 0.0;
  double slant_range_m = 0.0;
  std::vector<double> elevations_rel_m;
};

struct BuildingScene {
  BuildingSceneConfig config;
  std::vector<PixelTruth> pixels;
  PointCloud truth;

  /// Absolute elevation of the deramping reference at a slant range.
  double elevation_reference(double slant_range_m) const;
  /// Back-projection of (azimuth, slant range, relative elevation).
  Eigen::Vector3d to_xyz(double azimuth_m, double slant_range_m, double rel_elevation_m) const;
};

BuildingScene synth_building_scene(const BuildingSceneConfig& config);

struct ReconstructionConfig {
  Method method = Method::empast;
  int snapshots = 1;
  double snr_db = 10.0;
  std::uint64_t seed = 0;
  int subset_size = 0;  // M-of-N element subset, redrawn per pixel
  SolverConfig solver;
  double gbcs_grid_step_m = 0.0;
  int threads = 0;
};

/// Simulates every non-empty pixel at the requested SNR, runs the selected
/// method and back-projects the estimates; failed pixels are skipped.
PointCloud reconstruct_cloud(const BuildingScene& scene, const ArrayGeometry& full_geometry,
                             const ReconstructionConfig& config);

struct Plane {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();  // unit length
  double offset = 0.0;                                // normal . x = offset

  double distance(const Eigen::Vector3d& p) const { return std::abs(normal.dot(p) - offset); }
};

struct RansacResult {
  Plane plane;
  std::vector<int> inliers;
};

/// Best-consensus plane over random minimal samples, least-squares refit
/// on the inliers. Throws on fewer than 3 non-collinear points.
RansacResult ransac_plane(const PointCloud& cloud, double inlier_tol_m, int iterations,
                          std::uint64_t seed);

struct HeightStats {
  double mu = 0.0;     // mean |z - true|
  double sigma = 0.0;  // sample standard deviation of z
  int n = 0;
};

HeightStats plane_height_stats(const std::vector<Eigen::Vector3d>& points, double true_height_m);

/// Ground (largest consensus) and roof (next) extraction; the wall, when
/// present, is the remaining near-vertical plane.
struct BuildingPlanes {
  RansacResult ground;
  RansacResult roof;
  bool wall_found = false;
  RansacResult wall;
};

BuildingPlanes extract_building_planes(const PointCloud& cloud, double inlier_tol_m,
                                       int iterations, std::uint64_t seed);

struct CloudMetrics {
  double accuracy_mu = 0.0;
  double accuracy_sigma = 0.0;
  double completeness_mu = 0.0;
  double completeness_sigma = 0.0;
};

/// Accuracy: nearest-truth distance per reconstructed point. Completeness:
/// nearest-reconstruction distance per truth point. Both as mean and
/// sample standard deviation, nearest neighbors via a k-d tree.
CloudMetrics cloud_accuracy_completeness(const PointCloud& reconstructed,
                                         const PointCloud& ground_truth);

/// Nearest-neighbor distances from each query point to the cloud.
std::vector<double> nearest_distances(const std::vector<Eigen::Vector3d>& from,
                                      const std::vector<Eigen::Vector3d>& to);

}  // namespace tomo
