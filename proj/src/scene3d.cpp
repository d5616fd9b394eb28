#include "tomo/scene3d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tomo/parallel.hpp"

namespace tomo {

namespace {

double deg2rad(double d) { return d * tomo::kPi / 180.0; }

}  // namespace

double BuildingScene::elevation_reference(double slant_range_m) const {
  const double th = deg2rad(config.incidence_deg);
  return slant_range_m * std::cos(th) / std::sin(th) +
         config.building_height_m / (2.0 * std::sin(th));
}

Eigen::Vector3d BuildingScene::to_xyz(double azimuth_m, double slant_range_m,
                                      double rel_elevation_m) const {
  const double th = deg2rad(config.incidence_deg);
  const double s_abs = elevation_reference(slant_range_m) + rel_elevation_m;
  const double y = slant_range_m * std::sin(th) + s_abs * std::cos(th);
  const double z = -slant_range_m * std::cos(th) + s_abs * std::sin(th);
  return {azimuth_m, y, z};
}

BuildingScene synth_building_scene(const BuildingSceneConfig& config) {
  if (config.building_height_m < 0.0 || config.roof_depth_m <= 0.0 ||
      config.range_spacing_m <= 0.0 || config.azimuth_spacing_m <= 0.0 ||
      config.truth_spacing_m <= 0.0)
    throw std::invalid_argument("synth_building_scene: dimensions must be positive");
  const double th = deg2rad(config.incidence_deg);
  const double sin_t = std::sin(th);
  const double cos_t = std::cos(th);
  const double h = config.building_height_m;
  const double y_wall = config.wall_ground_range_m;
  const double y_roof_end = y_wall + config.roof_depth_m;
  const double y_front_end = y_wall - h * cos_t / sin_t;   // layover onset on the ground
  const double y_front_start = y_front_end - config.ground_front_m;
  const double y_back_start = y_roof_end + h * sin_t / cos_t;  // shadow end
  const double y_back_end = y_back_start + config.ground_back_m;

  const double r_top = y_wall * sin_t - h * cos_t;     // wall top == roof front edge
  const double r_bottom = y_wall * sin_t;              // wall base
  const double r_roof_end = y_roof_end * sin_t - h * cos_t;
  const double r_min = y_front_start * sin_t;
  const double r_max = y_back_end * sin_t;

  const double ground_rel = -h / (2.0 * sin_t);
  const double roof_rel = +h / (2.0 * sin_t);

  BuildingScene scene;
  scene.config = config;

  const int n_az = std::max(1, static_cast<int>(std::round(config.azimuth_extent_m /
                                                           config.azimuth_spacing_m)));
  const int n_rg = static_cast<int>(std::floor((r_max - r_min) / config.range_spacing_m)) + 1;
  for (int ia = 0; ia < n_az; ++ia) {
    const double x = ia * config.azimuth_spacing_m;
    for (int ir = 0; ir < n_rg; ++ir) {
      const double r = r_min + ir * config.range_spacing_m;
      PixelTruth px;
      px.azimuth_m = x;
      px.slant_range_m = r;

      const double y_ground = r / sin_t;
      const bool front = y_ground >= y_front_start && y_ground < y_front_end;
      const bool back = y_ground >= y_back_start && y_ground < y_back_end;
      if (front || back) px.elevations_rel_m.push_back(ground_rel);
      if (r >= r_top && r < r_bottom && h > 0.0) {
        const double z = (r_bottom - r) / cos_t;  // wall height at this range
        px.elevations_rel_m.push_back((z - h / 2.0) / sin_t);
      }
      if (r >= r_top && r <= r_roof_end) px.elevations_rel_m.push_back(roof_rel);

      // Collapse coincident returns (possible only in degenerate scenes).
      std::sort(px.elevations_rel_m.begin(), px.elevations_rel_m.end());
      px.elevations_rel_m.erase(std::unique(px.elevations_rel_m.begin(),
                                            px.elevations_rel_m.end(),
                                            [](double a, double b) { return b - a < 1e-9; }),
                                px.elevations_rel_m.end());
      scene.pixels.push_back(std::move(px));
    }
  }

  // Ground-truth samples on the four plane patches.
  const double d = config.truth_spacing_m;
  const auto add_point = [&](double x, double y, double z) {
    scene.truth.points.emplace_back(x, y, z);
  };
  for (double x = 0.0; x < config.azimuth_extent_m; x += d) {
    for (double y = y_front_start; y < y_front_end; y += d) add_point(x, y, 0.0);
    for (double y = y_back_start; y < y_back_end; y += d) add_point(x, y, 0.0);
    for (double y = y_wall; y <= y_roof_end; y += d) add_point(x, y, h);
    if (h > 0.0)
      for (double z = 0.0; z <= h; z += d) add_point(x, y_wall, z);
  }
  return scene;
}

PointCloud reconstruct_cloud(const BuildingScene& scene, const ArrayGeometry& full_geometry,
                             const ReconstructionConfig& config) {
  const int n_pixels = static_cast<int>(scene.pixels.size());
  std::vector<PointCloud> per_pixel(n_pixels);

  parallel_for(n_pixels, config.threads, [&](int i) {
    const PixelTruth& px = scene.pixels[i];
    if (px.elevations_rel_m.empty()) return;
    RngStream rng(derive_seed(config.seed, 7777, static_cast<std::uint64_t>(i)));

    ArrayGeometry geometry = full_geometry;
    const int m = config.subset_size > 0 ? config.subset_size : full_geometry.n_full;
    geometry.observed_indices = random_subset(geometry.n_full, m, rng);

    const int snapshots = config.method == Method::empast ? config.snapshots : 1;
    const Scene pixel_scene = make_random_phase_scene(px.elevations_rel_m, 1.0, snapshots,
                                                      scene.config.extent_m, rng);
    const double sigma = snr_to_variance(pixel_scene, geometry, config.snr_db);
    const Observation obs = simulate_observation(geometry, pixel_scene, sigma, rng.engine()());

    MethodOptions options;
    options.method = config.method;
    options.solver = config.solver;
    options.gbcs_grid_step_m = config.gbcs_grid_step_m;
    options.expected_order = 0;
    options.max_auto_order = 2;  // at most two scatterers share a pixel here

    try {
      const EstimationResult est = estimate_elevations(geometry, obs, options,
                                                       scene.config.extent_m);
      for (std::size_t k = 0; k < est.elevations_m.size(); ++k) {
        per_pixel[i].points.push_back(
            scene.to_xyz(px.azimuth_m, px.slant_range_m, est.elevations_m[k]));
        per_pixel[i].powers.push_back(k < est.powers.size() ? est.powers[k] : 0.0);
      }
    } catch (const std::exception&) {
      // failed pixel: skipped
    }
  });

  PointCloud cloud;
  for (const PointCloud& pc : per_pixel) {
    cloud.points.insert(cloud.points.end(), pc.points.begin(), pc.points.end());
    cloud.powers.insert(cloud.powers.end(), pc.powers.begin(), pc.powers.end());
  }
  return cloud;
}

namespace {

Plane fit_plane_least_squares(const std::vector<Eigen::Vector3d>& pts,
                              const std::vector<int>& idx) {
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (int i : idx) centroid += pts[i];
  centroid /= static_cast<double>(idx.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (int i : idx) {
    const Eigen::Vector3d d = pts[i] - centroid;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  Plane plane;
  plane.normal = eig.eigenvectors().col(0).normalized();
  plane.offset = plane.normal.dot(centroid);
  return plane;
}

}  // namespace

RansacResult ransac_plane(const PointCloud& cloud, double inlier_tol_m, int iterations,
                          std::uint64_t seed) {
  const auto& pts = cloud.points;
  const int n = cloud.size();
  if (n < 3) throw std::invalid_argument("ransac_plane: need at least 3 points");
  RngStream rng(seed);

  int best_count = -1;
  Plane best_plane;
  for (int it = 0; it < iterations; ++it) {
    const int a = rng.uniform_int(0, n - 1);
    const int b = rng.uniform_int(0, n - 1);
    const int c = rng.uniform_int(0, n - 1);
    if (a == b || a == c || b == c) continue;
    const Eigen::Vector3d nrm = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    const double len = nrm.norm();
    if (len < 1e-12) continue;  // collinear sample
    Plane plane;
    plane.normal = nrm / len;
    plane.offset = plane.normal.dot(pts[a]);
    int count = 0;
    for (const Eigen::Vector3d& p : pts)
      if (plane.distance(p) <= inlier_tol_m) ++count;
    if (count > best_count) {
      best_count = count;
      best_plane = plane;
    }
  }
  if (best_count < 3)
    throw std::invalid_argument("ransac_plane: no non-degenerate sample found (collinear data?)");

  RansacResult result;
  result.plane = best_plane;
  for (int i = 0; i < n; ++i)
    if (best_plane.distance(pts[i]) <= inlier_tol_m) result.inliers.push_back(i);
  result.plane = fit_plane_least_squares(pts, result.inliers);
  // Refresh the inlier set against the refit plane.
  std::vector<int> refreshed;
  for (int i = 0; i < n; ++i)
    if (result.plane.distance(pts[i]) <= inlier_tol_m) refreshed.push_back(i);
  result.inliers = std::move(refreshed);
  return result;
}

HeightStats plane_height_stats(const std::vector<Eigen::Vector3d>& points, double true_height_m) {
  HeightStats st;
  st.n = static_cast<int>(points.size());
  if (st.n == 0) throw std::invalid_argument("plane_height_stats: empty inlier set");
  double mean_z = 0.0;
  for (const auto& p : points) {
    st.mu += std::abs(p.z() - true_height_m);
    mean_z += p.z();
  }
  st.mu /= st.n;
  mean_z /= st.n;
  if (st.n > 1) {
    double var = 0.0;
    for (const auto& p : points) var += (p.z() - mean_z) * (p.z() - mean_z);
    st.sigma = std::sqrt(var / (st.n - 1));
  }
  return st;
}

BuildingPlanes extract_building_planes(const PointCloud& cloud, double inlier_tol_m,
                                       int iterations, std::uint64_t seed) {
  BuildingPlanes out;
  RansacResult first = ransac_plane(cloud, inlier_tol_m, iterations, seed);

  std::vector<int> rest;
  std::vector<bool> used(cloud.points.size(), false);
  for (int i : first.inliers) used[i] = true;
  for (int i = 0; i < cloud.size(); ++i)
    if (!used[i]) rest.push_back(i);

  PointCloud remainder;
  for (int i : rest) remainder.points.push_back(cloud.points[i]);
  RansacResult second = ransac_plane(remainder, inlier_tol_m, iterations, seed + 1);
  for (int& i : second.inliers) i = rest[i];  // back to original indices

  const auto mean_z = [&](const RansacResult& r) {
    double z = 0.0;
    for (int i : r.inliers) z += cloud.points[i].z();
    return z / r.inliers.size();
  };
  if (mean_z(first) <= mean_z(second)) {
    out.ground = first;
    out.roof = second;
  } else {
    out.ground = second;
    out.roof = first;
  }

  std::vector<int> rest2;
  std::vector<bool> used2(cloud.points.size(), false);
  for (int i : out.ground.inliers) used2[i] = true;
  for (int i : out.roof.inliers) used2[i] = true;
  for (int i = 0; i < cloud.size(); ++i)
    if (!used2[i]) rest2.push_back(i);
  if (rest2.size() >= 3) {
    PointCloud wall_cloud;
    for (int i : rest2) wall_cloud.points.push_back(cloud.points[i]);
    try {
      RansacResult wall = ransac_plane(wall_cloud, inlier_tol_m, iterations, seed + 2);
      if (std::abs(wall.plane.normal.z()) < 0.1) {
        for (int& i : wall.inliers) i = rest2[i];
        out.wall = wall;
        out.wall_found = true;
      }
    } catch (const std::invalid_argument&) {
      // too few or degenerate leftover points: no wall
    }
  }
  return out;
}

namespace {

/// Minimal 3-d k-d tree over an index permutation; median split per axis.
class KdTree {
 public:
  explicit KdTree(const std::vector<Eigen::Vector3d>& pts) : pts_(pts), idx_(pts.size()) {
    std::iota(idx_.begin(), idx_.end(), 0);
    if (!pts_.empty()) build(0, static_cast<int>(pts_.size()), 0);
  }

  double nearest_distance(const Eigen::Vector3d& q) const {
    double best = std::numeric_limits<double>::infinity();
    search(q, 0, static_cast<int>(pts_.size()), 0, best);
    return std::sqrt(best);
  }

 private:
  void build(int lo, int hi, int axis) {
    if (hi - lo <= 1) return;
    const int mid = (lo + hi) / 2;
    std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi,
                     [&](int a, int b) { return pts_[a](axis) < pts_[b](axis); });
    build(lo, mid, (axis + 1) % 3);
    build(mid + 1, hi, (axis + 1) % 3);
  }

  void search(const Eigen::Vector3d& q, int lo, int hi, int axis, double& best) const {
    if (hi <= lo) return;
    const int mid = (lo + hi) / 2;
    const Eigen::Vector3d& p = pts_[idx_[mid]];
    best = std::min(best, (p - q).squaredNorm());
    const double delta = q(axis) - p(axis);
    const int next = (axis + 1) % 3;
    if (delta < 0.0) {
      search(q, lo, mid, next, best);
      if (delta * delta < best) search(q, mid + 1, hi, next, best);
    } else {
      search(q, mid + 1, hi, next, best);
      if (delta * delta < best) search(q, lo, mid, next, best);
    }
  }

  const std::vector<Eigen::Vector3d>& pts_;
  std::vector<int> idx_;
};

void mean_std(const std::vector<double>& v, double& mu, double& sigma) {
  mu = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double var = 0.0;
  for (double x : v) var += (x - mu) * (x - mu);
  sigma = v.size() > 1 ? std::sqrt(var / (v.size() - 1)) : 0.0;
}

}  // namespace

std::vector<double> nearest_distances(const std::vector<Eigen::Vector3d>& from,
                                      const std::vector<Eigen::Vector3d>& to) {
  const KdTree tree(to);
  std::vector<double> out(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) out[i] = tree.nearest_distance(from[i]);
  return out;
}

CloudMetrics cloud_accuracy_completeness(const PointCloud& reconstructed,
                                         const PointCloud& ground_truth) {
  if (reconstructed.size() == 0 || ground_truth.size() == 0)
    throw std::invalid_argument("cloud metrics: empty point cloud");
  CloudMetrics m;
  const std::vector<double> acc = nearest_distances(reconstructed.points, ground_truth.points);
  const std::vector<double> comp = nearest_distances(ground_truth.points, reconstructed.points);
  mean_std(acc, m.accuracy_mu, m.accuracy_sigma);
  mean_std(comp, m.completeness_mu, m.completeness_sigma);
  return m;
}

}  // namespace tomo
