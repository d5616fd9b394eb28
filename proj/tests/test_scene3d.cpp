#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "tomo/scene3d.hpp"

using namespace tomo;
using tomo::testing::standard_geometry;

namespace {

BuildingSceneConfig small_scene() {
  BuildingSceneConfig cfg;
  cfg.azimuth_extent_m = 2.0;
  cfg.azimuth_spacing_m = 1.0;
  cfg.range_spacing_m = 1.0;
  cfg.truth_spacing_m = 1.0;
  return cfg;
}

}  // namespace

TEST_CASE("pixel categories: ground only, layover pair, shadow gap") {
  const BuildingScene scene = synth_building_scene(small_scene());
  const double th = scene.config.incidence_deg * tomo::kPi / 180.0;
  const double h = scene.config.building_height_m;
  const double r_top = scene.config.wall_ground_range_m * std::sin(th) - h * std::cos(th);
  const double r_bottom = scene.config.wall_ground_range_m * std::sin(th);

  int ground_only = 0, layover = 0, empty = 0;
  for (const PixelTruth& px : scene.pixels) {
    if (px.elevations_rel_m.empty()) ++empty;
    if (px.elevations_rel_m.size() == 1) ++ground_only;
    if (px.elevations_rel_m.size() == 2) {
      ++layover;
      CHECK(px.slant_range_m >= r_top - 1e-9);
      CHECK(px.slant_range_m < r_bottom + 1e-9);
    }
    CHECK(px.elevations_rel_m.size() <= 2);
  }
  CHECK(ground_only > 0);
  CHECK(empty > 0);
  // visible layover band at least 10 pixels wide on the default geometry
  CHECK(layover >= 10 * 2 / static_cast<int>(small_scene().azimuth_extent_m));
}

TEST_CASE("layover pixel contents match an independent ray intersection") {
  const BuildingScene scene = synth_building_scene(small_scene());
  const double th = 45.0 * tomo::kPi / 180.0;
  const double h = 20.0, y_w = 100.0;
  // pick the pixel nearest slant range 60 on the first azimuth line
  const PixelTruth* hit = nullptr;
  for (const PixelTruth& px : scene.pixels)
    if (px.azimuth_m == 0.0 && std::abs(px.slant_range_m - 60.0) < 0.5) hit = &px;
  REQUIRE(hit != nullptr);
  REQUIRE(hit->elevations_rel_m.size() == 2);

  // independent computation: wall z from r = y_w sin - z cos; both
  // elevations relative to the mid-height reference
  const double r = hit->slant_range_m;
  const double z_wall = (y_w * std::sin(th) - r) / std::cos(th);
  const double expect_wall = (z_wall - h / 2.0) / std::sin(th);
  const double expect_roof = h / (2.0 * std::sin(th));
  CHECK(hit->elevations_rel_m[0] == doctest::Approx(expect_wall).epsilon(1e-12));
  CHECK(hit->elevations_rel_m[1] == doctest::Approx(expect_roof).epsilon(1e-12));

  // forward mapping puts them back on the wall and roof planes
  const Eigen::Vector3d wall_pt = scene.to_xyz(0.0, r, hit->elevations_rel_m[0]);
  CHECK(wall_pt.y() == doctest::Approx(y_w).epsilon(1e-9));
  CHECK(wall_pt.z() == doctest::Approx(z_wall).epsilon(1e-9));
  const Eigen::Vector3d roof_pt = scene.to_xyz(0.0, r, hit->elevations_rel_m[1]);
  CHECK(roof_pt.z() == doctest::Approx(h).epsilon(1e-9));
}

TEST_CASE("zero-height building degenerates to ground returns only") {
  BuildingSceneConfig cfg = small_scene();
  cfg.building_height_m = 0.0;
  const BuildingScene scene = synth_building_scene(cfg);
  for (const PixelTruth& px : scene.pixels) CHECK(px.elevations_rel_m.size() <= 1);
  for (const auto& p : scene.truth.points) CHECK(p.z() == 0.0);
}

TEST_CASE("noiseless single-scatterer pixels reconstruct to small height error") {
  BuildingSceneConfig cfg = small_scene();
  const BuildingScene scene = synth_building_scene(cfg);
  const ArrayGeometry g = standard_geometry();
  const double rho = rayleigh_resolution(g);

  ReconstructionConfig rc;
  rc.method = Method::empast;
  rc.snapshots = 4;
  rc.snr_db = 200.0;  // effectively noiseless
  rc.seed = 5;
  rc.subset_size = 8;
  rc.threads = 2;
  const PointCloud cloud = reconstruct_cloud(scene, g, rc);
  REQUIRE(cloud.size() > 0);

  // every reconstructed point should sit near one of the three planes
  int good = 0;
  for (const auto& p : cloud.points) {
    const double d_ground = std::abs(p.z());
    const double d_roof = std::abs(p.z() - cfg.building_height_m);
    const double d_wall = std::abs(p.y() - cfg.wall_ground_range_m);
    if (std::min({d_ground, d_roof, d_wall}) < 0.05 * rho) ++good;
  }
  CHECK(static_cast<double>(good) / cloud.size() >= 0.95);
}

TEST_CASE("reconstruction is reproducible for a fixed seed") {
  BuildingSceneConfig cfg = small_scene();
  cfg.azimuth_extent_m = 1.0;
  const BuildingScene scene = synth_building_scene(cfg);
  const ArrayGeometry g = standard_geometry();
  ReconstructionConfig rc;
  rc.method = Method::past;
  rc.snr_db = 10.0;
  rc.seed = 11;
  rc.subset_size = 8;
  rc.threads = 2;
  const PointCloud a = reconstruct_cloud(scene, g, rc);
  rc.threads = 1;
  const PointCloud b = reconstruct_cloud(scene, g, rc);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i) CHECK((a.points[i] - b.points[i]).norm() == 0.0);
}

TEST_CASE("ransac recovers an exact plane and survives outliers") {
  PointCloud cloud;
  RngStream rng(3);
  const Eigen::Vector3d n0 = Eigen::Vector3d(0.2, -0.3, 1.0).normalized();
  const double d0 = 4.0;
  for (int i = 0; i < 120; ++i) {
    // points on the plane n0 . p = d0
    Eigen::Vector3d p(rng.uniform(-10, 10), rng.uniform(-10, 10), 0.0);
    p.z() = (d0 - n0.x() * p.x() - n0.y() * p.y()) / n0.z();
    cloud.points.push_back(p);
  }
  const RansacResult exact = ransac_plane(cloud, 0.1, 200, 7);
  CHECK(static_cast<int>(exact.inliers.size()) == cloud.size());

  for (int i = 0; i < 30; ++i)  // 20% uniform outliers
    cloud.points.emplace_back(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-30, 30));
  const RansacResult noisy = ransac_plane(cloud, 0.1, 500, 7);
  const double angle = std::acos(std::min(1.0, std::abs(noisy.plane.normal.dot(n0))));
  CHECK(angle < 1.0 * tomo::kPi / 180.0);

  PointCloud line;
  for (int i = 0; i < 10; ++i) line.points.emplace_back(i, 2.0 * i, -i);
  CHECK_THROWS_AS(ransac_plane(line, 0.1, 100, 1), std::invalid_argument);
  PointCloud two;
  two.points.emplace_back(0, 0, 0);
  two.points.emplace_back(1, 0, 0);
  CHECK_THROWS_AS(ransac_plane(two, 0.1, 100, 1), std::invalid_argument);
}

TEST_CASE("height stats hand values") {
  std::vector<Eigen::Vector3d> pts = {{0, 0, 19.8}, {1, 0, 20.2}};
  const HeightStats st = plane_height_stats(pts, 20.0);
  CHECK(st.mu == doctest::Approx(0.2));
  CHECK(st.sigma == doctest::Approx(0.2828).epsilon(1e-3));

  std::vector<Eigen::Vector3d> offset = {{0, 0, 21.0}, {1, 0, 21.0}, {2, 0, 21.0}};
  const HeightStats st2 = plane_height_stats(offset, 20.0);
  CHECK(st2.mu == doctest::Approx(1.0));
  CHECK(st2.sigma == doctest::Approx(0.0));

  std::vector<Eigen::Vector3d> exact = {{0, 0, 20.0}, {1, 1, 20.0}};
  const HeightStats st3 = plane_height_stats(exact, 20.0);
  CHECK(st3.mu == 0.0);
  CHECK(st3.sigma == 0.0);
}

TEST_CASE("cloud metrics: identity, translation, and brute-force agreement") {
  RngStream rng(13);
  PointCloud a;
  for (int i = 0; i < 40; ++i)
    a.points.emplace_back(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));

  const CloudMetrics self = cloud_accuracy_completeness(a, a);
  CHECK(self.accuracy_mu == 0.0);
  CHECK(self.completeness_mu == 0.0);

  PointCloud shifted = a;
  for (auto& p : shifted.points) p.z() += 1.0;
  const CloudMetrics shift = cloud_accuracy_completeness(shifted, a);
  CHECK(shift.accuracy_mu <= 1.0 + 1e-12);
  CHECK(shift.completeness_mu <= 1.0 + 1e-12);

  PointCloud b;
  for (int i = 0; i < 25; ++i)
    b.points.emplace_back(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
  const std::vector<double> fast = nearest_distances(a.points, b.points);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    double brute = 1e300;
    for (const auto& q : b.points) brute = std::min(brute, (a.points[i] - q).norm());
    CHECK(fast[i] == doctest::Approx(brute).epsilon(1e-12));
  }

  // accuracy(A,B) mirrors completeness(B,A) by definition
  const CloudMetrics ab = cloud_accuracy_completeness(a, b);
  const CloudMetrics ba = cloud_accuracy_completeness(b, a);
  CHECK(ab.accuracy_mu == doctest::Approx(ba.completeness_mu));
  CHECK(ab.completeness_mu == doctest::Approx(ba.accuracy_mu));

  PointCloud empty;
  CHECK_THROWS_AS(cloud_accuracy_completeness(empty, a), std::invalid_argument);
}

TEST_CASE("building plane extraction finds ground below roof") {
  RngStream rng(21);
  PointCloud cloud;
  for (int i = 0; i < 150; ++i)  // ground has the largest consensus
    cloud.points.emplace_back(rng.uniform(0, 10), rng.uniform(0, 30), rng.normal() * 0.05);
  for (int i = 0; i < 90; ++i)
    cloud.points.emplace_back(rng.uniform(0, 10), rng.uniform(30, 50),
                              20.0 + rng.normal() * 0.05);
  for (int i = 0; i < 60; ++i)  // vertical wall
    cloud.points.emplace_back(rng.uniform(0, 10), 30.0 + rng.normal() * 0.05,
                              rng.uniform(0, 20));
  const BuildingPlanes planes = extract_building_planes(cloud, 0.5, 500, 3);
  const HeightStats gs = [&] {
    std::vector<Eigen::Vector3d> pts;
    for (int i : planes.ground.inliers) pts.push_back(cloud.points[i]);
    return plane_height_stats(pts, 0.0);
  }();
  const HeightStats rs = [&] {
    std::vector<Eigen::Vector3d> pts;
    for (int i : planes.roof.inliers) pts.push_back(cloud.points[i]);
    return plane_height_stats(pts, 20.0);
  }();
  CHECK(gs.mu < 0.2);
  CHECK(rs.mu < 0.2);
  CHECK(planes.wall_found);
  CHECK(std::abs(planes.wall.plane.normal.z()) < 0.1);
}
