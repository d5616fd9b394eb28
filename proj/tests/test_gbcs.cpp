#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"
#include "tomo/gbcs.hpp"

using namespace tomo;
using tomo::testing::standard_geometry;
using tomo::testing::standard_geometry_subset;

TEST_CASE("dictionary grid counting and column contents") {
  const ArrayGeometry g = standard_geometry_subset({0, 1, 2, 5, 7, 9, 10, 11});
  const double rho = rayleigh_resolution(g);
  const Dictionary d3 = build_dictionary(g, 2.0 * rho, rho);
  CHECK(d3.grid_size() == 3);
  CHECK(d3.grid_elevations_m.front() == doctest::Approx(-rho));
  CHECK(d3.grid_elevations_m.back() == doctest::Approx(rho));

  const Dictionary fine = build_dictionary(g, 4.0 * rho, rho / 8.0);
  CHECK(fine.grid_size() == 33);
  for (int q = 0; q < fine.grid_size(); ++q) {
    const CVec expect = steering_vector(g, fine.grid_elevations_m[q], true);
    CHECK((fine.matrix.col(q) - expect).norm() < 1e-14);
    for (int i = 0; i < fine.matrix.rows(); ++i)
      CHECK(std::abs(fine.matrix(i, q)) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(build_dictionary(g, 0.5 * rho, rho), std::invalid_argument);
}

TEST_CASE("zero data yields the zero solution") {
  const ArrayGeometry g = standard_geometry_subset({0, 2, 4, 6, 8, 10});
  const Dictionary dict = build_dictionary(g, 18.0, rayleigh_resolution(g) / 8.0);
  const L1Result res = solve_l1(CVec::Zero(6), dict, 0.5);
  CHECK(res.gamma.norm() == 0.0);
}

TEST_CASE("on-grid scatterer produces a dominant spike at its grid index") {
  const ArrayGeometry g = standard_geometry_subset({0, 1, 3, 4, 6, 8, 9, 11});
  const double rho = rayleigh_resolution(g);
  const Dictionary dict = build_dictionary(g, 4.0 * rho, rho / 8.0);
  const int true_idx = 21;
  const CVec gvec = dict.matrix.col(true_idx);
  const L1Result res = solve_l1(gvec, dict, 1e-4, 5000, 1e-14);
  int best = 0;
  res.gamma.cwiseAbs().maxCoeff(&best);
  CHECK(best == true_idx);
  double second = 0.0;
  for (int q = 0; q < dict.grid_size(); ++q)
    if (q != best) second = std::max(second, std::abs(res.gamma(q)));
  CHECK(std::abs(res.gamma(best)) >= 10.0 * second);  // >= 20 dB separation
}

TEST_CASE("threshold at the correlation sup kills the solution") {
  const ArrayGeometry g = standard_geometry_subset({0, 1, 2, 4, 7, 9, 10, 11});
  const Dictionary dict = build_dictionary(g, 18.0, rayleigh_resolution(g) / 8.0);
  RngStream rng(3);
  CVec gvec(8);
  for (int i = 0; i < 8; ++i) gvec(i) = cxd(rng.normal(), rng.normal());
  const double kill = (dict.matrix.adjoint() * gvec).cwiseAbs().maxCoeff();
  const L1Result res = solve_l1(gvec, dict, kill * 1.0001);
  CHECK(res.gamma.norm() == 0.0);
  // subgradient optimality of the zero solution, checked directly
  CHECK((dict.matrix.adjoint() * gvec).cwiseAbs().maxCoeff() <= kill * 1.0001);
}

TEST_CASE("objective decreases monotonically and optimality conditions hold") {
  const ArrayGeometry g = standard_geometry_subset({0, 1, 2, 5, 6, 8, 10, 11});
  const double rho = rayleigh_resolution(g);
  const Dictionary dict = build_dictionary(g, 4.0 * rho, rho / 8.0);
  RngStream rng(7);
  CVec gvec = dict.matrix.col(10) * cxd(1.2, 0.4) + dict.matrix.col(25) * cxd(-0.3, 0.9);
  for (int i = 0; i < 8; ++i) gvec(i) += rng.complex_gaussian(0.05);

  const double tau = 0.4;
  const L1Result res = solve_l1(gvec, dict, tau, 4000, 1e-14);
  for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
    CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-12);

  const CVec grad = dict.matrix.adjoint() * (dict.matrix * res.gamma - gvec);
  for (int q = 0; q < dict.grid_size(); ++q) {
    if (std::abs(res.gamma(q)) > 1e-9) {
      // phase-aligned: grad_q = -tau * gamma_q / |gamma_q|
      const cxd expect = -tau * res.gamma(q) / std::abs(res.gamma(q));
      CHECK(std::abs(grad(q) - expect) < 5e-5);
    } else {
      CHECK(std::abs(grad(q)) <= tau + 5e-5);
    }
  }
}

TEST_CASE("off-grid scatterer leaks energy into neighboring cells") {
  const ArrayGeometry g = standard_geometry_subset({0, 1, 2, 4, 6, 8, 10, 11});
  const double rho = rayleigh_resolution(g);
  const Dictionary dict = build_dictionary(g, 4.0 * rho, rho / 8.0);
  // place the target exactly between two grid points
  const double s = 0.5 * (dict.grid_elevations_m[15] + dict.grid_elevations_m[16]);
  const CVec gvec = steering_vector(g, s, true);
  const L1Result res = solve_l1(gvec, dict, 0.05, 4000, 1e-13);
  const RVec mags = res.gamma.cwiseAbs();
  int above = 0;
  for (int q = 0; q < dict.grid_size(); ++q)
    if (mags(q) > 0.1 * mags.maxCoeff()) ++above;
  CHECK(above >= 2);
}

TEST_CASE("peak extraction: single spike, separation, and plateau tie break") {
  const ArrayGeometry g = standard_geometry_subset({0, 1, 2, 3, 4, 5, 6, 7});
  const double rho = rayleigh_resolution(g);
  const Dictionary dict = build_dictionary(g, 4.0 * rho, rho / 8.0);
  const int q = dict.grid_size();

  RVec single = RVec::Zero(q);
  single(12) = 2.0;
  const auto peaks1 = extract_peaks(single, dict, 4, rho / 8.0);
  REQUIRE(peaks1.size() == 1);
  CHECK(peaks1[0].elevation_m == doctest::Approx(dict.grid_elevations_m[12]));

  RVec two = RVec::Zero(q);
  two(5) = 1.0;
  two(20) = 3.0;
  const auto peaks2 = extract_peaks(two, dict, 4, rho / 2.0);
  REQUIRE(peaks2.size() == 2);
  CHECK(peaks2[0].elevation_m < peaks2[1].elevation_m);  // sorted by elevation

  RVec plateau = RVec::Zero(q);
  plateau.segment(10, 3).setConstant(1.5);  // flat top
  const auto peaks3 = extract_peaks(plateau, dict, 4, rho / 8.0);
  REQUIRE(peaks3.size() == 1);
  CHECK(peaks3[0].elevation_m == doctest::Approx(dict.grid_elevations_m[10]));  // leftmost

  CHECK(extract_peaks(RVec::Zero(q), dict, 4, 1.0).empty());
}

TEST_CASE("mmv wrapper averages per-snapshot powers") {
  const ArrayGeometry g = standard_geometry_subset({0, 1, 3, 5, 7, 9, 10, 11});
  const double rho = rayleigh_resolution(g);
  const Dictionary dict = build_dictionary(g, 4.0 * rho, rho / 8.0);
  CMat gmat(8, 2);
  gmat.col(0) = dict.matrix.col(8);
  gmat.col(1) = dict.matrix.col(8) * cxd(0, 1);  // same power, rotated phase
  const RVec avg = solve_l1_mmv(gmat, dict, 1e-3, 4000, 1e-13);
  int best = 0;
  avg.maxCoeff(&best);
  CHECK(best == 8);
}
