#include "tomo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tomo {

void ArrayGeometry::validate() const {
  if (wavelength_m <= 0.0) throw std::invalid_argument("geometry: wavelength_m must be positive");
  if (reference_range_m <= 0.0)
    throw std::invalid_argument("geometry: reference_range_m must be positive");
  if (n_full < 2) throw std::invalid_argument("geometry: n_full must be at least 2");
  if (element_spacing_m <= 0.0)
    throw std::invalid_argument("geometry: element_spacing_m must be positive");
  if (observed_indices.empty())
    throw std::invalid_argument("geometry: observed_indices must be non-empty");
  if (static_cast<int>(observed_indices.size()) > n_full)
    throw std::invalid_argument("geometry: more observed indices than array elements");
  for (std::size_t i = 0; i < observed_indices.size(); ++i) {
    const int idx = observed_indices[i];
    if (idx < 0 || idx >= n_full)
      throw std::invalid_argument("geometry: observed index out of range [0, n_full)");
    if (i > 0 && observed_indices[i - 1] >= idx)
      throw std::invalid_argument("geometry: observed_indices must be strictly increasing");
  }
}

ArrayGeometry make_uniform_geometry(double wavelength_m, double reference_range_m, int n_full,
                                    double aperture_m) {
  ArrayGeometry g;
  g.wavelength_m = wavelength_m;
  g.reference_range_m = reference_range_m;
  g.n_full = n_full;
  g.element_spacing_m = aperture_m / (n_full - 1);
  g.observed_indices = all_indices(n_full);
  g.validate();
  return g;
}

std::vector<int> all_indices(int n_full) {
  std::vector<int> idx(n_full);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

std::vector<int> random_subset(int n_full, int m, RngStream& rng) {
  std::vector<int> idx = all_indices(n_full);
  // Fisher-Yates prefix shuffle; only the first m draws are needed.
  for (int i = 0; i < m; ++i) {
    const int j = rng.uniform_int(i, n_full - 1);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

CVec steering_vector(const ArrayGeometry& geometry, double elevation_m, bool restrict_observed) {
  const double half_window = geometry.unambiguous_window_m() / 2.0;
  if (!(std::abs(elevation_m) < half_window)) {
    std::ostringstream msg;
    msg << "steering_vector: elevation " << elevation_m << " m outside the unambiguous window (+-"
        << half_window << " m)";
    throw std::domain_error(msg.str());
  }
  const auto entry = [&](int n) {
    const double phase = -kTwoPi * geometry.spatial_frequency(n) * elevation_m;
    return cxd(std::cos(phase), std::sin(phase));
  };
  if (restrict_observed) {
    CVec a(geometry.n_observed());
    for (int m = 0; m < geometry.n_observed(); ++m) a(m) = entry(geometry.observed_indices[m]);
    return a;
  }
  CVec a(geometry.n_full);
  for (int n = 0; n < geometry.n_full; ++n) a(n) = entry(n);
  return a;
}

double rayleigh_resolution(const ArrayGeometry& geometry) {
  return geometry.wavelength_m * geometry.reference_range_m / (2.0 * geometry.aperture_m());
}

PrfPlan plan_emmv(double prf_hz, double doppler_bandwidth_hz, int snapshots) {
  if (prf_hz <= 0.0 || doppler_bandwidth_hz <= 0.0 || snapshots < 1)
    throw std::invalid_argument("plan_emmv: all inputs must be positive");
  if (!(prf_hz / snapshots > doppler_bandwidth_hz)) {
    const int max_l = static_cast<int>(std::ceil(prf_hz / doppler_bandwidth_hz)) - 1;
    std::ostringstream msg;
    msg << "plan_emmv: sub-PRF " << prf_hz / snapshots << " Hz does not exceed the Doppler bandwidth "
        << doppler_bandwidth_hz << " Hz; maximal admissible snapshot count is " << max_l;
    throw std::invalid_argument(msg.str());
  }
  return PrfPlan{prf_hz, doppler_bandwidth_hz, snapshots};
}

}  // namespace tomo
