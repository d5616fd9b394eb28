#include "tomo/gbcs.hpp"

#include <algorithm>
#include <cmath>

namespace tomo {

Dictionary build_dictionary(const ArrayGeometry& geometry, double extent_m, double grid_step_m) {
  if (grid_step_m <= 0.0) throw std::invalid_argument("build_dictionary: grid step must be positive");
  if (!(extent_m > 0.0 && extent_m < geometry.unambiguous_window_m()))
    throw std::invalid_argument("build_dictionary: extent outside the unambiguous window");
  const int q = static_cast<int>(std::floor(extent_m / grid_step_m + 1e-12)) + 1;
  if (q < 2) throw std::invalid_argument("build_dictionary: fewer than 2 grid points");
  Dictionary dict;
  dict.grid_elevations_m.resize(q);
  dict.matrix.resize(geometry.n_observed(), q);
  const double span = (q - 1) * grid_step_m;
  for (int i = 0; i < q; ++i) {
    dict.grid_elevations_m[i] = -span / 2.0 + i * grid_step_m;
    dict.matrix.col(i) = steering_vector(geometry, dict.grid_elevations_m[i], true);
  }
  return dict;
}

namespace {

double l1_objective(const CVec& g, const CMat& a, const CVec& x, double tau) {
  return 0.5 * (g - a * x).squaredNorm() + tau * x.cwiseAbs().sum();
}

CVec soft_threshold(const CVec& z, double thr) {
  CVec out(z.size());
  for (int i = 0; i < z.size(); ++i) {
    const double mag = std::abs(z(i));
    out(i) = mag > thr ? z(i) * ((mag - thr) / mag) : cxd(0.0, 0.0);
  }
  return out;
}

}  // namespace

L1Result solve_l1(const CVec& g, const Dictionary& dictionary, double tau_l1, int max_iters,
                  double tol) {
  const CMat& a = dictionary.matrix;
  if (g.size() != a.rows()) throw std::invalid_argument("solve_l1: dimension mismatch");
  if (tau_l1 < 0.0) throw std::invalid_argument("solve_l1: negative tau");

  const double lip = a.jacobiSvd().singularValues()(0);
  const double step = 1.0 / (lip * lip);

  L1Result res;
  const int q = dictionary.grid_size();
  CVec x = CVec::Zero(q);
  CVec x_prev = x;
  CVec y = x;
  double t = 1.0;
  double obj = l1_objective(g, a, x, tau_l1);
  res.objective_trace.push_back(obj);

  for (int k = 0; k < max_iters; ++k) {
    const CVec grad = a.adjoint() * (a * y - g);
    const CVec z = soft_threshold(y - step * grad, tau_l1 * step);
    const double obj_z = l1_objective(g, a, z, tau_l1);

    // Monotone variant: keep the better of the accelerated candidate and
    // the previous iterate, but keep momentum running through z.
    x_prev = x;
    double obj_new = obj;
    if (obj_z <= obj) {
      x = z;
      obj_new = obj_z;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x + (t / t_next) * (z - x) + ((t - 1.0) / t_next) * (x - x_prev);
    t = t_next;

    res.iterations = k + 1;
    res.objective_trace.push_back(obj_new);
    const double rel_change = std::abs(obj - obj_new) / std::max(obj_new, 1e-300);
    obj = obj_new;
    // A rejected candidate leaves the objective unchanged without being
    // anywhere near optimal, so also require the prox-gradient mapping
    // (z - y) to be small before declaring convergence.
    const double mapping = (z - y).norm() / (1.0 + x.norm());
    if (k > 0 && rel_change <= tol && mapping <= std::sqrt(std::max(tol, 1e-30))) {
      res.converged = true;
      break;
    }
  }
  res.gamma = x;
  return res;
}

double default_l1_tau(double noise_variance, int grid_size) {
  return noise_variance * std::sqrt(2.0 * std::log(static_cast<double>(grid_size)));
}

std::vector<Peak> extract_peaks(const RVec& magnitudes, const Dictionary& dictionary,
                                int max_peaks, double min_separation_m, double rel_threshold) {
  const int q = static_cast<int>(magnitudes.size());
  if (q != dictionary.grid_size())
    throw std::invalid_argument("extract_peaks: magnitude/grid size mismatch");
  std::vector<Peak> peaks;
  if (q == 0 || max_peaks <= 0) return peaks;
  const double max_mag = magnitudes.maxCoeff();
  if (max_mag <= 0.0) return peaks;
  const double floor = rel_threshold * max_mag;

  std::vector<int> local_maxima;
  for (int i = 0; i < q; ++i) {
    const double v = magnitudes(i);
    if (v < floor) continue;
    const double left = i > 0 ? magnitudes(i - 1) : -1.0;
    const double right = i + 1 < q ? magnitudes(i + 1) : -1.0;
    // Strict rise from the left makes plateaus resolve to their leftmost bin.
    if (v > left && v >= right) local_maxima.push_back(i);
  }
  std::stable_sort(local_maxima.begin(), local_maxima.end(),
                   [&](int a, int b) { return magnitudes(a) > magnitudes(b); });

  for (int idx : local_maxima) {
    if (static_cast<int>(peaks.size()) == max_peaks) break;
    const double s = dictionary.grid_elevations_m[idx];
    bool blocked = false;
    for (const Peak& p : peaks)
      if (std::abs(p.elevation_m - s) < min_separation_m) blocked = true;
    if (!blocked) peaks.push_back({s, magnitudes(idx)});
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.elevation_m < b.elevation_m; });
  return peaks;
}

RVec solve_l1_mmv(const CMat& g, const Dictionary& dictionary, double tau_l1, int max_iters,
                  double tol) {
  const int q = dictionary.grid_size();
  RVec power = RVec::Zero(q);
  for (int l = 0; l < g.cols(); ++l) {
    const L1Result res = solve_l1(g.col(l), dictionary, tau_l1, max_iters, tol);
    power += res.gamma.cwiseAbs2();
  }
  return (power / static_cast<double>(g.cols())).cwiseSqrt();
}

}  // namespace tomo
