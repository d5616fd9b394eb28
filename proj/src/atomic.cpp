#include "tomo/atomic.hpp"

#include <cmath>

namespace tomo {

CMat toeplitz_from_generator(const ToeplitzGenerator& gen, double diag_tol) {
  const int n = gen.size();
  if (n < 1) throw std::invalid_argument("toeplitz_from_generator: empty generator");
  const double scale = std::max(1.0, gen.u.cwiseAbs().maxCoeff());
  if (std::abs(gen.u(0).imag()) > diag_tol * scale)
    throw std::invalid_argument("toeplitz_from_generator: leading entry must be real");
  CMat t(n, n);
  for (int j1 = 0; j1 < n; ++j1) {
    t(j1, j1) = gen.u(0).real();
    for (int j2 = 0; j2 < j1; ++j2) {
      t(j1, j2) = gen.u(j1 - j2);
      t(j2, j1) = std::conj(gen.u(j1 - j2));
    }
  }
  return t;
}

ToeplitzGenerator project_toeplitz(const CMat& t) {
  if (t.rows() != t.cols()) throw std::invalid_argument("project_toeplitz: matrix must be square");
  const int n = static_cast<int>(t.rows());
  ToeplitzGenerator gen;
  gen.u = CVec::Zero(n);
  for (int d = 0; d < n; ++d) {
    cxd acc(0.0, 0.0);
    for (int j2 = 0; j2 + d < n; ++j2) acc += t(j2 + d, j2) + std::conj(t(j2, j2 + d));
    gen.u(d) = acc / (2.0 * (n - d));
  }
  gen.u(0) = cxd(gen.u(0).real(), 0.0);
  return gen;
}

CMat project_psd(const CMat& h, double hermitian_tol) {
  if (h.rows() != h.cols()) throw std::invalid_argument("project_psd: matrix must be square");
  const CMat sym = 0.5 * (h + h.adjoint());
  const double scale = std::max(1.0, sym.norm());
  if ((h - sym).norm() > hermitian_tol * scale)
    throw std::invalid_argument("project_psd: input is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<CMat> eig(sym);
  if (eig.info() != Eigen::Success) throw SolverError("project_psd: eigendecomposition failed");
  RVec lam = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint();
}

namespace {

/// || X^H a_Omega(omega) ||_2 with Vandermonde phases over the observed
/// element positions. The physical steering vector differs only by a
/// global unit-modulus factor, which the norm discards.
double correlation_norm(const CMat& x, const std::vector<int>& observed, double omega) {
  const int m = static_cast<int>(x.rows());
  CVec atom(m);
  for (int i = 0; i < m; ++i) {
    const double ph = kTwoPi * omega * observed[i];
    atom(i) = cxd(std::cos(ph), std::sin(ph));
  }
  return (x.adjoint() * atom).norm();
}

}  // namespace

double dual_atomic_norm(const CMat& x, const ArrayGeometry& geometry, int grid_density) {
  if (x.rows() != geometry.n_observed())
    throw std::invalid_argument("dual_atomic_norm: row count does not match observed elements");
  if (grid_density <= 0) grid_density = 64 * geometry.n_full;
  if (grid_density < 8 * geometry.n_full)
    throw std::invalid_argument("dual_atomic_norm: grid density below 8*N");
  if (x.size() == 0 || x.norm() == 0.0) return 0.0;

  const auto& observed = geometry.observed_indices;
  double best = -1.0;
  double best_omega = 0.0;
  for (int q = 0; q < grid_density; ++q) {
    const double omega = static_cast<double>(q) / grid_density;
    const double val = correlation_norm(x, observed, omega);
    if (val > best) {
      best = val;
      best_omega = omega;
    }
  }

  // Golden-section polish one grid cell around the maximizer.
  const double step = 1.0 / grid_density;
  double lo = best_omega - step;
  double hi = best_omega + step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = correlation_norm(x, observed, c);
  double fd = correlation_norm(x, observed, d);
  for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = correlation_norm(x, observed, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = correlation_norm(x, observed, d);
    }
  }
  return std::max(best, std::max(fc, fd));
}

double regularization_p(int snapshots, int n_full) {
  return 4.0 * snapshots * std::log(6.0 * snapshots + std::log(static_cast<double>(n_full)));
}

double regularization_tau(const RegularizationInput& input) {
  if (input.noise_variance < 0.0)
    throw std::invalid_argument("regularization_tau: negative noise variance");
  if (input.n_observed < 1 || input.n_full < 2 || input.snapshots < 1)
    throw std::invalid_argument("regularization_tau: need M >= 1, N >= 2, L >= 1");
  const double p = regularization_p(input.snapshots, input.n_full);
  const double denom = 7.0 - 8.0 / p;
  if (denom <= 0.0) throw std::invalid_argument("regularization_tau: p <= 8/7");
  const double l = input.snapshots;
  const double n = input.n_full;
  const double root = std::sqrt(2.0 * l * std::log(17.0) + std::log(tomo::kPi * n * p + 1.0) + 1.0);
  return 8.0 * std::sqrt(input.noise_variance * input.n_observed) / denom * root;
}

double atomic_norm_upper_bound(const Scene& scene) {
  double sum = 0.0;
  for (const Scatterer& sc : scene.scatterers) sum += sc.amplitudes.norm();
  return sum;
}

}  // namespace tomo
