#include "tomo/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tomo {

namespace {

CVec vandermonde_atom(int n, double omega) {
  CVec v(n);
  for (int i = 0; i < n; ++i) {
    const double ph = kTwoPi * omega * i;
    v(i) = cxd(std::cos(ph), std::sin(ph));
  }
  return v;
}

/// Roots of sum_j coeffs[j] z^j via the companion matrix. Leading
/// coefficients below tol (relative) are trimmed first.
std::vector<cxd> polynomial_roots(std::vector<cxd> coeffs) {
  const double scale = std::accumulate(coeffs.begin(), coeffs.end(), 0.0,
                                       [](double m, cxd c) { return std::max(m, std::abs(c)); });
  if (scale == 0.0) return {};
  while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-12 * scale) coeffs.pop_back();
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg < 1) return {};
  CMat companion = CMat::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<CMat> eig(companion, false);
  if (eig.info() != Eigen::Success) throw SolverError("polynomial rooting failed");
  std::vector<cxd> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = eig.eigenvalues()(i);
  return roots;
}

}  // namespace

int estimate_model_order(const ToeplitzGenerator& u, double noise_floor, double rel_thresh) {
  const CMat t = toeplitz_from_generator(u);
  Eigen::SelfAdjointEigenSolver<CMat> eig(t, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw SolverError("estimate_model_order: eig failed");
  const RVec lam = eig.eigenvalues();
  const double lam_max = lam(lam.size() - 1);
  if (lam_max <= 0.0) return 0;
  const double floor = std::max(noise_floor, rel_thresh * lam_max);
  int count = 0;
  for (int i = 0; i < lam.size(); ++i)
    if (lam(i) > floor) ++count;
  return count;
}

SpectralEstimate vandermonde_decompose(const ToeplitzGenerator& u, int order) {
  const int n = u.size();
  if (order < 1 || order > n - 1)
    throw std::invalid_argument("vandermonde_decompose: order must be in [1, N-1]");
  const CMat t = toeplitz_from_generator(u);
  Eigen::SelfAdjointEigenSolver<CMat> eig(t);
  if (eig.info() != Eigen::Success) throw SolverError("vandermonde_decompose: eig failed");
  const RVec lam = eig.eigenvalues();  // ascending
  const double lam_max = lam(n - 1);
  if (!(lam_max > 0.0)) throw SolverError("vandermonde_decompose: zero or indefinite matrix");
  if (lam(0) < -1e-6 * lam_max)
    throw std::invalid_argument("vandermonde_decompose: matrix is not PSD within tolerance");

  SpectralEstimate est;
  est.degenerate = lam(n - order) <= 1e-10 * lam_max;  // rank below the requested order

  // Noise-subspace polynomial sum_d c_d z^(d+N-1), c_d the d-th
  // superdiagonal sum of En En^H; nonnegative on the unit circle with
  // zeros at the atom frequencies.
  const CMat en = eig.eigenvectors().leftCols(n - order);
  const CMat c = en * en.adjoint();
  std::vector<cxd> coeffs(2 * n - 1);
  for (int d = -(n - 1); d <= n - 1; ++d) {
    cxd acc(0.0, 0.0);
    for (int n1 = std::max(0, -d); n1 < n && n1 + d < n; ++n1) acc += c(n1, n1 + d);
    coeffs[d + n - 1] = acc;
  }
  const std::vector<cxd> roots = polynomial_roots(coeffs);
  if (roots.empty()) throw SolverError("vandermonde_decompose: degenerate rooting polynomial");

  struct Candidate {
    double omega;
    double circle_dist;
    double subspace_leak;
  };
  std::vector<Candidate> candidates;
  for (const cxd& z : roots) {
    const double mag = std::abs(z);
    if (mag > 1.0 + 1e-9 || mag == 0.0) continue;  // keep one of each reciprocal pair
    double omega = std::arg(z) / (kTwoPi);
    if (omega < 0.0) omega += 1.0;
    if (omega >= 1.0) omega -= 1.0;
    const double leak = (en.adjoint() * vandermonde_atom(n, omega)).norm();
    candidates.push_back({omega, std::abs(mag - 1.0), leak});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.circle_dist != b.circle_dist) return a.circle_dist < b.circle_dist;
    return a.subspace_leak < b.subspace_leak;
  });

  const double dedupe_tol = 1e-7;
  for (const Candidate& cand : candidates) {
    if (static_cast<int>(est.frequencies.size()) == order) break;
    bool duplicate = false;
    for (double w : est.frequencies) {
      double diff = std::abs(w - cand.omega);
      diff = std::min(diff, 1.0 - diff);  // circular distance
      if (diff < dedupe_tol) duplicate = true;
    }
    if (!duplicate) est.frequencies.push_back(cand.omega);
  }
  if (est.frequencies.empty()) throw SolverError("vandermonde_decompose: no unit-circle roots");
  std::sort(est.frequencies.begin(), est.frequencies.end());

  // Powers: min_{p >= 0} || T - sum_k p_k a(w_k) a(w_k)^H ||_F.
  const int k = static_cast<int>(est.frequencies.size());
  std::vector<CVec> atoms(k);
  for (int i = 0; i < k; ++i) atoms[i] = vandermonde_atom(n, est.frequencies[i]);
  RMat gram(k, k);
  RVec rhs(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) gram(i, j) = std::norm(atoms[j].dot(atoms[i]));
    rhs(i) = (atoms[i].adjoint() * t * atoms[i]).value().real();
  }
  Eigen::LLT<RMat> llt(gram);
  RVec p;
  if (llt.info() == Eigen::Success) {
    p = llt.solve(rhs);
    if ((p.array() < 0.0).any()) p = nnls(gram, rhs);
  } else {
    p = nnls(gram, rhs);
  }

  std::vector<double> freqs;
  std::vector<double> powers;
  for (int i = 0; i < k; ++i) {
    if (p(i) > 0.0) {
      freqs.push_back(est.frequencies[i]);
      powers.push_back(p(i));
    }
  }
  if (freqs.empty()) {
    // All powers pinned at zero: keep the dominant root so callers still
    // receive a location estimate, flagged as degenerate.
    freqs.push_back(est.frequencies.front());
    powers.push_back(0.0);
    est.degenerate = true;
  }
  est.frequencies = std::move(freqs);
  est.powers = std::move(powers);
  est.model_order = static_cast<int>(est.frequencies.size());
  return est;
}

double elevation_to_frequency(double elevation_m, const ArrayGeometry& geometry) {
  const double omega = 2.0 * geometry.element_spacing_m /
                       (geometry.wavelength_m * geometry.reference_range_m) * elevation_m;
  double wrapped = std::fmod(omega, 1.0);
  if (wrapped < 0.0) wrapped += 1.0;
  return wrapped;
}

double frequency_to_elevation(double omega, const ArrayGeometry& geometry) {
  if (omega < 0.0 || omega >= 1.0)
    throw std::domain_error("frequency_to_elevation: omega must be in [0,1)");
  const double centered = omega >= 0.5 ? omega - 1.0 : omega;
  return centered * geometry.wavelength_m * geometry.reference_range_m /
         (2.0 * geometry.element_spacing_m);
}

void map_to_elevations(SpectralEstimate& estimate, const ArrayGeometry& geometry) {
  const int k = static_cast<int>(estimate.frequencies.size());
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> elev(k);
  for (int i = 0; i < k; ++i) elev[i] = frequency_to_elevation(estimate.frequencies[i], geometry);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return elev[a] < elev[b]; });
  SpectralEstimate sorted;
  sorted.model_order = estimate.model_order;
  sorted.degenerate = estimate.degenerate;
  for (int i : idx) {
    sorted.frequencies.push_back(estimate.frequencies[i]);
    sorted.powers.push_back(estimate.powers[i]);
    sorted.elevations_m.push_back(elev[i]);
  }
  estimate = std::move(sorted);
}

CMat estimate_amplitudes(const Observation& observation, const ArrayGeometry& geometry,
                         const std::vector<double>& elevations_m) {
  if (elevations_m.empty())
    throw std::invalid_argument("estimate_amplitudes: no elevations given");
  const CMat a = steering_matrix(geometry, elevations_m, true);
  Eigen::ColPivHouseholderQR<CMat> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<int>(elevations_m.size())) {
    // Name the closest pair; that is almost always the collision.
    double best = std::numeric_limits<double>::infinity();
    std::pair<double, double> pair{0.0, 0.0};
    for (std::size_t i = 0; i < elevations_m.size(); ++i)
      for (std::size_t j = i + 1; j < elevations_m.size(); ++j) {
        const double d = std::abs(elevations_m[i] - elevations_m[j]);
        if (d < best) {
          best = d;
          pair = {elevations_m[i], elevations_m[j]};
        }
      }
    std::ostringstream msg;
    msg << "estimate_amplitudes: rank-deficient steering matrix; elevations " << pair.first
        << " m and " << pair.second << " m collide";
    throw SolverError(msg.str());
  }
  return qr.solve(observation.data);
}

RVec nnls(const RMat& a, const RVec& b, int max_iters) {
  const int n = static_cast<int>(a.cols());
  if (max_iters <= 0) max_iters = 3 * n + 30;
  RVec x = RVec::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff());

  for (int outer = 0; outer < max_iters; ++outer) {
    const RVec grad = a.transpose() * (b - a * x);
    int best = -1;
    double best_grad = tol;
    for (int i = 0; i < n; ++i)
      if (!passive[i] && grad(i) > best_grad) {
        best_grad = grad(i);
        best = i;
      }
    if (best < 0) break;
    passive[best] = true;

    for (int inner = 0; inner < max_iters; ++inner) {
      std::vector<int> p;
      for (int i = 0; i < n; ++i)
        if (passive[i]) p.push_back(i);
      RMat ap(a.rows(), p.size());
      for (std::size_t i = 0; i < p.size(); ++i) ap.col(static_cast<int>(i)) = a.col(p[i]);
      const RVec zp = (ap.transpose() * ap)
                          .ldlt()
                          .solve(ap.transpose() * b);
      if ((zp.array() > 0.0).all()) {
        x.setZero();
        for (std::size_t i = 0; i < p.size(); ++i) x(p[i]) = zp(static_cast<int>(i));
        break;
      }
      // Step toward zp until the first passive coordinate hits zero.
      double alpha = 1.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (zp(static_cast<int>(i)) <= 0.0) {
          const double xi = x(p[i]);
          const double denom = xi - zp(static_cast<int>(i));
          if (denom > 0.0) alpha = std::min(alpha, xi / denom);
        }
      }
      for (std::size_t i = 0; i < p.size(); ++i) {
        x(p[i]) += alpha * (zp(static_cast<int>(i)) - x(p[i]));
        if (x(p[i]) <= 1e-14) {
          x(p[i]) = 0.0;
          passive[p[i]] = false;
        }
      }
    }
  }
  return x.cwiseMax(0.0);
}

}  // namespace tomo
