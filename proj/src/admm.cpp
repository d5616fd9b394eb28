#include "tomo/admm.hpp"

#include <cmath>

namespace tomo {

void SolverConfig::validate() const {
  if (tau < 0.0) throw std::invalid_argument("solver: tau must be nonnegative");
  if (penalty_eta <= 0.0) throw std::invalid_argument("solver: penalty_eta must be positive");
  if (max_iters < 1) throw std::invalid_argument("solver: max_iters must be at least 1");
  if (tol_primal <= 0.0 || tol_change <= 0.0)
    throw std::invalid_argument("solver: tolerances must be positive");
}

namespace {

void assemble_block(const CMat& t, const CMat& g, const CMat& v, CMat& block) {
  const int n = static_cast<int>(t.rows());
  const int l = static_cast<int>(v.rows());
  block.topLeftCorner(n, n) = t;
  block.topRightCorner(n, l) = g;
  block.bottomLeftCorner(l, n) = g.adjoint();
  block.bottomRightCorner(l, l) = v;
}

/// Eigenvalue clamp without the validation overhead of project_psd; the
/// argument is Hermitian by construction inside the iteration.
void psd_clamp(const CMat& h, Eigen::SelfAdjointEigenSolver<CMat>& eig, CMat& out) {
  eig.compute(h);
  if (eig.info() != Eigen::Success) throw SolverError("admm: eigendecomposition failed");
  const RVec lam = eig.eigenvalues().cwiseMax(0.0);
  out.noalias() = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint();
}

double objective_terms(const CMat& g_hat, const CMat& v, const CVec& u,
                       const std::vector<int>& observed, const CMat& g_obs, double tau) {
  double fit = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i)
    fit += (g_hat.row(observed[i]) - g_obs.row(static_cast<int>(i))).squaredNorm();
  const double traces = v.trace().real() + u(0).real();
  return 0.5 * fit + 0.5 * tau * traces;
}

}  // namespace

SolverState solve_empast(const Observation& observation, const ArrayGeometry& geometry,
                         const SolverConfig& config) {
  config.validate();
  geometry.validate();
  const int n = geometry.n_full;
  const int m = geometry.n_observed();
  const int l = observation.snapshots();
  if (observation.n_observed() != m)
    throw std::invalid_argument("solve_empast: observation rows do not match observed elements");
  const CMat& g_obs = observation.data;
  const auto& observed = geometry.observed_indices;

  std::vector<bool> is_observed(n, false);
  for (int idx : observed) is_observed[idx] = true;

  SolverState st;
  st.g_hat = CMat::Zero(n, l);
  for (std::size_t i = 0; i < observed.size(); ++i)
    st.g_hat.row(observed[i]) = g_obs.row(static_cast<int>(i));
  st.v = CMat::Zero(l, l);
  st.u.u = CVec::Zero(n);
  st.big_u = CMat::Zero(n + l, n + l);
  st.lambda = CMat::Zero(n + l, n + l);

  double eta = config.penalty_eta;
  const double tau = config.tau;

  CMat block(n + l, n + l);
  CMat prev_block(n + l, n + l);
  CMat toeplitz(n, n);
  Eigen::SelfAdjointEigenSolver<CMat> eig;
  CMat g_prev = st.g_hat;
  CMat v_prev = st.v;
  CVec u_prev = st.u.u;

  for (int k = 0; k < config.max_iters; ++k) {
    const auto u_t = st.big_u.topLeftCorner(n, n);
    const auto u_g = st.big_u.topRightCorner(n, l);
    const auto u_v = st.big_u.bottomRightCorner(l, l);
    const auto lam_t = st.lambda.topLeftCorner(n, n);
    const auto lam_g = st.lambda.topRightCorner(n, l);
    const auto lam_v = st.lambda.bottomRightCorner(l, l);

    // Step 1: Ghat, V, u.
    {
      CMat rhs = 2.0 * eta * u_g + 2.0 * lam_g;
      for (std::size_t i = 0; i < observed.size(); ++i)
        rhs.row(observed[i]) += g_obs.row(static_cast<int>(i));
      for (int r = 0; r < n; ++r)
        st.g_hat.row(r) = rhs.row(r) / (is_observed[r] ? 2.0 * eta + 1.0 : 2.0 * eta);
    }
    st.v = u_v + lam_v / eta;
    st.v.diagonal().array() -= tau / (2.0 * eta);
    {
      CMat pre = u_t + lam_t / eta;
      pre.diagonal().array() -= tau / (2.0 * eta * n);
      st.u = project_toeplitz(pre);
    }

    // Step 2: PSD projection of the assembled block minus Lambda/eta.
    for (int j1 = 0; j1 < n; ++j1) {
      toeplitz(j1, j1) = st.u.u(0).real();
      for (int j2 = 0; j2 < j1; ++j2) {
        toeplitz(j1, j2) = st.u.u(j1 - j2);
        toeplitz(j2, j1) = std::conj(st.u.u(j1 - j2));
      }
    }
    assemble_block(toeplitz, st.g_hat, st.v, block);
    psd_clamp(block - st.lambda / eta, eig, st.big_u);

    // Step 3: multiplier ascent.
    st.lambda += eta * (st.big_u - block);

    const double primal = (st.big_u - block).norm();
    st.primal_residual = primal;
    st.iters_run = k + 1;

    if (!st.g_hat.allFinite() || !st.big_u.allFinite() || !st.lambda.allFinite())
      throw SolverError("solve_empast: non-finite iterate");

    if (config.keep_trace)
      st.trace.push_back({k + 1, primal, objective_terms(st.g_hat, st.v, st.u.u, observed, g_obs, tau)});

    const double change = (st.g_hat - g_prev).norm() + (st.v - v_prev).norm() + (st.u.u - u_prev).norm();
    const double scale = 1.0 + st.g_hat.norm() + st.v.norm() + st.u.u.norm();
    if (primal <= config.tol_primal * (n + l) || (k > 0 && change <= config.tol_change * scale)) {
      st.converged = true;
      break;
    }

    if (config.adaptive_eta && k > 0) {
      const double dual = eta * (block - prev_block).norm();
      if (primal > 10.0 * dual)
        eta *= 2.0;
      else if (dual > 10.0 * primal)
        eta /= 2.0;
    }

    g_prev = st.g_hat;
    v_prev = st.v;
    u_prev = st.u.u;
    prev_block = block;
  }
  return st;
}

SolverState solve_past(const Observation& observation, const ArrayGeometry& geometry,
                       const SolverConfig& config) {
  if (observation.snapshots() != 1)
    throw std::invalid_argument("solve_past: requires a single snapshot");
  return solve_empast(observation, geometry, config);
}

double objective_value(const SolverState& state, const Observation& observation,
                       const ArrayGeometry& geometry, double tau) {
  return objective_terms(state.g_hat, state.v, state.u.u, geometry.observed_indices,
                         observation.data, tau);
}

}  // namespace tomo
