#pragma once

#include "tomo/geometry.hpp"
#include "tomo/scene.hpp"
#include "tomo/types.hpp"

namespace tomo {

/// First column of a Hermitian Toeplitz matrix T(u):
/// T[j1,j2] = u[j1-j2] for j1 >= j2 and the conjugate above the diagonal.
struct ToeplitzGenerator {
  CVec u;

  int size() const { return static_cast<int>(u.size()); }
};

/// Expands the generator into the full N x N Hermitian Toeplitz matrix.
/// Throws std::invalid_argument when the leading entry has an imaginary
/// part beyond tolerance (the diagonal of a Hermitian matrix is real).
CMat toeplitz_from_generator(const ToeplitzGenerator& gen, double diag_tol = 1e-9);

/// Orthogonal projection of a square matrix onto the Hermitian Toeplitz
/// set: per-diagonal averaging of the matrix and its conjugate transpose.
ToeplitzGenerator project_toeplitz(const CMat& t);

/// Frobenius-nearest positive semidefinite matrix. The input is
/// symmetrized first; a relative asymmetry beyond hermitian_tol throws.
CMat project_psd(const CMat& h, double hermitian_tol = 1e-9);

/// Dual atomic norm of an M x L matrix: sup over frequencies of
/// || X^H a_Omega(omega) ||_2. Evaluated on a uniform grid over [0,1)
/// (grid_density points, default 64*N) and refined by golden-section
/// polish around the grid maximizer; a lower bound on the true supremum.
double dual_atomic_norm(const CMat& x, const ArrayGeometry& geometry, int grid_density = 0);

struct RegularizationInput {
  double noise_variance = 0.0;  // per-element complex variance
  int n_observed = 0;           // M
  int n_full = 0;               // N
  int snapshots = 1;            // L
};

/// Covering-number constant p = 4 L log(6 L + log N) (natural logs).
double regularization_p(int snapshots, int n_full);

/// Closed-form regularization weight
///   tau = 8 sqrt(sigma M) / (7 - 8/p) * sqrt(2 L log 17 + log(pi N p + 1) + 1).
double regularization_tau(const RegularizationInput& input);

/// Sum over scatterers of the Euclidean norm of their amplitude rows; the
/// value of one feasible atomic decomposition, hence an upper bound on the
/// atomic norm of the clean observation.
double atomic_norm_upper_bound(const Scene& scene);

}  // namespace tomo
