#pragma once

#include "vclust/types.hpp"

namespace vclust {

/// Spectral decomposition M = Q·diag(λ)·Qᵀ with ascending eigenvalues.
struct SymEig {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Full symmetric eigendecomposition. The input is symmetrized before
/// factorization; relative asymmetry above 1e-8 is rejected.
SymEig sym_eig(const Matrix& m);

/// log|M| via Cholesky. Throws NumericalError if M is not positive definite.
double logdet_spd(const Matrix& m);

/// M⁻¹ for SPD M via Cholesky. Throws NumericalError if M is not positive definite.
Matrix inverse_spd(const Matrix& m);

/// true iff the symmetrized matrix admits a Cholesky factorization.
bool is_spd(const Matrix& m);

/// Solves −V⁻¹ + λV = R for the unique SPD V, using a single
/// eigendecomposition of R. Requires λ > 0.
Matrix solve_stationarity(const Matrix& r, double lambda);

/// Positive root y of λy² − ℓy − 1 = 0, evaluated without cancellation.
double stationarity_root(double ell, double lambda);

}  // namespace vclust
