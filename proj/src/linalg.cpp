#include "vclust/linalg.hpp"

#include "vclust/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace vclust {

SymEig sym_eig(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw InvalidArgument("sym_eig: matrix is not square");
  }
  if (relative_asymmetry(m) > 1e-8) {
    throw InvalidArgument("sym_eig: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(m));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("sym_eig: eigendecomposition did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double logdet_spd(const Matrix& m) {
  Eigen::LLT<Matrix> llt(symmetrized(m));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("logdet_spd: matrix is not positive definite");
  }
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Matrix inverse_spd(const Matrix& m) {
  Eigen::LLT<Matrix> llt(symmetrized(m));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("inverse_spd: matrix is not positive definite");
  }
  Matrix inv = llt.solve(Matrix::Identity(m.rows(), m.cols()));
  return symmetrized(inv);
}

bool is_spd(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0 || !m.allFinite()) {
    return false;
  }
  Eigen::LLT<Matrix> llt(symmetrized(m));
  return llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all();
}

double stationarity_root(double ell, double lambda) {
  const double disc = std::sqrt(ell * ell + 4.0 * lambda);
  if (ell >= 0.0) {
    return (ell + disc) / (2.0 * lambda);
  }
  return 2.0 / (disc - ell);
}

Matrix solve_stationarity(const Matrix& r, double lambda) {
  if (!(lambda > 0.0)) {
    throw InvalidArgument("solve_stationarity: lambda must be positive");
  }
  const SymEig eig = sym_eig(r);
  Vector y(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y(i) = stationarity_root(eig.eigenvalues(i), lambda);
  }
  Matrix v = eig.eigenvectors * y.asDiagonal() * eig.eigenvectors.transpose();
  return symmetrized(v);
}

}  // namespace vclust
