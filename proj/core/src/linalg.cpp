#include "prhpg/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "prhpg/errors.hpp"

namespace prhpg {

Eigen::MatrixXd symmetrize(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  return 0.5 * (M + M.transpose());
}

bool is_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& M, double tol) {
  if (M.rows() != M.cols()) return false;
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue_sym(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("min_eigenvalue_sym: eigensolver failed");
  }
  return es.eigenvalues().minCoeff();
}

double spectral_radius(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  if (M.rows() != M.cols()) {
    throw std::invalid_argument("spectral_radius: matrix must be square");
  }
  if (M.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw NumericalError("spectral_radius: eigensolver failed");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd kron(const Eigen::Ref<const Eigen::MatrixXd>& A,
                     const Eigen::Ref<const Eigen::MatrixXd>& B) {
  Eigen::MatrixXd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return out;
}

Eigen::MatrixXd clip_psd(const Eigen::Ref<const Eigen::MatrixXd>& M,
                         double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) {
    throw NumericalError("clip_psd: eigensolver failed");
  }
  if (es.eigenvalues().minCoeff() >= floor) return M;
  Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(floor);
  return es.eigenvectors() * clipped.asDiagonal() *
         es.eigenvectors().transpose();
}

double power_iteration_max_eigenvalue(
    const Eigen::Ref<const Eigen::MatrixXd>& M, double tol, int max_iter) {
  if (M.rows() != M.cols() || M.rows() == 0) {
    throw std::invalid_argument(
        "power_iteration_max_eigenvalue: matrix must be square, nonempty");
  }
  const Eigen::Index n = M.rows();
  // Fixed start with nonzero overlap against any eigenvector.
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = 1.0 + 0.5 * std::cos(static_cast<double>(i) + 1.0);
  }
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = M * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = w.dot(M * w);
    if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) {
      return next;
    }
    lambda = next;
    v = w;
  }
  return lambda;
}

}  // namespace prhpg
