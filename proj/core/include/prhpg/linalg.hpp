#pragma once

#include <Eigen/Core>

namespace prhpg {

// (M + M^T) / 2.
Eigen::MatrixXd symmetrize(const Eigen::Ref<const Eigen::MatrixXd>& M);

bool is_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& M,
                  double tol = 1e-12);

// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue_sym(const Eigen::Ref<const Eigen::MatrixXd>& M);

// Largest eigenvalue magnitude of a general square matrix.
double spectral_radius(const Eigen::Ref<const Eigen::MatrixXd>& M);

// Kronecker product A (x) B.
Eigen::MatrixXd kron(const Eigen::Ref<const Eigen::MatrixXd>& A,
                     const Eigen::Ref<const Eigen::MatrixXd>& B);

// Clamps eigenvalues of a symmetric matrix below `floor` up to `floor`.
// Used to remove harmless negative roundoff from PSD matrices.
Eigen::MatrixXd clip_psd(const Eigen::Ref<const Eigen::MatrixXd>& M,
                         double floor = 0.0);

// Largest eigenvalue of a symmetric PSD matrix by power iteration with a
// fixed deterministic start, to relative tolerance `tol`.
double power_iteration_max_eigenvalue(
    const Eigen::Ref<const Eigen::MatrixXd>& M, double tol = 1e-10,
    int max_iter = 100000);

}  // namespace prhpg
