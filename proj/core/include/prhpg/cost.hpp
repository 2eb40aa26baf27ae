#pragma once

#include <Eigen/Core>
#include <vector>

namespace prhpg {

// Quadratic cost data. Q, R and the initial-state covariance Sigma0 must be
// symmetric positive definite; the terminal weight QN symmetric positive
// semidefinite. Validated on construction with a 1e-12 eigenvalue tolerance.
class CostSpec {
 public:
  CostSpec(Eigen::MatrixXd Q, Eigen::MatrixXd R, Eigen::MatrixXd QN,
           Eigen::MatrixXd Sigma0);

  // QN defaults to the zero matrix.
  static CostSpec without_terminal(Eigen::MatrixXd Q, Eigen::MatrixXd R,
                                   Eigen::MatrixXd Sigma0);

  const Eigen::MatrixXd& Q() const { return Q_; }
  const Eigen::MatrixXd& R() const { return R_; }
  const Eigen::MatrixXd& QN() const { return QN_; }
  const Eigen::MatrixXd& Sigma0() const { return Sigma0_; }
  int state_dim() const { return static_cast<int>(Q_.rows()); }
  int input_dim() const { return static_cast<int>(R_.rows()); }

  // Same running cost and covariance with a different terminal weight.
  CostSpec with_terminal(Eigen::MatrixXd QN) const;

 private:
  Eigen::MatrixXd Q_, R_, QN_, Sigma0_;
};

// Parameter-dependent cost-to-go sampled at the nodes of a quadrature rule:
// one symmetric PSD matrix per node. Values are re-symmetrized after every
// update; consumers validate the node count against the rule they pair the
// field with.
class CostToGoField {
 public:
  explicit CostToGoField(std::vector<Eigen::MatrixXd> values);

  // P(p_k) = P for all k (terminal initialization).
  static CostToGoField constant(const Eigen::MatrixXd& P, int node_count);

  int node_count() const { return static_cast<int>(values_.size()); }
  const Eigen::MatrixXd& at(int k) const { return values_.at(k); }
  const std::vector<Eigen::MatrixXd>& values() const { return values_; }

 private:
  std::vector<Eigen::MatrixXd> values_;
};

}  // namespace prhpg
