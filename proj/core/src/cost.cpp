#include "prhpg/cost.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

#include "prhpg/linalg.hpp"

namespace prhpg {

namespace {

void require_sym(const Eigen::MatrixXd& M, const char* name) {
  if (M.rows() != M.cols()) {
    throw std::invalid_argument(std::string(name) + " must be square");
  }
  if (!is_symmetric(M, 1e-12)) {
    throw std::invalid_argument(std::string(name) + " must be symmetric");
  }
}

void require_definite(const Eigen::MatrixXd& M, const char* name,
                      bool strict) {
  const double lambda_min = min_eigenvalue_sym(M);
  const double bound = strict ? 1e-12 : -1e-12;
  if (lambda_min <= bound) {
    std::ostringstream msg;
    msg << name << " must be positive " << (strict ? "definite" : "semidefinite")
        << " (min eigenvalue " << lambda_min << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

CostSpec::CostSpec(Eigen::MatrixXd Q, Eigen::MatrixXd R, Eigen::MatrixXd QN,
                   Eigen::MatrixXd Sigma0)
    : Q_(std::move(Q)), R_(std::move(R)), QN_(std::move(QN)),
      Sigma0_(std::move(Sigma0)) {
  require_sym(Q_, "Q");
  require_sym(R_, "R");
  require_sym(QN_, "QN");
  require_sym(Sigma0_, "Sigma0");
  if (QN_.rows() != Q_.rows() || Sigma0_.rows() != Q_.rows()) {
    throw std::invalid_argument("CostSpec: Q, QN, Sigma0 dimensions differ");
  }
  require_definite(Q_, "Q", /*strict=*/true);
  require_definite(R_, "R", /*strict=*/true);
  require_definite(QN_, "QN", /*strict=*/false);
  require_definite(Sigma0_, "Sigma0", /*strict=*/true);
}

CostSpec CostSpec::without_terminal(Eigen::MatrixXd Q, Eigen::MatrixXd R,
                                    Eigen::MatrixXd Sigma0) {
  Eigen::MatrixXd QN = Eigen::MatrixXd::Zero(Q.rows(), Q.cols());
  return CostSpec(std::move(Q), std::move(R), std::move(QN),
                  std::move(Sigma0));
}

CostSpec CostSpec::with_terminal(Eigen::MatrixXd QN) const {
  return CostSpec(Q_, R_, std::move(QN), Sigma0_);
}

CostToGoField::CostToGoField(std::vector<Eigen::MatrixXd> values)
    : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("CostToGoField: empty field");
  }
  const Eigen::Index n = values_.front().rows();
  for (auto& P : values_) {
    if (P.rows() != n || P.cols() != n) {
      throw std::invalid_argument("CostToGoField: inconsistent shapes");
    }
    if (!is_symmetric(P, 1e-12)) {
      throw std::invalid_argument("CostToGoField: value not symmetric");
    }
    P = symmetrize(P);
  }
}

CostToGoField CostToGoField::constant(const Eigen::MatrixXd& P,
                                      int node_count) {
  if (node_count < 1) {
    throw std::invalid_argument("CostToGoField: need at least one node");
  }
  return CostToGoField(std::vector<Eigen::MatrixXd>(node_count, P));
}

}  // namespace prhpg
