#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "prhpg/domain.hpp"

namespace prhpg {

// Tensor-product quadrature discretizing the uniform probability measure on
// a parameter box: positive weights summing to one, nodes strictly inside
// the box. Node enumeration runs with the last dimension fastest, matching
// the weighting-basis vertex order.
//
// Only the uniform measure ships; a non-uniform density would enter as a
// node-wise multiplier on the weights.
class QuadratureRule {
 public:
  QuadratureRule(ParameterDomain domain, std::vector<Eigen::VectorXd> nodes,
                 Eigen::VectorXd weights, std::vector<int> orders);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const Eigen::VectorXd& node(int k) const { return nodes_.at(k); }
  double weight(int k) const { return weights_(k); }
  const Eigen::VectorXd& weights() const { return weights_; }
  const ParameterDomain& domain() const { return domain_; }
  const std::vector<int>& orders() const { return orders_; }

 private:
  ParameterDomain domain_;
  std::vector<Eigen::VectorXd> nodes_;
  Eigen::VectorXd weights_;
  std::vector<int> orders_;
};

// Gauss-Legendre rule with the given per-dimension orders, exact for
// multivariate polynomials of per-dimension degree <= 2*order - 1.
QuadratureRule gauss_legendre(const ParameterDomain& domain,
                              const std::vector<int>& orders);

// Quadrature of a matrix-valued integrand given by node index. Summation is
// in fixed node order, so results are reproducible bit for bit.
template <class F>
Eigen::MatrixXd integrate(const QuadratureRule& rule, F&& f) {
  Eigen::MatrixXd acc = rule.weight(0) * f(0);
  for (int k = 1; k < rule.node_count(); ++k) {
    const Eigen::MatrixXd value = f(k);
    if (value.rows() != acc.rows() || value.cols() != acc.cols()) {
      throw std::invalid_argument(
          "integrate: integrand shape varies across nodes");
    }
    acc += rule.weight(k) * value;
  }
  return acc;
}

namespace detail {
// Nodes and weights of the order-n Gauss-Legendre rule on [-1, 1], by
// Newton iteration on the Legendre polynomial to 1e-15.
void legendre_rule(int order, std::vector<double>& nodes,
                   std::vector<double>& weights);
}  // namespace detail

}  // namespace prhpg
