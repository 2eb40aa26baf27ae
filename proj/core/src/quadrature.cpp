#include "prhpg/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace prhpg {

QuadratureRule::QuadratureRule(ParameterDomain domain,
                               std::vector<Eigen::VectorXd> nodes,
                               Eigen::VectorXd weights,
                               std::vector<int> orders)
    : domain_(std::move(domain)), nodes_(std::move(nodes)),
      weights_(std::move(weights)), orders_(std::move(orders)) {
  if (nodes_.empty() ||
      static_cast<Eigen::Index>(nodes_.size()) != weights_.size()) {
    throw std::invalid_argument("QuadratureRule: nodes/weights mismatch");
  }
  for (const auto& p : nodes_) {
    if (!domain_.contains(p)) {
      throw std::invalid_argument("QuadratureRule: node outside the domain");
    }
  }
  if ((weights_.array() <= 0.0).any()) {
    throw std::invalid_argument("QuadratureRule: weights must be positive");
  }
  if (std::abs(weights_.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument(
        "QuadratureRule: weights must sum to one (probability measure)");
  }
}

namespace detail {

void legendre_rule(int order, std::vector<double>& nodes,
                   std::vector<double>& weights) {
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess for the i-th root.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence up to degree `order` at x.
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
  if (order == 1) {
    nodes[0] = 0.0;
    weights[0] = 2.0;
  }
}

}  // namespace detail

QuadratureRule gauss_legendre(const ParameterDomain& domain,
                              const std::vector<int>& orders) {
  const int d = domain.dim();
  if (static_cast<int>(orders.size()) != d) {
    throw std::invalid_argument(
        "gauss_legendre: need one order per dimension");
  }
  long long total = 1;
  for (int q : orders) {
    if (q < 1) throw std::invalid_argument("gauss_legendre: orders must be >= 1");
    total *= q;
    if (total > (1LL << 26)) {
      throw std::invalid_argument("gauss_legendre: rule too large");
    }
  }

  // Per-dimension nodes mapped into [lo, hi]; weights scaled to the uniform
  // probability measure (each dimension's weights sum to one).
  std::vector<std::vector<double>> dim_nodes(d), dim_weights(d);
  for (int k = 0; k < d; ++k) {
    std::vector<double> x, w;
    detail::legendre_rule(orders[k], x, w);
    dim_nodes[k].resize(x.size());
    dim_weights[k].resize(w.size());
    const double lo = domain.lo()(k);
    const double hi = domain.hi()(k);
    for (std::size_t i = 0; i < x.size(); ++i) {
      dim_nodes[k][i] = lo + 0.5 * (x[i] + 1.0) * (hi - lo);
      dim_weights[k][i] = 0.5 * w[i];
    }
  }

  const auto count = static_cast<std::size_t>(total);
  std::vector<Eigen::VectorXd> nodes(count, Eigen::VectorXd(d));
  Eigen::VectorXd weights(count);
  std::vector<int> idx(d, 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      nodes[flat](k) = dim_nodes[k][idx[k]];
      w *= dim_weights[k][idx[k]];
    }
    weights(flat) = w;
    // Advance with the last dimension fastest, matching the basis order.
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < orders[k]) break;
      idx[k] = 0;
    }
  }
  weights /= weights.sum();
  return QuadratureRule(domain, std::move(nodes), std::move(weights), orders);
}

}  // namespace prhpg
