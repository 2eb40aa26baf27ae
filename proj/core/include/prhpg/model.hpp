#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "prhpg/basis.hpp"
#include "prhpg/domain.hpp"
#include "prhpg/quadrature.hpp"

namespace prhpg {

struct VertexSystem {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x m
};

// Parameter-dependent linear system in polytopic form:
//   [A(p) B(p)] = sum_i alpha_i(p) [A_i B_i],
// with the weighting functions alpha forming a partition of unity on the
// domain. Immutable after construction and safe to share across threads.
class PolytopicModel {
 public:
  PolytopicModel(ParameterDomain domain, WeightingBasis basis,
                 std::vector<VertexSystem> vertices);

  int state_dim() const { return n_; }
  int input_dim() const { return m_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const ParameterDomain& domain() const { return domain_; }
  const WeightingBasis& basis() const { return basis_; }
  const std::vector<VertexSystem>& vertices() const { return vertices_; }
  const VertexSystem& vertex(int i) const { return vertices_.at(i); }

 private:
  ParameterDomain domain_;
  WeightingBasis basis_;
  std::vector<VertexSystem> vertices_;
  int n_ = 0;
  int m_ = 0;
};

// Vertex gains of one stage. The flattened decision vector stacks the
// column-major vec of K_1, ..., K_Nv in vertex order; this convention makes
// the stage Hessian blocks equal to weighted Kronecker products
// Sigma0 (x) M without index shuffling.
struct StageGains {
  std::vector<Eigen::MatrixXd> K;  // Nv matrices, each m x n

  int vertex_count() const { return static_cast<int>(K.size()); }
  static StageGains zero(int nv, int m, int n);
  Eigen::VectorXd flatten() const;
  static StageGains unflatten(const Eigen::Ref<const Eigen::VectorXd>& v,
                              int nv, int m, int n);
  // sqrt(sum_i ||K_i||_F^2), i.e. the norm of the flattened vector.
  double norm() const;
};

// alpha(p); errors if p is outside the domain.
Eigen::VectorXd evaluate_weights(const PolytopicModel& model,
                                 const Eigen::Ref<const Eigen::VectorXd>& p);

// (A(p), B(p)) as the alpha(p)-weighted vertex blend.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> evaluate_system(
    const PolytopicModel& model, const Eigen::Ref<const Eigen::VectorXd>& p);

// K(p) = sum_i alpha_i(p) K_i.
Eigen::MatrixXd blended_gain(const PolytopicModel& model,
                             const StageGains& gains,
                             const Eigen::Ref<const Eigen::VectorXd>& p);

// A(p) + B(p) K(p).
Eigen::MatrixXd closed_loop(const PolytopicModel& model,
                            const StageGains& gains,
                            const Eigen::Ref<const Eigen::VectorXd>& p);

// All pairwise matrices G_ij = A_i + B_i K_j. Per-vertex stability of the
// diagonal does not imply joint stability; the off-diagonal entries are the
// coupling this diagnostic exposes.
std::vector<std::vector<Eigen::MatrixXd>> vertex_cross_terms(
    const PolytopicModel& model, const StageGains& gains);

// Gram matrix of the weighting functions under the rule's measure:
// Gamma_ij = sum_k w_k alpha_i(p_k) alpha_j(p_k). Throws NumericalError if
// the result is not positive definite (min eigenvalue <= 1e-12), which
// means the discretized weighting functions are linearly dependent.
Eigen::MatrixXd gram_matrix(const PolytopicModel& model,
                            const QuadratureRule& rule);

}  // namespace prhpg
