#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "prhpg/cost.hpp"
#include "prhpg/model.hpp"
#include "prhpg/quadrature.hpp"

namespace prhpg {

// Cached per-node quantities of one backward stage subproblem:
//   M(p_k) = R + B(p_k)^T P_next(p_k) B(p_k)   (input-weight, SPD)
//   L(p_k) = B(p_k)^T P_next(p_k) A(p_k)
// together with the weighting values, the blended system matrices and the
// inherited cost-to-go. Immutable after build.
class StageData {
 public:
  static StageData build(const PolytopicModel& model, const CostSpec& cost,
                         const CostToGoField& p_next,
                         const QuadratureRule& rule, int threads = 1);

  int node_count() const { return static_cast<int>(alpha_.size()); }
  int vertex_count() const { return nv_; }
  int state_dim() const { return n_; }
  int input_dim() const { return m_; }
  const Eigen::VectorXd& alpha(int k) const { return alpha_[k]; }
  const Eigen::MatrixXd& A(int k) const { return A_[k]; }
  const Eigen::MatrixXd& B(int k) const { return B_[k]; }
  const Eigen::MatrixXd& M(int k) const { return M_[k]; }
  const Eigen::MatrixXd& L(int k) const { return L_[k]; }
  const Eigen::MatrixXd& p_next(int k) const { return p_next_[k]; }
  double weight(int k) const { return weights_(k); }
  const Eigen::MatrixXd& sigma0() const { return sigma0_; }

  // Blended gain at node k for the given vertex gains.
  Eigen::MatrixXd gain_at(const StageGains& gains, int k) const;

 private:
  StageData() = default;

  std::vector<Eigen::VectorXd> alpha_;
  std::vector<Eigen::MatrixXd> A_, B_, M_, L_, p_next_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd sigma0_;
  int nv_ = 0, n_ = 0, m_ = 0;
};

// Integrated one-step cost of the stage:
//   Phi(K) = sum_k w_k tr[(Q + K_k^T R K_k + Acl_k^T Pnext_k Acl_k) Sigma0],
// with K_k the blended gain at node k. Finite for any gains.
double stage_cost(const StageGains& gains, const StageData& data,
                  const CostSpec& cost);

// Analytic gradient, block i = 2 sum_k w_k alpha_i(k) (M_k K_k + L_k) Sigma0.
StageGains stage_gradient(const StageGains& gains, const StageData& data);

// Constant Hessian of the stage cost under the column-major vec convention:
// block (i,j) = 2 sum_k w_k alpha_i alpha_j (Sigma0 (x) M_k). Symmetric
// positive definite; throws NumericalError on degeneracy (min eigenvalue
// <= 1e-12), which indicates linearly dependent weighting functions.
Eigen::MatrixXd stage_hessian(const StageData& data);

// Unique stage minimizer via the normal equations H vec(K) = -g0 and a
// Cholesky factorization. Postcondition: the gradient at the returned gains
// has Frobenius norm <= 1e-8 * (1 + ||g0||).
StageGains stage_solve_direct(const StageData& data);

struct GdOptions {
  double tol = 1e-10;   // stop when ||grad||_F <= tol
  int max_iter = 100000;
};

struct GdTelemetry {
  std::vector<double> grad_norms;  // per accepted iterate, starting at K0
  double kappa = 0.0;              // condition number of the stage Hessian
  double eta = 0.0;                // step size 1 / sigma_max(H)
  int iterations = 0;
  bool converged = false;
};

// Fixed-step gradient descent vec(K) <- vec(K) - eta * grad, with
// eta = 1 / sigma_max(H) obtained by power iteration on the assembled
// Hessian. Non-convergence within max_iter is flagged, not thrown.
std::pair<StageGains, GdTelemetry> stage_solve_gd(const StageData& data,
                                                  const GdOptions& options,
                                                  const StageGains& initial);

// One backward recursion step at every node:
//   P(p_k) = Q + K_k^T R K_k + Acl_k^T Pnext_k Acl_k,
// symmetrized, with negative eigenvalues above -1e-8 clipped to zero.
// Larger negativity throws NumericalError.
CostToGoField propagate_cost_to_go(const StageGains& gains,
                                   const PolytopicModel& model,
                                   const CostSpec& cost,
                                   const CostToGoField& p_next,
                                   const QuadratureRule& rule,
                                   int threads = 1);

}  // namespace prhpg
