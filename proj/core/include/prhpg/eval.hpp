#pragma once

#include <Eigen/Core>
#include <vector>

#include "prhpg/cost.hpp"
#include "prhpg/model.hpp"
#include "prhpg/quadrature.hpp"

namespace prhpg {

// A closed loop counts as stable when its spectral radius is below
// 1 - kStabilityMargin. Spectral radii very close to one are expected and
// must not be misclassified, hence the tight margin.
inline constexpr double kStabilityMargin = 1e-9;

// Dense uniform tensor grid over the domain, including the faces.
class EvalGrid {
 public:
  static EvalGrid uniform(const ParameterDomain& domain,
                          const std::vector<int>& counts);
  // Equal per-dimension counts sized so the total is close to
  // `target_points` (default 1280).
  static EvalGrid default_for(const ParameterDomain& domain,
                              int target_points = 1280);

  int point_count() const { return static_cast<int>(points_.size()); }
  const Eigen::VectorXd& point(int i) const { return points_.at(i); }
  const std::vector<int>& counts() const { return counts_; }

 private:
  std::vector<Eigen::VectorXd> points_;
  std::vector<int> counts_;
};

// Unique solution P of P = W + Acl^T P Acl for a Schur-stable Acl, by the
// doubling iteration P <- P + A^T P A, A <- A^2. Requires
// rho(Acl) < 1 - kStabilityMargin; throws NumericalError otherwise.
Eigen::MatrixXd dlyap(const Eigen::Ref<const Eigen::MatrixXd>& acl,
                      const Eigen::Ref<const Eigen::MatrixXd>& W);

struct DareResult {
  Eigen::MatrixXd P;  // stabilizing solution
  Eigen::MatrixXd K;  // optimal gain, -(R + B'PB)^{-1} B'PA
  int iterations = 0;
};

// Fixed-point Riccati iteration from P = Q, stopping at relative change
// 1e-13 or failing after 1e5 iterations (treated as unstabilizable).
DareResult dare(const Eigen::Ref<const Eigen::MatrixXd>& A,
                const Eigen::Ref<const Eigen::MatrixXd>& B,
                const Eigen::Ref<const Eigen::MatrixXd>& Q,
                const Eigen::Ref<const Eigen::MatrixXd>& R);

// Frozen-parameter infinite-horizon cost tr(P_inf(p) Sigma0) of the blended
// controller at p. Requires the closed loop at p to be stable.
double pointwise_inf_cost(const PolytopicModel& model, const StageGains& gains,
                          const Eigen::Ref<const Eigen::VectorXd>& p,
                          const CostSpec& cost);

// Quadrature of the pointwise costs; throws NumericalError naming the first
// node where the closed loop is unstable.
double integrated_inf_cost(const PolytopicModel& model,
                           const StageGains& gains, const QuadratureRule& rule,
                           const CostSpec& cost, int threads = 1);

struct RiccatiBound {
  double integrated = 0.0;
  Eigen::VectorXd per_node;
};

// Pointwise frozen-parameter optimum tr(P_ric(p) Sigma0) integrated over
// the rule; a lower bound on the cost of any blended controller.
RiccatiBound riccati_lower_bound(const PolytopicModel& model,
                                 const QuadratureRule& rule,
                                 const CostSpec& cost, int threads = 1);

struct SpectralScan {
  double rho_max = 0.0;
  Eigen::VectorXd argmax_point;
  int argmax_index = -1;
  Eigen::VectorXd per_point;
};

// max over the grid of rho(Acl(p)).
SpectralScan max_spectral_radius(const PolytopicModel& model,
                                 const StageGains& gains, const EvalGrid& grid,
                                 int threads = 1);

struct FixedPointResiduals {
  // Norm of the integrated stage gradient at (gains, Pbar) where Pbar is
  // the node-wise Lyapunov cost-to-go of the gains: stationarity of the
  // integrated one-step cost.
  double stationarity = 0.0;
  // Worst node-wise Lyapunov defect of Pbar (solver quality; near zero by
  // construction).
  double lyapunov = 0.0;
};

FixedPointResiduals fixed_point_residual(const PolytopicModel& model,
                                         const StageGains& gains,
                                         const CostSpec& cost,
                                         const QuadratureRule& rule,
                                         int threads = 1);

struct LyapunovCheck {
  bool passed = false;
  // Largest eigenvalue over the grid of
  //   Q + Kf(p)' R Kf(p) + Acl_f(p)' QN Acl_f(p) - QN;
  // nonpositive (within tolerance) means the terminal weight dominates one
  // closed-loop step of the feasible controller everywhere.
  double worst_margin = 0.0;
  Eigen::VectorXd argworst_point;
};

LyapunovCheck lyapunov_condition_check(
    const Eigen::Ref<const Eigen::MatrixXd>& QN, const PolytopicModel& model,
    const CostSpec& cost, const StageGains& feasible_gains,
    const EvalGrid& grid);

struct Trajectory {
  Eigen::MatrixXd states;        // (steps+1) x n
  Eigen::MatrixXd inputs;        // steps x m
  Eigen::VectorXd running_cost;  // steps entries x'Qx + u'Ru
};

// Closed-loop rollout at a frozen parameter value. Divergence is a valid
// output, not an error.
Trajectory simulate_frozen(const PolytopicModel& model,
                           const StageGains& gains,
                           const Eigen::Ref<const Eigen::VectorXd>& p,
                           const Eigen::Ref<const Eigen::VectorXd>& x0,
                           int steps, const CostSpec& cost);

}  // namespace prhpg
