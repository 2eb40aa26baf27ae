#include "prhpg/eval.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "prhpg/errors.hpp"
#include "prhpg/linalg.hpp"
#include "prhpg/parallel.hpp"
#include "prhpg/stage.hpp"

namespace prhpg {

EvalGrid EvalGrid::uniform(const ParameterDomain& domain,
                           const std::vector<int>& counts) {
  const int d = domain.dim();
  if (static_cast<int>(counts.size()) != d) {
    throw std::invalid_argument("EvalGrid: need one count per dimension");
  }
  long long total = 1;
  for (int c : counts) {
    if (c < 1) throw std::invalid_argument("EvalGrid: counts must be >= 1");
    total *= c;
    if (total > (1LL << 26)) {
      throw std::invalid_argument("EvalGrid: grid too large");
    }
  }
  EvalGrid grid;
  grid.counts_ = counts;
  grid.points_.resize(static_cast<std::size_t>(total), Eigen::VectorXd(d));
  std::vector<int> idx(d, 0);
  for (long long flat = 0; flat < total; ++flat) {
    for (int k = 0; k < d; ++k) {
      const double lo = domain.lo()(k);
      const double hi = domain.hi()(k);
      grid.points_[flat](k) =
          counts[k] == 1
              ? 0.5 * (lo + hi)
              : lo + (hi - lo) * static_cast<double>(idx[k]) / (counts[k] - 1);
    }
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < counts[k]) break;
      idx[k] = 0;
    }
  }
  return grid;
}

EvalGrid EvalGrid::default_for(const ParameterDomain& domain,
                               int target_points) {
  const int d = domain.dim();
  const int per_dim = std::max(
      2, static_cast<int>(std::llround(std::pow(
             static_cast<double>(target_points), 1.0 / d))));
  return uniform(domain, std::vector<int>(d, per_dim));
}

Eigen::MatrixXd dlyap(const Eigen::Ref<const Eigen::MatrixXd>& acl,
                      const Eigen::Ref<const Eigen::MatrixXd>& W) {
  if (acl.rows() != acl.cols() || W.rows() != W.cols() ||
      acl.rows() != W.rows()) {
    throw std::invalid_argument("dlyap: A and W must be square, equal size");
  }
  const double rho = spectral_radius(acl);
  if (rho >= 1.0 - kStabilityMargin) {
    std::ostringstream msg;
    msg << "dlyap: closed loop is not stable (spectral radius " << rho << ")";
    throw NumericalError(msg.str());
  }
  // P = sum_k (A^T)^k W A^k by doubling: after m rounds the sum covers all
  // powers below 2^m.
  Eigen::MatrixXd P = W;
  Eigen::MatrixXd Apow = acl;
  for (int round = 0; round < 200; ++round) {
    const Eigen::MatrixXd increment = Apow.transpose() * P * Apow;
    P += increment;
    if (increment.norm() <= 1e-14 * P.norm()) break;
    Apow = Apow * Apow;
  }
  P = symmetrize(P);
  const double residual = (P - W - acl.transpose() * P * acl).norm();
  if (residual > 1e-10 * (1.0 + P.norm())) {
    std::ostringstream msg;
    msg << "dlyap: residual " << residual << " exceeds tolerance";
    throw NumericalError(msg.str());
  }
  return P;
}

DareResult dare(const Eigen::Ref<const Eigen::MatrixXd>& A,
                const Eigen::Ref<const Eigen::MatrixXd>& B,
                const Eigen::Ref<const Eigen::MatrixXd>& Q,
                const Eigen::Ref<const Eigen::MatrixXd>& R) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != m || R.cols() != m) {
    throw std::invalid_argument("dare: inconsistent matrix dimensions");
  }
  constexpr int kMaxIterations = 100000;
  constexpr double kRelTol = 1e-13;

  DareResult result;
  Eigen::MatrixXd P = Q;
  const Eigen::MatrixXd At = A.transpose();
  const Eigen::MatrixXd Bt = B.transpose();
  for (int it = 0; it < kMaxIterations; ++it) {
    const Eigen::MatrixXd M = R + Bt * P * B;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("dare: input-weight block lost definiteness");
    }
    const Eigen::MatrixXd L = Bt * P * A;
    Eigen::MatrixXd next = Q + At * P * A - L.transpose() * llt.solve(L);
    next = symmetrize(next);
    const double change = (next - P).norm();
    const double scale = std::max(1.0, P.norm());
    P = std::move(next);
    if (!P.allFinite()) {
      throw NumericalError(
          "dare: iteration diverged; the pair (A, B) is not stabilizable");
    }
    if (change <= kRelTol * scale) {
      result.iterations = it + 1;
      const Eigen::MatrixXd Mf = R + Bt * P * B;
      result.K = -Eigen::LLT<Eigen::MatrixXd>(Mf).solve(Bt * P * A);
      result.P = P;
      // Self-check against the fixed-point equation.
      const Eigen::MatrixXd residual =
          P - (Q + At * P * A -
               (At * P * B) * Eigen::LLT<Eigen::MatrixXd>(Mf).solve(Bt * P * A));
      if (residual.norm() > 1e-9 * std::max(1.0, P.norm())) {
        std::ostringstream msg;
        msg << "dare: residual " << residual.norm() << " exceeds tolerance";
        throw NumericalError(msg.str());
      }
      return result;
    }
  }
  throw NumericalError(
      "dare: no convergence within iteration budget; the pair (A, B) "
      "appears unstabilizable");
}

double pointwise_inf_cost(const PolytopicModel& model, const StageGains& gains,
                          const Eigen::Ref<const Eigen::VectorXd>& p,
                          const CostSpec& cost) {
  const Eigen::MatrixXd K = blended_gain(model, gains, p);
  const auto [A, B] = evaluate_system(model, p);
  const Eigen::MatrixXd acl = A + B * K;
  const Eigen::MatrixXd W =
      symmetrize(cost.Q() + K.transpose() * cost.R() * K);
  const Eigen::MatrixXd P = dlyap(acl, W);
  return (P * cost.Sigma0()).trace();
}

double integrated_inf_cost(const PolytopicModel& model,
                           const StageGains& gains, const QuadratureRule& rule,
                           const CostSpec& cost, int threads) {
  const int nq = rule.node_count();
  std::vector<double> values(nq, 0.0);
  std::vector<int> unstable(nq, 0);
  parallel_for(nq, threads, [&](std::size_t k) {
    try {
      values[k] = pointwise_inf_cost(model, gains, rule.node(static_cast<int>(k)),
                                     cost);
    } catch (const NumericalError&) {
      unstable[k] = 1;
    }
  });
  for (int k = 0; k < nq; ++k) {
    if (unstable[k]) {
      std::ostringstream msg;
      msg << "integrated_inf_cost: closed loop unstable at quadrature node "
          << k;
      throw NumericalError(msg.str());
    }
  }
  double total = 0.0;
  for (int k = 0; k < nq; ++k) total += rule.weight(k) * values[k];
  return total;
}

RiccatiBound riccati_lower_bound(const PolytopicModel& model,
                                 const QuadratureRule& rule,
                                 const CostSpec& cost, int threads) {
  const int nq = rule.node_count();
  RiccatiBound bound;
  bound.per_node.resize(nq);
  std::vector<int> failed(nq, 0);
  parallel_for(nq, threads, [&](std::size_t k) {
    const auto [A, B] =
        evaluate_system(model, rule.node(static_cast<int>(k)));
    try {
      const DareResult res = dare(A, B, cost.Q(), cost.R());
      bound.per_node(static_cast<Eigen::Index>(k)) =
          (res.P * cost.Sigma0()).trace();
    } catch (const NumericalError&) {
      failed[k] = 1;
    }
  });
  for (int k = 0; k < nq; ++k) {
    if (failed[k]) {
      std::ostringstream msg;
      msg << "riccati_lower_bound: frozen system unstabilizable at node " << k;
      throw NumericalError(msg.str());
    }
  }
  bound.integrated = 0.0;
  for (int k = 0; k < nq; ++k) {
    bound.integrated += rule.weight(k) * bound.per_node(k);
  }
  return bound;
}

SpectralScan max_spectral_radius(const PolytopicModel& model,
                                 const StageGains& gains, const EvalGrid& grid,
                                 int threads) {
  SpectralScan scan;
  const int count = grid.point_count();
  scan.per_point.resize(count);
  parallel_for(count, threads, [&](std::size_t i) {
    scan.per_point(static_cast<Eigen::Index>(i)) = spectral_radius(
        closed_loop(model, gains, grid.point(static_cast<int>(i))));
  });
  scan.rho_max = -1.0;
  for (int i = 0; i < count; ++i) {
    if (scan.per_point(i) > scan.rho_max) {
      scan.rho_max = scan.per_point(i);
      scan.argmax_index = i;
    }
  }
  scan.argmax_point = grid.point(scan.argmax_index);
  return scan;
}

FixedPointResiduals fixed_point_residual(const PolytopicModel& model,
                                         const StageGains& gains,
                                         const CostSpec& cost,
                                         const QuadratureRule& rule,
                                         int threads) {
  const int nq = rule.node_count();
  std::vector<Eigen::MatrixXd> pbar(nq);
  std::vector<double> defects(nq, 0.0);
  std::vector<int> unstable(nq, 0);
  parallel_for(nq, threads, [&](std::size_t k) {
    const int ki = static_cast<int>(k);
    const Eigen::MatrixXd K = blended_gain(model, gains, rule.node(ki));
    const auto [A, B] = evaluate_system(model, rule.node(ki));
    const Eigen::MatrixXd acl = A + B * K;
    const Eigen::MatrixXd W =
        symmetrize(cost.Q() + K.transpose() * cost.R() * K);
    try {
      pbar[k] = dlyap(acl, W);
      defects[k] = (pbar[k] - W - acl.transpose() * pbar[k] * acl).norm();
    } catch (const NumericalError&) {
      unstable[k] = 1;
    }
  });
  for (int k = 0; k < nq; ++k) {
    if (unstable[k]) {
      std::ostringstream msg;
      msg << "fixed_point_residual: closed loop unstable at node " << k;
      throw NumericalError(msg.str());
    }
  }

  FixedPointResiduals residuals;
  for (int k = 0; k < nq; ++k) {
    residuals.lyapunov = std::max(residuals.lyapunov, defects[k]);
  }
  const CostToGoField field(std::move(pbar));
  const StageData data = StageData::build(model, cost, field, rule, threads);
  residuals.stationarity = stage_gradient(gains, data).flatten().norm();
  return residuals;
}

LyapunovCheck lyapunov_condition_check(
    const Eigen::Ref<const Eigen::MatrixXd>& QN, const PolytopicModel& model,
    const CostSpec& cost, const StageGains& feasible_gains,
    const EvalGrid& grid) {
  LyapunovCheck check;
  check.worst_margin = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.point_count(); ++i) {
    const Eigen::VectorXd& p = grid.point(i);
    const Eigen::MatrixXd K = blended_gain(model, feasible_gains, p);
    const auto [A, B] = evaluate_system(model, p);
    const Eigen::MatrixXd acl = A + B * K;
    const Eigen::MatrixXd defect = symmetrize(
        cost.Q() + K.transpose() * cost.R() * K +
        acl.transpose() * QN * acl - QN);
    const double margin = -min_eigenvalue_sym(-defect);  // lambda_max(defect)
    if (margin > check.worst_margin) {
      check.worst_margin = margin;
      check.argworst_point = p;
    }
  }
  check.passed = check.worst_margin <= 1e-9 * (1.0 + QN.norm());
  return check;
}

Trajectory simulate_frozen(const PolytopicModel& model,
                           const StageGains& gains,
                           const Eigen::Ref<const Eigen::VectorXd>& p,
                           const Eigen::Ref<const Eigen::VectorXd>& x0,
                           int steps, const CostSpec& cost) {
  if (steps < 0) throw std::invalid_argument("simulate_frozen: steps < 0");
  if (x0.size() != model.state_dim()) {
    throw std::invalid_argument("simulate_frozen: x0 dimension mismatch");
  }
  const Eigen::MatrixXd K = blended_gain(model, gains, p);
  const auto [A, B] = evaluate_system(model, p);
  const Eigen::MatrixXd acl = A + B * K;

  Trajectory traj;
  traj.states.resize(steps + 1, model.state_dim());
  traj.inputs.resize(steps, model.input_dim());
  traj.running_cost.resize(steps);
  Eigen::VectorXd x = x0;
  traj.states.row(0) = x.transpose();
  for (int t = 0; t < steps; ++t) {
    const Eigen::VectorXd u = K * x;
    traj.inputs.row(t) = u.transpose();
    traj.running_cost(t) =
        x.dot(cost.Q() * x) + u.dot(cost.R() * u);
    x = acl * x;
    traj.states.row(t + 1) = x.transpose();
  }
  return traj;
}

}  // namespace prhpg
