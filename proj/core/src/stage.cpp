#include "prhpg/stage.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "prhpg/errors.hpp"
#include "prhpg/linalg.hpp"
#include "prhpg/parallel.hpp"

namespace prhpg {

StageData StageData::build(const PolytopicModel& model, const CostSpec& cost,
                           const CostToGoField& p_next,
                           const QuadratureRule& rule, int threads) {
  if (p_next.node_count() != rule.node_count()) {
    throw std::invalid_argument(
        "StageData: cost-to-go field does not match the quadrature rule");
  }
  if (cost.state_dim() != model.state_dim() ||
      cost.input_dim() != model.input_dim()) {
    throw std::invalid_argument("StageData: cost dimensions mismatch model");
  }

  StageData data;
  const int nq = rule.node_count();
  data.nv_ = model.vertex_count();
  data.n_ = model.state_dim();
  data.m_ = model.input_dim();
  data.sigma0_ = cost.Sigma0();
  data.weights_ = rule.weights();
  data.alpha_.resize(nq);
  data.A_.resize(nq);
  data.B_.resize(nq);
  data.M_.resize(nq);
  data.L_.resize(nq);
  data.p_next_.resize(nq);

  parallel_for(nq, threads, [&](std::size_t k) {
    const int ki = static_cast<int>(k);
    data.alpha_[k] = model.basis().evaluate(rule.node(ki));
    auto [A, B] = evaluate_system(model, rule.node(ki));
    const Eigen::MatrixXd& P = p_next.at(ki);
    data.M_[k] = symmetrize(cost.R() + B.transpose() * P * B);
    data.L_[k] = B.transpose() * P * A;
    data.p_next_[k] = P;
    data.A_[k] = std::move(A);
    data.B_[k] = std::move(B);
  });

  for (int k = 0; k < nq; ++k) {
    const double lambda_min = min_eigenvalue_sym(data.M_[k]);
    if (lambda_min <= 0.0) {
      std::ostringstream msg;
      msg << "StageData: M(p) lost positive definiteness at node " << k
          << " (min eigenvalue " << lambda_min
          << "); R must be positive definite and the cost-to-go PSD";
      throw NumericalError(msg.str());
    }
  }
  return data;
}

Eigen::MatrixXd StageData::gain_at(const StageGains& gains, int k) const {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m_, n_);
  const Eigen::VectorXd& a = alpha_[k];
  for (int i = 0; i < nv_; ++i) {
    if (a(i) != 0.0) K.noalias() += a(i) * gains.K[i];
  }
  return K;
}

double stage_cost(const StageGains& gains, const StageData& data,
                  const CostSpec& cost) {
  if (gains.vertex_count() != data.vertex_count()) {
    throw std::invalid_argument("stage_cost: gain count mismatch");
  }
  double phi = 0.0;
  for (int k = 0; k < data.node_count(); ++k) {
    const Eigen::MatrixXd K = data.gain_at(gains, k);
    const Eigen::MatrixXd acl = data.A(k) + data.B(k) * K;
    const Eigen::MatrixXd P = cost.Q() + K.transpose() * cost.R() * K +
                              acl.transpose() * data.p_next(k) * acl;
    phi += data.weight(k) * (P * data.sigma0()).trace();
  }
  return phi;
}

StageGains stage_gradient(const StageGains& gains, const StageData& data) {
  if (gains.vertex_count() != data.vertex_count()) {
    throw std::invalid_argument("stage_gradient: gain count mismatch");
  }
  StageGains grad =
      StageGains::zero(data.vertex_count(), data.input_dim(),
                       data.state_dim());
  for (int k = 0; k < data.node_count(); ++k) {
    const Eigen::MatrixXd K = data.gain_at(gains, k);
    // Policy residual E = M K + L, then F = 2 w E Sigma0.
    const Eigen::MatrixXd F =
        2.0 * data.weight(k) * (data.M(k) * K + data.L(k)) * data.sigma0();
    const Eigen::VectorXd& a = data.alpha(k);
    for (int i = 0; i < data.vertex_count(); ++i) {
      if (a(i) != 0.0) grad.K[i].noalias() += a(i) * F;
    }
  }
  return grad;
}

Eigen::MatrixXd stage_hessian(const StageData& data) {
  const int nv = data.vertex_count();
  const int block = data.input_dim() * data.state_dim();
  const int dim = nv * block;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < data.node_count(); ++k) {
    const Eigen::MatrixXd S =
        2.0 * data.weight(k) * kron(data.sigma0(), data.M(k));
    const Eigen::VectorXd& a = data.alpha(k);
    // Lower triangle of the Nv x Nv block grid.
    for (int i = 0; i < nv; ++i) {
      if (a(i) == 0.0) continue;
      for (int j = 0; j <= i; ++j) {
        if (a(j) == 0.0) continue;
        H.block(i * block, j * block, block, block).noalias() +=
            (a(i) * a(j)) * S;
      }
    }
  }
  H = H.selfadjointView<Eigen::Lower>();
  H = symmetrize(H);
  const double lambda_min = min_eigenvalue_sym(H);
  if (lambda_min <= 1e-12) {
    std::ostringstream msg;
    msg << "stage_hessian: Hessian not positive definite (min eigenvalue "
        << lambda_min
        << "); strong convexity requires linearly independent weighting "
           "functions and a positive definite input weight";
    throw NumericalError(msg.str());
  }
  return H;
}

namespace {

Eigen::VectorXd gradient_at_zero_flat(const StageData& data) {
  const StageGains zero = StageGains::zero(
      data.vertex_count(), data.input_dim(), data.state_dim());
  return stage_gradient(zero, data).flatten();
}

}  // namespace

StageGains stage_solve_direct(const StageData& data) {
  const Eigen::MatrixXd H = stage_hessian(data);
  const Eigen::VectorXd g0 = gradient_at_zero_flat(data);
  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "stage_solve_direct: Cholesky factorization of the Hessian failed");
  }
  const Eigen::VectorXd x = llt.solve(-g0);
  StageGains sol = StageGains::unflatten(x, data.vertex_count(),
                                         data.input_dim(), data.state_dim());
  const double residual = stage_gradient(sol, data).flatten().norm();
  if (residual > 1e-8 * (1.0 + g0.norm())) {
    std::ostringstream msg;
    msg << "stage_solve_direct: optimality residual " << residual
        << " exceeds tolerance; the stage system is badly conditioned";
    throw NumericalError(msg.str());
  }
  return sol;
}

std::pair<StageGains, GdTelemetry> stage_solve_gd(const StageData& data,
                                                  const GdOptions& options,
                                                  const StageGains& initial) {
  if (options.tol <= 0.0) {
    throw std::invalid_argument("stage_solve_gd: tol must be positive");
  }
  const Eigen::MatrixXd H = stage_hessian(data);
  const double sigma_max = power_iteration_max_eigenvalue(H, 1e-10);
  const double lambda_min = min_eigenvalue_sym(H);

  GdTelemetry telemetry;
  telemetry.eta = 1.0 / sigma_max;
  telemetry.kappa = sigma_max / lambda_min;

  StageGains gains = initial;
  StageGains grad = stage_gradient(gains, data);
  double norm = grad.flatten().norm();
  telemetry.grad_norms.push_back(norm);
  while (norm > options.tol && telemetry.iterations < options.max_iter) {
    for (int i = 0; i < gains.vertex_count(); ++i) {
      gains.K[i].noalias() -= telemetry.eta * grad.K[i];
    }
    ++telemetry.iterations;
    grad = stage_gradient(gains, data);
    norm = grad.flatten().norm();
    telemetry.grad_norms.push_back(norm);
  }
  telemetry.converged = norm <= options.tol;
  return {std::move(gains), std::move(telemetry)};
}

CostToGoField propagate_cost_to_go(const StageGains& gains,
                                   const PolytopicModel& model,
                                   const CostSpec& cost,
                                   const CostToGoField& p_next,
                                   const QuadratureRule& rule, int threads) {
  if (p_next.node_count() != rule.node_count()) {
    throw std::invalid_argument(
        "propagate_cost_to_go: field does not match the rule");
  }
  if (gains.vertex_count() != model.vertex_count()) {
    throw std::invalid_argument("propagate_cost_to_go: gain count mismatch");
  }
  const int nq = rule.node_count();
  std::vector<Eigen::MatrixXd> values(nq);
  std::vector<double> min_eigs(nq, 0.0);
  parallel_for(nq, threads, [&](std::size_t k) {
    const int ki = static_cast<int>(k);
    const auto [A, B] = evaluate_system(model, rule.node(ki));
    const Eigen::VectorXd alpha = model.basis().evaluate(rule.node(ki));
    Eigen::MatrixXd K =
        Eigen::MatrixXd::Zero(model.input_dim(), model.state_dim());
    for (int i = 0; i < model.vertex_count(); ++i) {
      K.noalias() += alpha(i) * gains.K[i];
    }
    const Eigen::MatrixXd acl = A + B * K;
    Eigen::MatrixXd P = cost.Q() + K.transpose() * cost.R() * K +
                        acl.transpose() * p_next.at(ki) * acl;
    P = symmetrize(P);
    const double lambda_min = min_eigenvalue_sym(P);
    min_eigs[k] = lambda_min;
    if (lambda_min < 0.0 && lambda_min >= -1e-8) {
      P = clip_psd(P, 0.0);
    }
    values[k] = std::move(P);
  });
  for (int k = 0; k < nq; ++k) {
    if (min_eigs[k] < -1e-8) {
      std::ostringstream msg;
      msg << "propagate_cost_to_go: cost-to-go lost positive semidefiniteness "
             "at node "
          << k << " (min eigenvalue " << min_eigs[k] << ")";
      throw NumericalError(msg.str());
    }
  }
  return CostToGoField(std::move(values));
}

}  // namespace prhpg
