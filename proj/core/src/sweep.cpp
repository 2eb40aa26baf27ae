#include "prhpg/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "prhpg/errors.hpp"
#include "prhpg/linalg.hpp"
#include "prhpg/rng.hpp"

namespace prhpg {

TerminalCost TerminalCost::zero() { return {}; }

TerminalCost TerminalCost::running_q() {
  TerminalCost t;
  t.kind_ = Kind::kRunningQ;
  return t;
}

TerminalCost TerminalCost::scaled_identity(double gamma) {
  if (gamma < 0.0) {
    throw std::invalid_argument("scaled_identity: gamma must be >= 0");
  }
  TerminalCost t;
  t.kind_ = Kind::kScaledIdentity;
  t.gamma_ = gamma;
  return t;
}

TerminalCost TerminalCost::vertex_are_average() {
  TerminalCost t;
  t.kind_ = Kind::kVertexAreAverage;
  return t;
}

TerminalCost TerminalCost::random_wishart(std::uint64_t seed) {
  TerminalCost t;
  t.kind_ = Kind::kRandomWishart;
  t.seed_ = seed;
  return t;
}

TerminalCost TerminalCost::explicit_matrix(Eigen::MatrixXd QN) {
  TerminalCost t;
  t.kind_ = Kind::kExplicit;
  t.matrix_ = std::move(QN);
  return t;
}

std::string TerminalCost::tag() const {
  switch (kind_) {
    case Kind::kZero:
      return "zero";
    case Kind::kRunningQ:
      return "running-q";
    case Kind::kScaledIdentity: {
      std::ostringstream s;
      s << "scaled-identity(" << gamma_ << ")";
      return s.str();
    }
    case Kind::kVertexAreAverage:
      return "vertex-are-average";
    case Kind::kRandomWishart: {
      std::ostringstream s;
      s << "random-wishart(" << seed_ << ")";
      return s.str();
    }
    case Kind::kExplicit:
      return "explicit";
  }
  return "unknown";
}

Eigen::MatrixXd make_terminal_cost(const TerminalCost& choice,
                                   const PolytopicModel& model,
                                   const CostSpec& cost,
                                   const QuadratureRule& rule) {
  (void)rule;
  const int n = model.state_dim();
  switch (choice.kind()) {
    case TerminalCost::Kind::kZero:
      return Eigen::MatrixXd::Zero(n, n);
    case TerminalCost::Kind::kRunningQ:
      return cost.Q();
    case TerminalCost::Kind::kScaledIdentity:
      return choice.gamma() * Eigen::MatrixXd::Identity(n, n);
    case TerminalCost::Kind::kVertexAreAverage: {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < model.vertex_count(); ++i) {
        try {
          acc += dare(model.vertex(i).A, model.vertex(i).B, cost.Q(),
                      cost.R()).P;
        } catch (const NumericalError& err) {
          std::ostringstream msg;
          msg << "make_terminal_cost: vertex " << i
              << " is not stabilizable (" << err.what() << ")";
          throw NumericalError(msg.str());
        }
      }
      return acc / model.vertex_count();
    }
    case TerminalCost::Kind::kRandomWishart: {
      SeededRng rng(choice.seed());
      Eigen::MatrixXd G(n, n);
      // Column-major fill, matching Eigen storage order.
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) G(i, j) = rng.normal();
      }
      return symmetrize(G * G.transpose());
    }
    case TerminalCost::Kind::kExplicit: {
      const Eigen::MatrixXd& M = choice.matrix();
      if (M.rows() != n || M.cols() != n || !is_symmetric(M, 1e-12)) {
        throw std::invalid_argument(
            "make_terminal_cost: explicit terminal must be symmetric n x n");
      }
      if (min_eigenvalue_sym(M) < -1e-12) {
        throw std::invalid_argument(
            "make_terminal_cost: explicit terminal must be PSD");
      }
      return symmetrize(M);
    }
  }
  throw std::logic_error("unreachable terminal kind");
}

std::pair<StageGains, CostToGoField> bellman_step(
    const PolytopicModel& model, const CostSpec& cost,
    const CostToGoField& field, const QuadratureRule& rule,
    const SolverChoice& solver, int threads) {
  const StageData data = StageData::build(model, cost, field, rule, threads);
  StageGains gains = solver.kind == SolverChoice::Kind::kDirect
                         ? stage_solve_direct(data)
                         : stage_solve_gd(data, solver.gd,
                                          StageGains::zero(
                                              model.vertex_count(),
                                              model.input_dim(),
                                              model.state_dim()))
                               .first;
  CostToGoField next =
      propagate_cost_to_go(gains, model, cost, field, rule, threads);
  return {std::move(gains), std::move(next)};
}

namespace {

double field_cost(const CostToGoField& field, const QuadratureRule& rule,
                  const CostSpec& cost) {
  double total = 0.0;
  for (int k = 0; k < rule.node_count(); ++k) {
    total += rule.weight(k) * (field.at(k) * cost.Sigma0()).trace();
  }
  return total;
}

}  // namespace

SynthesisResult rhpg_synthesize(const PolytopicModel& model,
                                const CostSpec& cost, int horizon,
                                const QuadratureRule& rule,
                                const TerminalCost& terminal,
                                const SynthesisOptions& options) {
  if (horizon < 1) {
    throw std::invalid_argument("rhpg_synthesize: horizon must be >= 1");
  }
  const auto t0 = std::chrono::steady_clock::now();

  const Eigen::MatrixXd QN = make_terminal_cost(terminal, model, cost, rule);
  CostToGoField field = CostToGoField::constant(QN, rule.node_count());

  SynthesisResult result;
  result.horizon = horizon;
  result.terminal_tag = terminal.tag();
  if (options.store_schedule) {
    result.schedule.resize(horizon);
  }

  StageGains gains = StageGains::zero(model.vertex_count(), model.input_dim(),
                                      model.state_dim());
  for (int h = horizon - 1; h >= 0; --h) {
    const StageData data =
        StageData::build(model, cost, field, rule, options.threads);
    StageTelemetry telemetry;
    telemetry.stage = h;
    try {
      if (options.solver.kind == SolverChoice::Kind::kDirect) {
        gains = stage_solve_direct(data);
        const Eigen::MatrixXd H = stage_hessian(data);
        telemetry.kappa = power_iteration_max_eigenvalue(H, 1e-10) /
                          min_eigenvalue_sym(H);
        telemetry.final_grad_norm =
            stage_gradient(gains, data).flatten().norm();
      } else {
        auto [solved, gd] = stage_solve_gd(
            data, options.solver.gd,
            StageGains::zero(model.vertex_count(), model.input_dim(),
                             model.state_dim()));
        gains = std::move(solved);
        telemetry.iterations = gd.iterations;
        telemetry.kappa = gd.kappa;
        telemetry.final_grad_norm = gd.grad_norms.back();
        telemetry.converged = gd.converged;
        if (options.store_grad_norms) {
          telemetry.grad_norms = std::move(gd.grad_norms);
        }
      }
    } catch (const NumericalError& err) {
      std::ostringstream msg;
      msg << "stage " << h << ": " << err.what();
      throw NumericalError(msg.str());
    }
    field = propagate_cost_to_go(gains, model, cost, field, rule,
                                 options.threads);
    result.stages.push_back(std::move(telemetry));
    if (options.store_schedule) {
      result.schedule[h] = gains;
    }
  }

  result.deployed = std::move(gains);
  result.cost = field_cost(field, rule, cost);
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

StageGains find_feasible_gains(const PolytopicModel& model,
                               const CostSpec& cost, const QuadratureRule& rule,
                               const EvalGrid& grid, int initial_horizon,
                               int max_horizon, int threads) {
  SynthesisOptions options;
  options.threads = threads;
  for (int horizon = initial_horizon; horizon <= max_horizon; horizon *= 2) {
    const SynthesisResult result = rhpg_synthesize(
        model, cost, horizon, rule, TerminalCost::zero(), options);
    const SpectralScan scan =
        max_spectral_radius(model, result.deployed, grid, threads);
    if (scan.rho_max < 1.0 - kStabilityMargin) {
      return result.deployed;
    }
  }
  throw NumericalError(
      "find_feasible_gains: no jointly stabilizing gains found up to the "
      "horizon limit; the model may not be jointly stabilizable in this "
      "gain structure");
}

SweepTable horizon_sweep(const PolytopicModel& model, const CostSpec& cost,
                         const std::vector<int>& horizons,
                         const QuadratureRule& rule,
                         const std::vector<TerminalCost>& terminals,
                         const EvalGrid& grid, const SweepOptions& options) {
  if (horizons.empty() || terminals.empty()) {
    throw std::invalid_argument("horizon_sweep: empty horizons or terminals");
  }
  if (!std::is_sorted(horizons.begin(), horizons.end())) {
    throw std::invalid_argument("horizon_sweep: horizons must be ascending");
  }

  StageGains feasible =
      options.feasible_gains.has_value()
          ? *options.feasible_gains
          : find_feasible_gains(model, cost, rule, grid, 200, 3200,
                                options.threads);

  SweepTable table;
  table.summary.relative_tolerance = options.relative_tolerance;
  std::vector<double> final_costs;

  for (const TerminalCost& terminal : terminals) {
    // Direction of the expected monotonicity for this terminal weight.
    std::string direction = "none";
    if (terminal.kind() == TerminalCost::Kind::kZero) {
      direction = "non-decreasing";
    } else {
      const Eigen::MatrixXd QN =
          make_terminal_cost(terminal, model, cost, rule);
      const LyapunovCheck check =
          lyapunov_condition_check(QN, model, cost, feasible, grid);
      if (check.passed) direction = "non-increasing";
    }

    TerminalSummary summary;
    summary.terminal = terminal.tag();
    summary.expected_direction = direction;

    SynthesisOptions synth_options;
    synth_options.solver = options.solver;
    synth_options.threads = options.threads;

    double prev_cost = 0.0;
    bool have_prev = false;
    for (int horizon : horizons) {
      const SynthesisResult result = rhpg_synthesize(
          model, cost, horizon, rule, terminal, synth_options);
      SweepRow row;
      row.terminal = terminal.tag();
      row.horizon = horizon;
      row.cost = result.cost;
      const SpectralScan scan =
          max_spectral_radius(model, result.deployed, grid, options.threads);
      row.rho_max = scan.rho_max;
      row.stable = scan.rho_max < 1.0 - kStabilityMargin;
      if (row.stable) {
        row.inf_cost =
            integrated_inf_cost(model, result.deployed, rule, cost,
                                options.threads);
      }
      if (have_prev) {
        const double tol =
            options.relative_tolerance * std::max(1.0, std::abs(prev_cost));
        if (direction == "non-decreasing") {
          row.monotone_ok = row.cost >= prev_cost - tol;
        } else if (direction == "non-increasing") {
          row.monotone_ok = row.cost <= prev_cost + tol;
        }
      }
      if (!row.monotone_ok) ++summary.violations;
      prev_cost = row.cost;
      have_prev = true;
      summary.final_cost = row.cost;
      table.rows.push_back(std::move(row));
    }
    final_costs.push_back(summary.final_cost);
    table.summary.terminals.push_back(std::move(summary));
  }

  const double lo = *std::min_element(final_costs.begin(), final_costs.end());
  const double hi = *std::max_element(final_costs.begin(), final_costs.end());
  table.summary.final_spread = (hi - lo) / std::max(1e-300, std::abs(lo));
  return table;
}

}  // namespace prhpg
