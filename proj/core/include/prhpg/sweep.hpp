#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prhpg/cost.hpp"
#include "prhpg/eval.hpp"
#include "prhpg/model.hpp"
#include "prhpg/quadrature.hpp"
#include "prhpg/stage.hpp"

namespace prhpg {

// Terminal-weight choice for the backward sweep.
class TerminalCost {
 public:
  enum class Kind {
    kZero,
    kRunningQ,          // QN = Q
    kScaledIdentity,    // QN = gamma * I
    kVertexAreAverage,  // QN = mean of per-vertex Riccati solutions
    kRandomWishart,     // QN = G G^T, G standard normal from the seed
    kExplicit,
  };

  static TerminalCost zero();
  static TerminalCost running_q();
  static TerminalCost scaled_identity(double gamma);
  static TerminalCost vertex_are_average();
  static TerminalCost random_wishart(std::uint64_t seed);
  static TerminalCost explicit_matrix(Eigen::MatrixXd QN);

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  std::uint64_t seed() const { return seed_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  // Stable label used in CSV/JSON output, e.g. "zero",
  // "scaled-identity(1000)", "random-wishart(42)".
  std::string tag() const;

 private:
  Kind kind_ = Kind::kZero;
  double gamma_ = 0.0;
  std::uint64_t seed_ = 0;
  Eigen::MatrixXd matrix_;
};

// Realizes the terminal weight as a symmetric PSD matrix. The vertex-ARE
// average solves one Riccati equation per vertex and throws NumericalError
// naming the first unstabilizable vertex.
Eigen::MatrixXd make_terminal_cost(const TerminalCost& choice,
                                   const PolytopicModel& model,
                                   const CostSpec& cost,
                                   const QuadratureRule& rule);

struct SolverChoice {
  enum class Kind { kDirect, kGd };
  Kind kind = Kind::kDirect;
  GdOptions gd;

  static SolverChoice direct() { return {}; }
  static SolverChoice gradient_descent(GdOptions options) {
    SolverChoice c;
    c.kind = Kind::kGd;
    c.gd = options;
    return c;
  }
};

struct StageTelemetry {
  int stage = 0;        // time index h
  int iterations = 0;   // 0 for the direct solver
  double kappa = 0.0;   // condition number of the stage Hessian
  double final_grad_norm = 0.0;
  bool converged = true;
  std::vector<double> grad_norms;  // kept only when requested
};

struct SynthesisOptions {
  SolverChoice solver = SolverChoice::direct();
  bool store_schedule = false;     // keep all stage gains, not just stage 0
  bool store_grad_norms = false;   // keep per-iteration norms (GD studies)
  int threads = 1;
};

struct SynthesisResult {
  StageGains deployed;                // stage-0 gains
  std::vector<StageGains> schedule;   // newest-first unused; stage t at [t]
  double cost = 0.0;                  // integrated stage-0 cost-to-go
  int horizon = 0;
  std::string terminal_tag;
  std::vector<StageTelemetry> stages;  // entry per stage, h = N-1 first
  double elapsed_seconds = 0.0;
};

// Backward sweep: starting from the terminal weight, each stage solves the
// strongly convex subproblem and propagates the cost-to-go one step. Only
// the stage-0 gains are deployed.
SynthesisResult rhpg_synthesize(const PolytopicModel& model,
                                const CostSpec& cost, int horizon,
                                const QuadratureRule& rule,
                                const TerminalCost& terminal,
                                const SynthesisOptions& options = {});

// One application of the integrated Bellman step: solve the stage
// subproblem against the given field, then propagate. Iterating this from
// the terminal weight reproduces rhpg_synthesize exactly (same code path).
std::pair<StageGains, CostToGoField> bellman_step(
    const PolytopicModel& model, const CostSpec& cost,
    const CostToGoField& field, const QuadratureRule& rule,
    const SolverChoice& solver = SolverChoice::direct(), int threads = 1);

// Zero-terminal synthesis at increasing horizons until the deployed gains
// are jointly stable on the grid; used as the default feasible controller.
StageGains find_feasible_gains(const PolytopicModel& model,
                               const CostSpec& cost, const QuadratureRule& rule,
                               const EvalGrid& grid, int initial_horizon = 200,
                               int max_horizon = 3200, int threads = 1);

struct SweepRow {
  std::string terminal;
  int horizon = 0;
  double cost = 0.0;      // J_N
  double rho_max = 0.0;
  std::optional<double> inf_cost;  // empty when not jointly stable
  bool stable = false;
  bool monotone_ok = true;
};

struct TerminalSummary {
  std::string terminal;
  // "non-decreasing" (zero terminal), "non-increasing" (terminal passing
  // the Lyapunov condition), or "none".
  std::string expected_direction;
  int violations = 0;
  double final_cost = 0.0;
};

struct SweepSummary {
  std::vector<TerminalSummary> terminals;
  // max relative spread of J_N across terminals at the largest horizon.
  double final_spread = 0.0;
  double relative_tolerance = 1e-9;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  SweepSummary summary;
};

struct SweepOptions {
  SolverChoice solver = SolverChoice::direct();
  int threads = 1;
  // Feasible gains used for the Lyapunov-condition direction check; found
  // automatically from a zero-terminal run when absent.
  std::optional<StageGains> feasible_gains;
  double relative_tolerance = 1e-9;
};

// Runs synthesis and evaluation for every (terminal, horizon) cell.
// Horizons must be sorted ascending. Monotonicity flags compare each cell
// against the previous horizon of the same terminal at the stated relative
// tolerance.
SweepTable horizon_sweep(const PolytopicModel& model, const CostSpec& cost,
                         const std::vector<int>& horizons,
                         const QuadratureRule& rule,
                         const std::vector<TerminalCost>& terminals,
                         const EvalGrid& grid,
                         const SweepOptions& options = {});

}  // namespace prhpg
