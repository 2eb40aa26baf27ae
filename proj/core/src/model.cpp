#include "prhpg/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "prhpg/errors.hpp"
#include "prhpg/linalg.hpp"

namespace prhpg {

PolytopicModel::PolytopicModel(ParameterDomain domain, WeightingBasis basis,
                               std::vector<VertexSystem> vertices)
    : domain_(std::move(domain)), basis_(std::move(basis)),
      vertices_(std::move(vertices)) {
  if (basis_.dim() != domain_.dim()) {
    throw std::invalid_argument(
        "PolytopicModel: basis dimension does not match the domain");
  }
  if (static_cast<int>(vertices_.size()) != basis_.vertex_count()) {
    std::ostringstream msg;
    msg << "PolytopicModel: " << vertices_.size() << " vertices but basis has "
        << basis_.vertex_count();
    throw std::invalid_argument(msg.str());
  }
  n_ = static_cast<int>(vertices_.front().A.rows());
  m_ = static_cast<int>(vertices_.front().B.cols());
  if (n_ < 1 || m_ < 1) {
    throw std::invalid_argument("PolytopicModel: empty system matrices");
  }
  for (const auto& v : vertices_) {
    if (v.A.rows() != n_ || v.A.cols() != n_ || v.B.rows() != n_ ||
        v.B.cols() != m_) {
      throw std::invalid_argument(
          "PolytopicModel: inconsistent vertex matrix shapes");
    }
  }
}

StageGains StageGains::zero(int nv, int m, int n) {
  StageGains g;
  g.K.assign(nv, Eigen::MatrixXd::Zero(m, n));
  return g;
}

Eigen::VectorXd StageGains::flatten() const {
  if (K.empty()) return Eigen::VectorXd();
  const Eigen::Index block = K.front().size();
  Eigen::VectorXd v(block * static_cast<Eigen::Index>(K.size()));
  for (std::size_t i = 0; i < K.size(); ++i) {
    // Eigen matrices are column-major, so .data() is already vec(K_i).
    v.segment(static_cast<Eigen::Index>(i) * block, block) =
        Eigen::Map<const Eigen::VectorXd>(K[i].data(), block);
  }
  return v;
}

StageGains StageGains::unflatten(const Eigen::Ref<const Eigen::VectorXd>& v,
                                 int nv, int m, int n) {
  if (v.size() != static_cast<Eigen::Index>(nv) * m * n) {
    throw std::invalid_argument("StageGains::unflatten: length mismatch");
  }
  StageGains g;
  g.K.reserve(nv);
  const Eigen::Index block = static_cast<Eigen::Index>(m) * n;
  for (int i = 0; i < nv; ++i) {
    Eigen::MatrixXd Ki(m, n);
    Eigen::Map<Eigen::VectorXd>(Ki.data(), block) =
        v.segment(static_cast<Eigen::Index>(i) * block, block);
    g.K.push_back(std::move(Ki));
  }
  return g;
}

double StageGains::norm() const {
  double sq = 0.0;
  for (const auto& Ki : K) sq += Ki.squaredNorm();
  return std::sqrt(sq);
}

Eigen::VectorXd evaluate_weights(const PolytopicModel& model,
                                 const Eigen::Ref<const Eigen::VectorXd>& p) {
  model.domain().require_inside(p);
  return model.basis().evaluate(p);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> evaluate_system(
    const PolytopicModel& model, const Eigen::Ref<const Eigen::VectorXd>& p) {
  const Eigen::VectorXd alpha = evaluate_weights(model, p);
  Eigen::MatrixXd A =
      Eigen::MatrixXd::Zero(model.state_dim(), model.state_dim());
  Eigen::MatrixXd B =
      Eigen::MatrixXd::Zero(model.state_dim(), model.input_dim());
  for (int i = 0; i < model.vertex_count(); ++i) {
    A.noalias() += alpha(i) * model.vertex(i).A;
    B.noalias() += alpha(i) * model.vertex(i).B;
  }
  return {std::move(A), std::move(B)};
}

Eigen::MatrixXd blended_gain(const PolytopicModel& model,
                             const StageGains& gains,
                             const Eigen::Ref<const Eigen::VectorXd>& p) {
  if (gains.vertex_count() != model.vertex_count()) {
    throw std::invalid_argument("blended_gain: gain count mismatch");
  }
  const Eigen::VectorXd alpha = evaluate_weights(model, p);
  Eigen::MatrixXd K =
      Eigen::MatrixXd::Zero(model.input_dim(), model.state_dim());
  for (int i = 0; i < model.vertex_count(); ++i) {
    K.noalias() += alpha(i) * gains.K[i];
  }
  return K;
}

Eigen::MatrixXd closed_loop(const PolytopicModel& model,
                            const StageGains& gains,
                            const Eigen::Ref<const Eigen::VectorXd>& p) {
  const auto [A, B] = evaluate_system(model, p);
  return A + B * blended_gain(model, gains, p);
}

std::vector<std::vector<Eigen::MatrixXd>> vertex_cross_terms(
    const PolytopicModel& model, const StageGains& gains) {
  if (gains.vertex_count() != model.vertex_count()) {
    throw std::invalid_argument("vertex_cross_terms: gain count mismatch");
  }
  const int nv = model.vertex_count();
  std::vector<std::vector<Eigen::MatrixXd>> grid(nv);
  for (int i = 0; i < nv; ++i) {
    grid[i].reserve(nv);
    for (int j = 0; j < nv; ++j) {
      grid[i].push_back(model.vertex(i).A + model.vertex(i).B * gains.K[j]);
    }
  }
  return grid;
}

Eigen::MatrixXd gram_matrix(const PolytopicModel& model,
                            const QuadratureRule& rule) {
  if (!rule.domain().same_box(model.domain())) {
    throw std::invalid_argument(
        "gram_matrix: quadrature rule lives on a different domain");
  }
  const int nv = model.vertex_count();
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(nv, nv);
  for (int k = 0; k < rule.node_count(); ++k) {
    const Eigen::VectorXd alpha = model.basis().evaluate(rule.node(k));
    gamma.selfadjointView<Eigen::Lower>().rankUpdate(alpha, rule.weight(k));
  }
  gamma = gamma.selfadjointView<Eigen::Lower>();
  const double lambda_min = min_eigenvalue_sym(gamma);
  if (lambda_min <= 1e-12) {
    std::ostringstream msg;
    msg << "gram_matrix: Gram matrix is not positive definite (min eigenvalue "
        << lambda_min
        << "); the weighting functions are linearly dependent under this "
           "quadrature rule";
    throw NumericalError(msg.str());
  }
  return gamma;
}

}  // namespace prhpg
