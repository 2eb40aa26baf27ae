#include "prhpg/basis.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace prhpg {

namespace {

void require_strictly_increasing(const Eigen::VectorXd& v, const char* what) {
  for (Eigen::Index i = 0; i + 1 < v.size(); ++i) {
    if (!(v(i) < v(i + 1))) {
      throw std::invalid_argument(std::string(what) +
                                  ": grid must be strictly increasing");
    }
  }
}

// Piecewise-linear interpolation weights: returns (segment, t) with x in
// [grid(segment), grid(segment+1)] and blend factor t in [0, 1].
std::pair<Eigen::Index, double> locate(const Eigen::VectorXd& grid, double x) {
  const Eigen::Index n = grid.size();
  if (x <= grid(0)) return {0, 0.0};
  if (x >= grid(n - 1)) return {n - 2, 1.0};
  const double* begin = grid.data();
  const double* it = std::upper_bound(begin, begin + n, x);
  Eigen::Index seg = (it - begin) - 1;
  const double t = (x - grid(seg)) / (grid(seg + 1) - grid(seg));
  return {seg, t};
}

}  // namespace

UnivariateFamily::UnivariateFamily(Kind kind, int count, Eigen::VectorXd grid,
                                   Eigen::MatrixXd rows)
    : kind_(kind), count_(count), grid_(std::move(grid)),
      rows_(std::move(rows)) {}

UnivariateFamily UnivariateFamily::constant() {
  return UnivariateFamily(Kind::kConstant, 1, Eigen::VectorXd(),
                          Eigen::MatrixXd());
}

UnivariateFamily UnivariateFamily::hat(Eigen::VectorXd knots) {
  if (knots.size() < 1) {
    throw std::invalid_argument("hat basis needs at least one knot");
  }
  require_strictly_increasing(knots, "hat basis");
  const int count = static_cast<int>(knots.size());
  return UnivariateFamily(Kind::kHat, count, std::move(knots),
                          Eigen::MatrixXd());
}

UnivariateFamily UnivariateFamily::interpolated(Eigen::VectorXd grid,
                                                Eigen::MatrixXd rows) {
  if (grid.size() < 2) {
    throw std::invalid_argument(
        "interpolated basis needs at least two grid points");
  }
  require_strictly_increasing(grid, "interpolated basis");
  if (rows.rows() != grid.size() || rows.cols() < 1) {
    throw std::invalid_argument(
        "interpolated basis: rows must be grid-size x count");
  }
  const int count = static_cast<int>(rows.cols());
  return UnivariateFamily(Kind::kInterpolated, count, std::move(grid),
                          std::move(rows));
}

Eigen::VectorXd UnivariateFamily::evaluate(double x) const {
  switch (kind_) {
    case Kind::kConstant:
      return Eigen::VectorXd::Ones(1);
    case Kind::kHat: {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(count_);
      if (count_ == 1) {
        out(0) = 1.0;
        return out;
      }
      const auto [seg, t] = locate(grid_, x);
      out(seg) = 1.0 - t;
      out(seg + 1) = t;
      return out;
    }
    case Kind::kInterpolated: {
      const auto [seg, t] = locate(grid_, x);
      return (1.0 - t) * rows_.row(seg).transpose() +
             t * rows_.row(seg + 1).transpose();
    }
  }
  throw std::logic_error("unreachable basis kind");
}

WeightingBasis::WeightingBasis(std::vector<UnivariateFamily> per_dim)
    : dims_(std::move(per_dim)) {
  if (dims_.empty()) {
    throw std::invalid_argument("WeightingBasis: need at least one dimension");
  }
  long long count = 1;
  for (const auto& f : dims_) {
    count *= f.count();
    if (count <= 0 || count > (1LL << 30)) {
      throw std::invalid_argument("WeightingBasis: vertex count overflow");
    }
  }
  vertex_count_ = static_cast<int>(count);
}

Eigen::VectorXd WeightingBasis::evaluate(
    const Eigen::Ref<const Eigen::VectorXd>& p) const {
  if (p.size() != static_cast<Eigen::Index>(dims_.size())) {
    throw std::invalid_argument(
        "WeightingBasis::evaluate: parameter dimension mismatch");
  }
  Eigen::VectorXd alpha = Eigen::VectorXd::Ones(1);
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    const Eigen::VectorXd vals = dims_[k].evaluate(p(static_cast<int>(k)));
    Eigen::VectorXd next(alpha.size() * vals.size());
    Eigen::Index idx = 0;
    for (Eigen::Index a = 0; a < alpha.size(); ++a) {
      for (Eigen::Index b = 0; b < vals.size(); ++b) {
        next(idx++) = alpha(a) * vals(b);
      }
    }
    alpha.swap(next);
  }
  return alpha;
}

}  // namespace prhpg
