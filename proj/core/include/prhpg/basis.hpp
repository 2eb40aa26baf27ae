#pragma once

#include <Eigen/Core>
#include <vector>

namespace prhpg {

// One dimension's family of scalar weighting functions on an interval.
//
// Three kinds are shipped:
//   Constant      — the single function 1.
//   Hat           — piecewise-linear cardinal functions on a knot grid;
//                   non-negative and summing to one by construction.
//   Interpolated  — piecewise-linear interpolation of discretized rows
//                   (one row of function values per grid point), the form
//                   produced by the tensor-product model transform.
class UnivariateFamily {
 public:
  enum class Kind { kConstant, kHat, kInterpolated };

  static UnivariateFamily constant();
  // knots: strictly increasing, at least one.
  static UnivariateFamily hat(Eigen::VectorXd knots);
  // grid: strictly increasing, at least two points; rows is
  // grid.size() x count, row g holding the function values at grid(g).
  static UnivariateFamily interpolated(Eigen::VectorXd grid,
                                       Eigen::MatrixXd rows);

  Kind kind() const { return kind_; }
  int count() const { return count_; }
  const Eigen::VectorXd& grid() const { return grid_; }
  const Eigen::MatrixXd& rows() const { return rows_; }

  // Values of all functions at x. x is clamped to the grid range to guard
  // against roundoff at the box faces; callers validate domain membership.
  Eigen::VectorXd evaluate(double x) const;

 private:
  UnivariateFamily(Kind kind, int count, Eigen::VectorXd grid,
                   Eigen::MatrixXd rows);

  Kind kind_;
  int count_;
  Eigen::VectorXd grid_;
  Eigen::MatrixXd rows_;  // empty for constant; identity-free for hat
};

// Tensor product of per-dimension families. The joint index runs over the
// per-dimension indices with the LAST dimension fastest: for counts
// (c_0, ..., c_{d-1}), index i = ((i_0 * c_1 + i_1) * c_2 + i_2) * ...
class WeightingBasis {
 public:
  explicit WeightingBasis(std::vector<UnivariateFamily> per_dim);

  int dim() const { return static_cast<int>(dims_.size()); }
  int vertex_count() const { return vertex_count_; }
  const UnivariateFamily& family(int k) const { return dims_.at(k); }
  const std::vector<UnivariateFamily>& families() const { return dims_; }

  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& p) const;

 private:
  std::vector<UnivariateFamily> dims_;
  int vertex_count_;
};

}  // namespace prhpg
