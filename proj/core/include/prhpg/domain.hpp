#pragma once

#include <Eigen/Core>

namespace prhpg {

// Compact box of scheduling parameters, carrying the uniform probability
// measure. Evaluation outside the box is a hard error everywhere in this
// library; there is no extrapolation.
class ParameterDomain {
 public:
  ParameterDomain(Eigen::VectorXd lo, Eigen::VectorXd hi);

  int dim() const { return static_cast<int>(lo_.size()); }
  const Eigen::VectorXd& lo() const { return lo_; }
  const Eigen::VectorXd& hi() const { return hi_; }

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& p) const;
  // Throws std::domain_error if p lies outside the box.
  void require_inside(const Eigen::Ref<const Eigen::VectorXd>& p) const;

  bool same_box(const ParameterDomain& other) const;

 private:
  Eigen::VectorXd lo_;
  Eigen::VectorXd hi_;
};

}  // namespace prhpg
