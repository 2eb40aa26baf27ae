#include "prhpg/domain.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace prhpg {

ParameterDomain::ParameterDomain(Eigen::VectorXd lo, Eigen::VectorXd hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size() || lo_.size() < 1) {
    throw std::invalid_argument(
        "ParameterDomain: lo and hi must have equal, positive length");
  }
  for (Eigen::Index k = 0; k < lo_.size(); ++k) {
    if (!(lo_(k) < hi_(k))) {
      std::ostringstream msg;
      msg << "ParameterDomain: empty interval in dimension " << k << " ["
          << lo_(k) << ", " << hi_(k) << "]";
      throw std::invalid_argument(msg.str());
    }
  }
}

bool ParameterDomain::contains(
    const Eigen::Ref<const Eigen::VectorXd>& p) const {
  if (p.size() != lo_.size()) return false;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) < lo_(k) || p(k) > hi_(k)) return false;
  }
  return true;
}

void ParameterDomain::require_inside(
    const Eigen::Ref<const Eigen::VectorXd>& p) const {
  if (p.size() != lo_.size()) {
    throw std::domain_error(
        "parameter dimension does not match the domain dimension");
  }
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p(k) < lo_(k) || p(k) > hi_(k)) {
      std::ostringstream msg;
      msg << "parameter component " << k << " = " << p(k)
          << " lies outside [" << lo_(k) << ", " << hi_(k) << "]";
      throw std::domain_error(msg.str());
    }
  }
}

bool ParameterDomain::same_box(const ParameterDomain& other) const {
  return lo_.size() == other.lo_.size() && lo_ == other.lo_ &&
         hi_ == other.hi_;
}

}  // namespace prhpg
