#pragma once

#include <Eigen/Core>
#include <functional>
#include <utility>
#include <vector>

#include "prhpg/model.hpp"

namespace prhpg {

// Maps a parameter point to the pair (A(p), B(p)).
using SystemSampler = std::function<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>(
    const Eigen::VectorXd&)>;

struct TpTransformResult {
  PolytopicModel model;
  // Largest per-grid-point reconstruction error, Frobenius norm relative to
  // the largest sampled system norm.
  double max_grid_error_rel = 0.0;
  double max_grid_error_abs = 0.0;
  // Frobenius bound on the whole-tensor truncation error:
  // sqrt(sum over modes of the squared discarded singular values).
  double truncation_bound_abs = 0.0;
  // Per-mode singular values of the unfolded system tensor.
  std::vector<Eigen::VectorXd> mode_singular_values;
};

// Converts a sampled parameter-dependent system into polytopic form.
//
// The system is sampled on a uniform tensor grid, each parameter mode is
// compressed by SVD of the corresponding unfolding to the requested rank,
// and the retained singular vectors are converted into weighting functions
// that are non-negative and sum to one:
//   1. an affine change of basis makes every discretized row sum to one
//      (requires the constant function to lie in the retained span);
//   2. a second change of basis maps all rows into a bounding simplex built
//      on extremal rows, making every entry non-negative.
// Continuous weighting functions are the piecewise-linear interpolants of
// the discretized rows. Both steps are invertible, so with full ranks the
// blended model reproduces the samples exactly.
//
// Throws std::invalid_argument for rank/grid misuse and NumericalError when
// the normalization cannot satisfy the weighting-function requirements
// (tolerance 1e-8) -- failure is loud, values are never clipped.
TpTransformResult tp_transform(const ParameterDomain& domain,
                               const SystemSampler& sampler,
                               const std::vector<int>& grid_counts,
                               const std::vector<int>& ranks);

namespace detail {
// Sum-normalization followed by the bounding-simplex non-negativity
// transform. U must have full column rank. Returns the discretized
// weighting rows Lambda = U * T with T invertible.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> snnn_normalize(
    const Eigen::Ref<const Eigen::MatrixXd>& U);
}  // namespace detail

}  // namespace prhpg
