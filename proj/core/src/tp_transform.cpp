#include "prhpg/tp_transform.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "prhpg/errors.hpp"

namespace prhpg {

namespace detail {

namespace {

// Greedy selection of r affinely independent rows of W, preferring extremal
// ones: first the row farthest from the data centroid, then rows farthest
// from the affine hull of the current selection. Returns row indices, or an
// empty vector when the rows are affinely degenerate.
std::vector<Eigen::Index> select_extremal_rows(const Eigen::MatrixXd& W) {
  const Eigen::Index g = W.rows();
  const Eigen::Index r = W.cols();
  const Eigen::RowVectorXd centroid = W.colwise().mean();
  const double scale = std::max(1.0, W.norm());

  std::vector<Eigen::Index> chosen;
  Eigen::Index first = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < g; ++i) {
    const double dist = (W.row(i) - centroid).norm();
    if (dist > best) {
      best = dist;
      first = i;
    }
  }
  chosen.push_back(first);

  // Orthonormal directions spanning the affine hull of the chosen rows.
  Eigen::MatrixXd directions(r, r - 1);
  Eigen::Index ndir = 0;
  while (static_cast<Eigen::Index>(chosen.size()) < r) {
    Eigen::Index next = -1;
    double max_dist = -1.0;
    for (Eigen::Index i = 0; i < g; ++i) {
      Eigen::VectorXd v = (W.row(i) - W.row(chosen.front())).transpose();
      for (Eigen::Index k = 0; k < ndir; ++k) {
        v -= directions.col(k).dot(v) * directions.col(k);
      }
      const double dist = v.norm();
      if (dist > max_dist) {
        max_dist = dist;
        next = i;
      }
    }
    if (max_dist <= 1e-10 * scale) return {};  // affinely degenerate
    Eigen::VectorXd v = (W.row(next) - W.row(chosen.front())).transpose();
    for (Eigen::Index k = 0; k < ndir; ++k) {
      v -= directions.col(k).dot(v) * directions.col(k);
    }
    directions.col(ndir++) = v / v.norm();
    chosen.push_back(next);
  }
  return chosen;
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> snnn_normalize(
    const Eigen::Ref<const Eigen::MatrixXd>& U) {
  const Eigen::Index g = U.rows();
  const Eigen::Index r = U.cols();
  if (r < 1 || g < r) {
    throw std::invalid_argument("snnn_normalize: need g >= r >= 1");
  }

  // Sum normalization: find c with U c = 1 (least squares; U has
  // orthonormal columns, so c = U^T 1) and build an invertible T_sn whose
  // row sums equal c, giving row sums of U T_sn equal to U c.
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g);
  const Eigen::VectorXd c = U.transpose() * ones;
  const double sn_residual = (U * c - ones).cwiseAbs().maxCoeff();
  if (sn_residual > 1e-8) {
    std::ostringstream msg;
    msg << "snnn_normalize: sum normalization infeasible; the constant "
           "function is not representable in the retained span (residual "
        << sn_residual << ")";
    throw NumericalError(msg.str());
  }
  Eigen::Index pivot = 0;
  c.cwiseAbs().maxCoeff(&pivot);
  Eigen::MatrixXd t_sn = Eigen::MatrixXd::Identity(r, r);
  t_sn.col(pivot) = c - Eigen::VectorXd::Ones(r);
  t_sn(pivot, pivot) = c(pivot);
  const Eigen::MatrixXd W = U * t_sn;

  if (r == 1) {
    return {W, t_sn};
  }

  // Non-negativity: rows of W live in the sum-one hyperplane. Build a
  // simplex containing them and re-express every row barycentrically.
  Eigen::MatrixXd V(r, r);
  const auto chosen = select_extremal_rows(W);
  if (!chosen.empty()) {
    for (Eigen::Index i = 0; i < r; ++i) V.row(i) = W.row(chosen[i]);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(V);
    // Row-wise barycentric coordinates: Lambda0 V = W.
    const Eigen::MatrixXd lambda0 =
        lu.transpose().solve(W.transpose()).transpose();
    const double min_coord = lambda0.minCoeff();
    if (min_coord < 0.0) {
      // Inflate the simplex about its own centroid just enough to contain
      // every row: coordinates transform as l' = l/s + (1 - 1/s)/r.
      const double s = (1.0 - static_cast<double>(r) * min_coord) *
                       (1.0 + 1e-12);
      const Eigen::RowVectorXd vc = V.colwise().mean();
      for (Eigen::Index i = 0; i < r; ++i) {
        V.row(i) = vc + s * (V.row(i) - vc);
      }
    }
  } else {
    // Degenerate data: rows span a lower-dimensional affine set. Use a
    // regular simplex centred at the data centroid, inflated to contain
    // all rows.
    const Eigen::RowVectorXd centroid = W.colwise().mean();
    double s = 1.0;
    for (Eigen::Index i = 0; i < g; ++i) {
      for (Eigen::Index j = 0; j < r; ++j) {
        s = std::max(s, static_cast<double>(r) * (centroid(j) - W(i, j)));
      }
    }
    s *= 1.0 + 1e-12;
    const Eigen::RowVectorXd uniform =
        Eigen::RowVectorXd::Constant(r, 1.0 / r);
    for (Eigen::Index i = 0; i < r; ++i) {
      Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(r);
      e(i) = 1.0;
      V.row(i) = centroid + s * (e - uniform);
    }
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(V);
  const Eigen::MatrixXd lambda =
      lu.transpose().solve(W.transpose()).transpose();
  const Eigen::MatrixXd t_nn = lu.solve(Eigen::MatrixXd::Identity(r, r));
  const Eigen::MatrixXd t_total = t_sn * t_nn;

  const double row_sum_dev = (lambda.rowwise().sum().array() - 1.0)
                                 .abs()
                                 .maxCoeff();
  const double min_entry = lambda.minCoeff();
  if (row_sum_dev > 1e-8 || min_entry < -1e-8) {
    std::ostringstream msg;
    msg << "snnn_normalize: normalized weights violate the requirements "
           "(max row-sum deviation "
        << row_sum_dev << ", min entry " << min_entry << ")";
    throw NumericalError(msg.str());
  }
  return {lambda, t_total};
}

}  // namespace detail

namespace {

// Dense tensor with dimensions dims[0] x ... x dims.back(), flattened with
// the LAST index fastest.
struct FlatTensor {
  std::vector<Eigen::Index> dims;
  Eigen::VectorXd data;

  Eigen::Index total() const {
    return std::accumulate(dims.begin(), dims.end(), Eigen::Index{1},
                           std::multiplies<>());
  }
};

// Applies the matrix map along mode k: out has dims[k] replaced by M.rows()
// and entries out(..., j, ...) = sum_i M(j, i) in(..., i, ...).
FlatTensor mode_product(const FlatTensor& in, Eigen::Index k,
                        const Eigen::MatrixXd& M) {
  const Eigen::Index old_dim = in.dims[k];
  const Eigen::Index new_dim = M.rows();
  if (M.cols() != old_dim) {
    throw std::invalid_argument("mode_product: shape mismatch");
  }
  Eigen::Index suffix = 1;
  for (std::size_t j = k + 1; j < in.dims.size(); ++j) suffix *= in.dims[j];
  Eigen::Index prefix = 1;
  for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
    prefix *= in.dims[j];
  }

  FlatTensor out;
  out.dims = in.dims;
  out.dims[k] = new_dim;
  out.data.setZero(prefix * new_dim * suffix);
  for (Eigen::Index pre = 0; pre < prefix; ++pre) {
    for (Eigen::Index s = 0; s < suffix; ++s) {
      for (Eigen::Index j = 0; j < new_dim; ++j) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < old_dim; ++i) {
          acc += M(j, i) * in.data((pre * old_dim + i) * suffix + s);
        }
        out.data((pre * new_dim + j) * suffix + s) = acc;
      }
    }
  }
  return out;
}

// Mode-k unfolding: rows indexed by the k-th dimension, columns by all
// remaining indices in a fixed order.
Eigen::MatrixXd unfold(const FlatTensor& t, Eigen::Index k) {
  const Eigen::Index rows = t.dims[k];
  const Eigen::Index cols = t.total() / rows;
  Eigen::Index suffix = 1;
  for (std::size_t j = k + 1; j < t.dims.size(); ++j) suffix *= t.dims[j];
  const Eigen::Index prefix = t.total() / (rows * suffix);

  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index pre = 0; pre < prefix; ++pre) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index s = 0; s < suffix; ++s) {
        M(i, pre * suffix + s) = t.data((pre * rows + i) * suffix + s);
      }
    }
  }
  return M;
}

}  // namespace

TpTransformResult tp_transform(const ParameterDomain& domain,
                               const SystemSampler& sampler,
                               const std::vector<int>& grid_counts,
                               const std::vector<int>& ranks) {
  const int d = domain.dim();
  if (static_cast<int>(grid_counts.size()) != d ||
      static_cast<int>(ranks.size()) != d) {
    throw std::invalid_argument(
        "tp_transform: need one grid count and one rank per dimension");
  }
  for (int k = 0; k < d; ++k) {
    if (grid_counts[k] < 2) {
      throw std::invalid_argument("tp_transform: grid counts must be >= 2");
    }
    if (ranks[k] < 1 || ranks[k] > grid_counts[k]) {
      std::ostringstream msg;
      msg << "tp_transform: rank " << ranks[k] << " in dimension " << k
          << " must lie in [1, " << grid_counts[k] << "]";
      throw std::invalid_argument(msg.str());
    }
  }

  // Uniform sampling grids including the endpoints.
  std::vector<Eigen::VectorXd> grids(d);
  for (int k = 0; k < d; ++k) {
    grids[k].resize(grid_counts[k]);
    for (int i = 0; i < grid_counts[k]; ++i) {
      grids[k](i) = domain.lo()(k) +
                    (domain.hi()(k) - domain.lo()(k)) *
                        static_cast<double>(i) / (grid_counts[k] - 1);
    }
  }

  // Sample the system over the tensor grid (last dimension fastest).
  Eigen::Index total = 1;
  for (int k = 0; k < d; ++k) total *= grid_counts[k];
  std::vector<int> idx(d, 0);
  int n = 0, m = 0;
  FlatTensor samples;
  double max_sample_norm = 0.0;
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    Eigen::VectorXd p(d);
    for (int k = 0; k < d; ++k) p(k) = grids[k](idx[k]);
    const auto [A, B] = sampler(p);
    if (flat == 0) {
      n = static_cast<int>(A.rows());
      m = static_cast<int>(B.cols());
      if (A.cols() != n || B.rows() != n || n < 1 || m < 1) {
        throw std::invalid_argument(
            "tp_transform: sampler returned inconsistent matrix shapes");
      }
      samples.dims.assign(grid_counts.begin(), grid_counts.end());
      samples.dims.push_back(static_cast<Eigen::Index>(n) * (n + m));
      samples.data.resize(samples.total());
    }
    if (A.rows() != n || A.cols() != n || B.rows() != n || B.cols() != m) {
      throw std::invalid_argument(
          "tp_transform: sampler shape varies across the grid");
    }
    // Entries of [A B] row-major.
    const Eigen::Index entries = static_cast<Eigen::Index>(n) * (n + m);
    Eigen::Index e = 0;
    double sq = 0.0;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n + m; ++c, ++e) {
        const double v = c < n ? A(r, c) : B(r, c - n);
        samples.data(flat * entries + e) = v;
        sq += v * v;
      }
    }
    max_sample_norm = std::max(max_sample_norm, std::sqrt(sq));
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[k] < grid_counts[k]) break;
      idx[k] = 0;
    }
  }

  // Per-mode SVD, truncation, and weighting-function normalization.
  std::vector<Eigen::VectorXd> mode_singular_values;
  std::vector<Eigen::MatrixXd> lambdas(d);
  FlatTensor core = samples;
  double discarded_sq = 0.0;
  for (int k = 0; k < d; ++k) {
    const Eigen::MatrixXd M = unfold(samples, k);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
    const Eigen::VectorXd& sigma = svd.singularValues();
    mode_singular_values.push_back(sigma);
    for (Eigen::Index i = ranks[k]; i < sigma.size(); ++i) {
      discarded_sq += sigma(i) * sigma(i);
    }
    const Eigen::MatrixXd U = svd.matrixU().leftCols(ranks[k]);
    auto [lambda, T] = detail::snnn_normalize(U);
    lambdas[k] = std::move(lambda);
    // Absorb the inverse basis change into the core tensor.
    const Eigen::MatrixXd t_inv =
        Eigen::PartialPivLU<Eigen::MatrixXd>(T).solve(
            Eigen::MatrixXd::Identity(ranks[k], ranks[k]));
    core = mode_product(core, k, t_inv * U.transpose());
  }

  // Vertex systems from the core tensor.
  const Eigen::Index entries = static_cast<Eigen::Index>(n) * (n + m);
  Eigen::Index nv = 1;
  for (int k = 0; k < d; ++k) nv *= ranks[k];
  std::vector<VertexSystem> vertices;
  vertices.reserve(nv);
  for (Eigen::Index v = 0; v < nv; ++v) {
    Eigen::MatrixXd A(n, n), B(n, m);
    Eigen::Index e = 0;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n + m; ++c, ++e) {
        const double value = core.data(v * entries + e);
        if (c < n) {
          A(r, c) = value;
        } else {
          B(r, c - n) = value;
        }
      }
    }
    vertices.push_back({std::move(A), std::move(B)});
  }

  std::vector<UnivariateFamily> families;
  families.reserve(d);
  for (int k = 0; k < d; ++k) {
    families.push_back(UnivariateFamily::interpolated(grids[k], lambdas[k]));
  }

  TpTransformResult result{
      PolytopicModel(domain, WeightingBasis(std::move(families)),
                     std::move(vertices)),
      0.0, 0.0, std::sqrt(discarded_sq), std::move(mode_singular_values)};

  // Reconstruction diagnostics at every grid point.
  FlatTensor reconstructed = core;
  for (int k = 0; k < d; ++k) {
    reconstructed = mode_product(reconstructed, k, lambdas[k]);
  }
  double max_err = 0.0;
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    const double err = (reconstructed.data.segment(flat * entries, entries) -
                        samples.data.segment(flat * entries, entries))
                           .norm();
    max_err = std::max(max_err, err);
  }
  result.max_grid_error_abs = max_err;
  result.max_grid_error_rel =
      max_err / std::max(max_sample_norm, 1e-300);
  return result;
}

}  // namespace prhpg
