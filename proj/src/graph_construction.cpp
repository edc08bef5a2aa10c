#include "cigmvc/graph_construction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cigmvc {

Matrix pairwise_sq_distances(const Matrix& x) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (!x.row(i).allFinite()) {
      throw std::invalid_argument("pairwise_sq_distances: non-finite value in row " + std::to_string(i));
    }
  }
  const Vector norms = x.rowwise().squaredNorm();
  Matrix d = (-2.0 * x * x.transpose()).colwise() + norms;
  d.rowwise() += norms.transpose();
  // The Gram expansion leaves rounding residue; restore exact structure.
  d = d.cwiseMax(0.0);
  d.diagonal().setZero();
  return 0.5 * (d + d.transpose());
}

Matrix adaptive_neighbor_weights(const Matrix& sq_distances, int k) {
  const int n = static_cast<int>(sq_distances.rows());
  if (k < 1 || k > n - 2) {
    throw std::invalid_argument("adaptive_neighbor_weights: need 1 <= k <= N-2, got k=" + std::to_string(k) +
                                " with N=" + std::to_string(n));
  }
  Matrix w = Matrix::Zero(n, n);
  std::vector<int> order(n - 1);
  for (int i = 0; i < n; ++i) {
    int pos = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i) order[pos++] = j;
    }
    auto row = sq_distances.row(i);
    std::partial_sort(order.begin(), order.begin() + k + 1, order.end(), [&](int a, int b) {
      return row(a) < row(b) || (row(a) == row(b) && a < b);
    });
    const double d_next = row(order[k]);
    double sum_nearest = 0.0;
    for (int h = 0; h < k; ++h) sum_nearest += row(order[h]);
    const double denom = k * d_next - sum_nearest;
    if (denom > 1e-14 * std::max(1.0, std::abs(k * d_next))) {
      for (int h = 0; h < k; ++h) w(i, order[h]) = (d_next - row(order[h])) / denom;
    } else {
      for (int h = 0; h < k; ++h) w(i, order[h]) = 1.0 / k;
    }
  }
  return w;
}

Matrix symmetrize(const Matrix& s) { return 0.5 * (s + s.transpose()); }

SimilarityGraph build_sig(const FeatureMatrix& x, int k) {
  if (x.data.rows() < 2 || x.data.cols() < 1) {
    throw std::invalid_argument("build_sig: view " + std::to_string(x.view_id) + " needs N >= 2 and d >= 1");
  }
  return SimilarityGraph{symmetrize(adaptive_neighbor_weights(pairwise_sq_distances(x.data), k)), k};
}

Matrix standardize_columns(const Matrix& x) {
  Matrix out = x.rowwise() - x.colwise().mean();
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double sd = std::sqrt(out.col(c).squaredNorm() / n);
    if (sd > 0) out.col(c) /= sd;
  }
  return out;
}

}  // namespace cigmvc
