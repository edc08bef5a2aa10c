#pragma once

#include <vector>

#include <Eigen/Dense>

namespace cigmvc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;

/// One view's raw features: N samples (rows) by d_v features (columns).
struct FeatureMatrix {
  Matrix data;
  int view_id = 0;
};

/// Nonnegative, symmetric, zero-diagonal N x N graph built from one view.
struct SimilarityGraph {
  Matrix weights;
  int neighbor_count = 0;
};

}  // namespace cigmvc
