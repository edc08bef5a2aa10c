#pragma once

#include "cigmvc/types.hpp"

namespace cigmvc {

/// Squared Euclidean distances between all pairs of rows of `x`.
/// Throws std::invalid_argument naming the first row with a non-finite entry.
Matrix pairwise_sq_distances(const Matrix& x);

/// Adaptive-neighbor weights for every row, before symmetrization.
///
/// Row i keeps its k nearest neighbors (self excluded, ties broken by index)
/// with weight (d_(k+1) - d_ij) / (k d_(k+1) - sum_{h<=k} d_(h)), so every
/// row sums to one. A vanishing denominator, e.g. from duplicated points,
/// falls back to 1/k on each of the k nearest.
Matrix adaptive_neighbor_weights(const Matrix& sq_distances, int k);

/// Returns (s + s^T) / 2.
Matrix symmetrize(const Matrix& s);

/// Builds the symmetrized similarity graph of one view. Requires 1 <= k <= N-2.
SimilarityGraph build_sig(const FeatureMatrix& x, int k);

/// Per-column z-scoring; constant columns are only centered.
Matrix standardize_columns(const Matrix& x);

}  // namespace cigmvc
