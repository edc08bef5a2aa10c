#pragma once

#include <vector>

#include "cigmvc/types.hpp"

namespace cigmvc {

/// Maximum-weight one-to-one assignment on a square matrix (Hungarian method).
/// Returns assignment[row] = column.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weights);

/// Fraction of samples labelled correctly under the best one-to-one matching
/// of predicted to true labels. Unequal label counts are padded to square.
double accuracy(const Labels& pred, const Labels& truth);

/// I(pred; truth) / sqrt(H(pred) H(truth)), natural log. Two trivial
/// partitions score 1; one trivial partition scores 0.
double nmi(const Labels& pred, const Labels& truth);

}  // namespace cigmvc
