#pragma once

#include "cigmvc/types.hpp"

namespace cigmvc {

/// Euclidean projection of `v` onto the probability simplex
/// {u : u >= 0, sum(u) = 1} by the sort-and-threshold method.
Vector project_simplex(const Vector& v);

}  // namespace cigmvc
