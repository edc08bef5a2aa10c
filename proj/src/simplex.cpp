#include "cigmvc/simplex.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace cigmvc {

Vector project_simplex(const Vector& v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v(a) > v(b); });

  double prefix = 0.0;
  double theta = 0.0;
  for (int rho = 1; rho <= n; ++rho) {
    prefix += v(order[rho - 1]);
    const double shift = (prefix - 1.0) / rho;
    if (v(order[rho - 1]) - shift > 0.0) theta = shift;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

}  // namespace cigmvc
