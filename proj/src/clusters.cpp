#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "cigmvc/solver.hpp"

namespace cigmvc {

namespace {

constexpr double kEdgeThreshold = 1e-10;

using Blocks = std::vector<std::vector<int>>;

Blocks connected_components(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<int> seen(n, 0);
  Blocks blocks;
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<int> members;
    std::queue<int> frontier;
    frontier.push(start);
    seen[start] = 1;
    while (!frontier.empty()) {
      const int i = frontier.front();
      frontier.pop();
      members.push_back(i);
      for (int j = 0; j < n; ++j) {
        if (!seen[j] && j != i && w(i, j) >= kEdgeThreshold) {
          seen[j] = 1;
          frontier.push(j);
        }
      }
    }
    std::sort(members.begin(), members.end());
    blocks.push_back(std::move(members));
  }
  return blocks;
}

double block_mass(const Matrix& w, const std::vector<int>& a, const std::vector<int>& b) {
  double mass = 0.0;
  for (int i : a) {
    for (int j : b) mass += w(i, j);
  }
  return mass;
}

void merge_strongest_pair(const Matrix& w, Blocks& blocks) {
  std::size_t best_a = 0;
  std::size_t best_b = 1;
  double best_mass = -1.0;
  std::size_t best_size = std::numeric_limits<std::size_t>::max();
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    for (std::size_t b = a + 1; b < blocks.size(); ++b) {
      const double mass = block_mass(w, blocks[a], blocks[b]);
      const std::size_t size = blocks[a].size() + blocks[b].size();
      // Ties (typically all-zero masses) prefer the smallest merged block.
      if (mass > best_mass || (mass == best_mass && size < best_size)) {
        best_mass = mass;
        best_size = size;
        best_a = a;
        best_b = b;
      }
    }
  }
  blocks[best_a].insert(blocks[best_a].end(), blocks[best_b].begin(), blocks[best_b].end());
  std::sort(blocks[best_a].begin(), blocks[best_a].end());
  blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(best_b));
}

void split_largest(const Matrix& w, Blocks& blocks) {
  std::size_t target = 0;
  for (std::size_t b = 1; b < blocks.size(); ++b) {
    if (blocks[b].size() > blocks[target].size()) target = b;
  }
  const std::vector<int> members = blocks[target];
  const int m = static_cast<int>(members.size());
  Matrix sub(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) sub(i, j) = i == j ? 0.0 : w(members[i], members[j]);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(laplacian(sub));
  Vector fiedler = eig.eigenvectors().col(1);
  Eigen::Index peak = 0;
  fiedler.cwiseAbs().maxCoeff(&peak);
  if (fiedler(peak) < 0) fiedler = -fiedler;

  std::vector<int> pos;
  std::vector<int> neg;
  for (int i = 0; i < m; ++i) (fiedler(i) > 0 ? pos : neg).push_back(members[i]);
  if (pos.empty() || neg.empty()) {
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fiedler(a) > fiedler(b); });
    pos.clear();
    neg.clear();
    for (int r = 0; r < m; ++r) (r < m / 2 ? pos : neg).push_back(members[order[r]]);
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  blocks[target] = std::move(pos);
  blocks.push_back(std::move(neg));
}

}  // namespace

ClusterResult extract_clusters(const Matrix& U, int n_clusters) {
  const int n = static_cast<int>(U.rows());
  if (n_clusters < 1 || n_clusters > n) {
    throw std::invalid_argument("extract_clusters: need 1 <= C <= N, got C=" + std::to_string(n_clusters));
  }
  const Matrix w = 0.5 * (U + U.transpose());
  Blocks blocks = connected_components(w);
  ClusterResult result;
  result.component_count = static_cast<int>(blocks.size());

  while (static_cast<int>(blocks.size()) > n_clusters) merge_strongest_pair(w, blocks);
  while (static_cast<int>(blocks.size()) < n_clusters) split_largest(w, blocks);

  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  result.labels.assign(n, 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int i : blocks[b]) result.labels[i] = static_cast<int>(b);
  }
  return result;
}

}  // namespace cigmvc
