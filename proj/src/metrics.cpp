#include "cigmvc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace cigmvc {

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weights) {
  const int n = static_cast<int>(weights.size());
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  // Shortest augmenting path with potentials, minimizing the negated weights.
  // Arrays are 1-based; index 0 is the virtual source column.
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> min_slack(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weights[i0 - 1][j - 1] - row_pot[i0] - col_pot[j];
        if (cur < min_slack[j]) {
          min_slack[j] = cur;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          row_pot[match[j]] += delta;
          col_pot[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j] != 0) assignment[match[j] - 1] = j - 1;
  }
  return assignment;
}

namespace {

void check_pair(const Labels& pred, const Labels& truth, const char* who) {
  if (pred.size() != truth.size()) {
    throw std::invalid_argument(std::string(who) + ": length mismatch (" + std::to_string(pred.size()) + " vs " +
                                std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) throw std::invalid_argument(std::string(who) + ": empty label vectors");
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] < 0 || truth[i] < 0) {
      throw std::invalid_argument(std::string(who) + ": negative label at position " + std::to_string(i));
    }
  }
}

// Maps arbitrary label ids to dense 0..K-1 in ascending id order.
std::vector<int> densify(const Labels& labels, int& n_labels) {
  std::map<int, int> ids;
  for (int l : labels) ids.emplace(l, 0);
  int next = 0;
  for (auto& [id, dense] : ids) dense = next++;
  n_labels = next;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids[labels[i]];
  return out;
}

}  // namespace

double accuracy(const Labels& pred, const Labels& truth) {
  check_pair(pred, truth, "accuracy");
  int kp = 0, kt = 0;
  const auto p = densify(pred, kp);
  const auto t = densify(truth, kt);
  const int size = std::max(kp, kt);
  std::vector<std::vector<double>> counts(size, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < p.size(); ++i) counts[p[i]][t[i]] += 1.0;
  const auto assignment = max_weight_assignment(counts);
  double hits = 0.0;
  for (int r = 0; r < size; ++r) hits += counts[r][assignment[r]];
  return hits / static_cast<double>(pred.size());
}

double nmi(const Labels& pred, const Labels& truth) {
  check_pair(pred, truth, "nmi");
  int kp = 0, kt = 0;
  const auto p = densify(pred, kp);
  const auto t = densify(truth, kt);
  const double n = static_cast<double>(pred.size());
  std::vector<std::vector<double>> joint(kp, std::vector<double>(kt, 0.0));
  std::vector<double> mp(kp, 0.0), mt(kt, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    joint[p[i]][t[i]] += 1.0;
    mp[p[i]] += 1.0;
    mt[t[i]] += 1.0;
  }
  auto entropy = [n](const std::vector<double>& m) {
    double h = 0.0;
    for (double c : m) {
      if (c > 0) h -= (c / n) * std::log(c / n);
    }
    return h;
  };
  const double hp = entropy(mp);
  const double ht = entropy(mt);
  if (kp == 1 && kt == 1) return 1.0;
  if (kp == 1 || kt == 1) return 0.0;
  double mi = 0.0;
  for (int a = 0; a < kp; ++a) {
    for (int b = 0; b < kt; ++b) {
      const double c = joint[a][b];
      if (c > 0) mi += (c / n) * std::log(c * n / (mp[a] * mt[b]));
    }
  }
  const double value = mi / std::sqrt(hp * ht);
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace cigmvc
