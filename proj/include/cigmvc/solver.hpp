#pragma once

#include <vector>

#include "cigmvc/types.hpp"

namespace cigmvc {

/// Row-update rule for the unified graph.
enum class URule {
  /// Exact minimizer of the alpha-weighted row problem.
  kWeighted,
  /// Unweighted mean of per-view targets a_v - lambda/(2 V alpha_v) p.
  /// Coincides with kWeighted when all alpha_v are equal.
  kPerViewMean,
};

struct Hyperparams {
  int k = 15;
  double lambda0 = 64.0;
  double beta = 1e-12;
  double gamma = 1e-5;
  int n_clusters = 2;
  int max_iter = 50;
  double tol = 1e-6;
  bool baseline_mode = false;
  URule u_rule = URule::kWeighted;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

inline constexpr double kAlphaGuard = 1e-10;
inline constexpr double kZeroEigenvalue = 1e-10;
inline constexpr double kLambdaMin = 1e-8;
inline constexpr double kLambdaMax = 1e8;

/// V x V matrix with beta on the diagonal and gamma elsewhere.
Matrix penalty_matrix(int n_views, double beta, double gamma);

struct TraceRecord {
  int iteration = 0;
  /// sum_v alpha_v ||U - S_v||_F^2 with alpha_v = 1 / (2 ||U - S_v||_F)
  double sig_fit = 0.0;
  double objective = 0.0;
  double lambda = 0.0;
  int zero_eig_count = 0;
  /// Condition number of the A-update system; 1 in baseline mode.
  double c_condition = 1.0;
  double relative_change = 0.0;
};

struct SolverState {
  Matrix U;
  Matrix F;
  Vector alpha;
  std::vector<Matrix> A;
  double lambda = 1.0;
  /// Ascending spectrum of L_U from the most recent F update.
  Vector eigenvalues;
  std::vector<TraceRecord> trace;
  bool converged = false;
};

struct Embedding {
  Matrix F;
  /// Full ascending spectrum of the decomposed Laplacian.
  Vector eigenvalues;
};

struct AUpdate {
  std::vector<Matrix> unclamped;
  std::vector<Matrix> clamped;
  double condition_number = 1.0;
};

SolverState init_state(const std::vector<SimilarityGraph>& sigs, const Hyperparams& hp);

/// alpha_v = 1 / (2 max(||U - A_v||_F, kAlphaGuard)).
Vector update_alpha(const SolverState& state);

/// P_ij = ||f^i - f^j||^2 over the rows of F.
Matrix compute_p(const Matrix& F);

/// Row-wise simplex-constrained update of U with alpha, F, A and lambda fixed.
Matrix update_u(const SolverState& state, const Hyperparams& hp);

/// Unnormalized Laplacian of (U + U^T) / 2.
Matrix laplacian(const Matrix& U);

/// Eigenvectors of the C smallest eigenvalues of symmetric `L`.
Embedding update_f(const Matrix& L, int n_clusters);

/// 2 diag(alpha) + B, the system matrix shared by every entry of the A update.
Matrix a_system_matrix(const Vector& alpha, const Matrix& B);

/// Consistent parts: solves (2 diag(alpha) + B) x = h for every entry
/// position at once, then clamps into [0, S_v].
AUpdate update_a(const SolverState& state, const std::vector<SimilarityGraph>& sigs,
                 const Hyperparams& hp);

int count_zero_eigenvalues(const Vector& eigenvalues);

/// Halves lambda when L_U has more than C near-zero eigenvalues, doubles it when
/// fewer; result clamped to [kLambdaMin, kLambdaMax].
double adapt_lambda(double lambda, const Vector& eigenvalues, int n_clusters);

/// Fit of U to the raw graphs, sum_v alpha_v ||U - S_v||_F^2, with the
/// graph-based weights alpha_v = 1 / (2 ||U - S_v||_F) (guarded). Identical for
/// both modes, so traces of the full method and the baseline are comparable.
double sig_fit(const SolverState& state, const std::vector<SimilarityGraph>& sigs);

/// Penalty term sum_{v,w} b_vw <S_v - A_v, S_w - A_w> / 2.
double inconsistency_penalty(const std::vector<Matrix>& A, const std::vector<SimilarityGraph>& sigs,
                             const Matrix& B);

/// Full objective sum_v alpha_v ||U - A_v||^2 + 2 lambda Tr(F^T L_U F) + penalty.
double objective(const SolverState& state, const std::vector<SimilarityGraph>& sigs,
                 const Hyperparams& hp);

/// Alternating minimization until the relative change of U drops below tol or
/// max_iter is reached. In baseline mode A_v stays pinned to S_v.
SolverState run(const std::vector<SimilarityGraph>& sigs, const Hyperparams& hp);

struct ClusterResult {
  Labels labels;
  /// Connected components found before any merge/split repair.
  int component_count = 0;
};

/// Reads cluster labels off the connected components of U. When the count
/// differs from C, components are merged (largest inter-block weight first)
/// or the largest one is split by spectral bisection until C remain.
ClusterResult extract_clusters(const Matrix& U, int n_clusters);

}  // namespace cigmvc
