#pragma once

// Straight-line reference implementations for small instances. Nothing here
// calls into the cigmvc library.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

Mat naive_sq_distances(const Mat& x);

/// Pre-symmetrization adaptive-neighbor weights, written out literally.
Mat naive_sig_weights(const Mat& x, int k);

/// Exact simplex projection by enumerating all 2^n - 1 supports (n <= 4).
/// Throws std::invalid_argument for longer inputs.
Vec oracle_simplex_qp(const Vec& v);

/// Best point of a uniform grid with `resolution` steps per axis on the simplex.
Vec grid_simplex_min(const Vec& v, int resolution);

/// Per-entry V x V dense solve of the A-subproblem stationarity system, then clamp.
std::vector<Mat> oracle_a_update_unclamped(const Mat& U, const std::vector<Mat>& S, const Vec& alpha,
                                           const Mat& B);
std::vector<Mat> oracle_a_update(const Mat& U, const std::vector<Mat>& S, const Vec& alpha, const Mat& B);

/// gamma = 0: each view is a scalar problem, A_v = clamp((2 a U + b S_v)/(2 a + b)).
std::vector<Mat> decoupled_a_update(const Mat& U, const std::vector<Mat>& S, const Vec& alpha, double beta);

/// sum_v alpha_v ||U - A_v||^2 + (1/2) sum_{v,w} b_vw <S_v - A_v, S_w - A_w>.
double a_subproblem_objective(const Mat& U, const std::vector<Mat>& A, const std::vector<Mat>& S,
                              const Vec& alpha, const Mat& B);

/// Full objective with the Laplacian trace evaluated by explicit loops.
double full_objective(const Mat& U, const Mat& F, const std::vector<Mat>& A, const std::vector<Mat>& S,
                      const Vec& alpha, const Mat& B, double lambda);

/// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
Vec jacobi_eigenvalues(Mat a);

/// Uniform random point on the simplex of dimension n.
Vec random_simplex_point(int n, std::mt19937_64& rng);

/// Best accuracy over all label permutations (C <= 8).
double brute_force_accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

/// Normalized spectral clustering of one graph with deterministic k-means.
std::vector<int> single_view_spectral(const Mat& w, int n_clusters);

/// Random nonnegative symmetric zero-diagonal matrix, rows roughly stochastic.
Mat random_graph(int n, std::mt19937_64& rng);

/// Small random problem: graphs S_v, a feasible state (U rows on the simplex,
/// orthonormal F, 0 <= A_v <= S_v) and penalties with 2 diag(alpha) + 2B > 0.
struct OracleInstance {
  std::uint64_t seed = 0;
  int n = 0;
  int n_views = 0;
  int n_clusters = 0;
  std::vector<Mat> S;
  Mat U;
  Mat F;
  std::vector<Mat> A;
  Vec alpha;
  double beta = 0.0;
  double gamma = 0.0;
  double lambda = 1.0;
};

OracleInstance random_instance(std::uint64_t seed, int max_n = 10, int max_views = 5, int max_clusters = 3);

}  // namespace oracles
