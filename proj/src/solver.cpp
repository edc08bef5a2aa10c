#include "cigmvc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cigmvc/simplex.hpp"

namespace cigmvc {

void Hyperparams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("Hyperparams: " + what); };
  if (!(lambda0 > 0)) fail("lambda0 must be > 0");
  if (!(beta > 0)) fail("beta must be > 0");
  if (!(gamma > 0)) fail("gamma must be > 0");
  if (n_clusters < 2) fail("n_clusters must be >= 2");
  if (max_iter < 1) fail("max_iter must be >= 1");
  if (!(tol > 0)) fail("tol must be > 0");
  if (k < 1) fail("k must be >= 1");
}

Matrix penalty_matrix(int n_views, double beta, double gamma) {
  Matrix b = Matrix::Constant(n_views, n_views, gamma);
  b.diagonal().setConstant(beta);
  return b;
}

namespace {

int common_size(const std::vector<SimilarityGraph>& sigs) {
  if (sigs.empty()) throw std::invalid_argument("solver: at least one view is required");
  const auto n = sigs.front().weights.rows();
  for (std::size_t v = 0; v < sigs.size(); ++v) {
    const Matrix& w = sigs[v].weights;
    if (w.rows() != n || w.cols() != n) {
      std::ostringstream msg;
      msg << "solver: view " << v << " graph is " << w.rows() << "x" << w.cols() << ", expected " << n << "x"
          << n;
      throw std::invalid_argument(msg.str());
    }
  }
  return static_cast<int>(n);
}

Matrix project_rows(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.row(i) = project_simplex(m.row(i).transpose()).transpose();
  return out;
}

}  // namespace

SolverState init_state(const std::vector<SimilarityGraph>& sigs, const Hyperparams& hp) {
  hp.validate();
  const int n = common_size(sigs);
  if (hp.n_clusters > n) {
    throw std::invalid_argument("init_state: n_clusters=" + std::to_string(hp.n_clusters) + " exceeds N=" +
                                std::to_string(n));
  }
  const int n_views = static_cast<int>(sigs.size());
  SolverState state;
  state.alpha = Vector::Constant(n_views, 1.0 / n_views);
  Matrix weighted = Matrix::Zero(n, n);
  for (int v = 0; v < n_views; ++v) {
    state.A.push_back(sigs[v].weights);
    weighted += state.alpha(v) * sigs[v].weights;
  }
  state.U = project_rows(weighted);
  Embedding emb = update_f(laplacian(state.U), hp.n_clusters);
  state.F = std::move(emb.F);
  state.eigenvalues = std::move(emb.eigenvalues);
  state.lambda = hp.lambda0;
  return state;
}

Vector update_alpha(const SolverState& state) {
  Vector alpha(static_cast<Eigen::Index>(state.A.size()));
  for (std::size_t v = 0; v < state.A.size(); ++v) {
    alpha(static_cast<Eigen::Index>(v)) = 1.0 / (2.0 * std::max((state.U - state.A[v]).norm(), kAlphaGuard));
  }
  return alpha;
}

Matrix compute_p(const Matrix& F) {
  const Vector norms = F.rowwise().squaredNorm();
  Matrix p = (-2.0 * F * F.transpose()).colwise() + norms;
  p.rowwise() += norms.transpose();
  p = p.cwiseMax(0.0);
  p.diagonal().setZero();
  return 0.5 * (p + p.transpose());
}

Matrix update_u(const SolverState& state, const Hyperparams& hp) {
  const Matrix p = compute_p(state.F);
  const int n_views = static_cast<int>(state.A.size());
  Matrix target = Matrix::Zero(state.U.rows(), state.U.cols());
  switch (hp.u_rule) {
    case URule::kWeighted: {
      // Row objective sum_v alpha_v ||u - a_v||^2 + lambda p^T u, completed to a square.
      const double total = state.alpha.sum();
      for (int v = 0; v < n_views; ++v) target += (state.alpha(v) / total) * state.A[v];
      target -= (state.lambda / (2.0 * total)) * p;
      break;
    }
    case URule::kPerViewMean: {
      for (int v = 0; v < n_views; ++v) {
        target += state.A[v] - (state.lambda / (2.0 * n_views * state.alpha(v))) * p;
      }
      target /= n_views;
      break;
    }
  }
  return project_rows(target);
}

Matrix laplacian(const Matrix& U) {
  Matrix w = -0.5 * (U + U.transpose());
  const Vector degree = -w.rowwise().sum();
  w.diagonal() += degree;
  return w;
}

Embedding update_f(const Matrix& L, int n_clusters) {
  if (n_clusters < 1 || n_clusters > L.rows()) {
    throw std::invalid_argument("update_f: need 1 <= C <= N, got C=" + std::to_string(n_clusters));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(L);
  if (eig.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "update_f: eigendecomposition of " << L.rows() << "x" << L.cols()
        << " Laplacian failed (finite=" << L.allFinite() << ", max |L_ij|=" << L.cwiseAbs().maxCoeff()
        << ", asymmetry=" << (L - L.transpose()).cwiseAbs().maxCoeff() << ")";
    throw std::runtime_error(msg.str());
  }
  return Embedding{eig.eigenvectors().leftCols(n_clusters), eig.eigenvalues()};
}

Matrix a_system_matrix(const Vector& alpha, const Matrix& B) {
  Matrix c = B;
  c.diagonal() += 2.0 * alpha;
  return c;
}

AUpdate update_a(const SolverState& state, const std::vector<SimilarityGraph>& sigs, const Hyperparams& hp) {
  const int n_views = static_cast<int>(sigs.size());
  const Matrix b = penalty_matrix(n_views, hp.beta, hp.gamma);
  const Matrix c = a_system_matrix(state.alpha, b);

  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = n_views * std::numeric_limits<double>::epsilon() * sv(0);
  Vector inv_sv = Vector::Zero(n_views);
  for (int i = 0; i < n_views; ++i) {
    if (sv(i) > cutoff) inv_sv(i) = 1.0 / sv(i);
  }
  const Matrix c_pinv = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();

  AUpdate out;
  out.condition_number =
      sv(n_views - 1) > 0 ? sv(0) / sv(n_views - 1) : std::numeric_limits<double>::infinity();

  std::vector<Matrix> h(n_views);
  for (int v = 0; v < n_views; ++v) {
    h[v] = 2.0 * state.alpha(v) * state.U;
    for (int w = 0; w < n_views; ++w) h[v] += b(v, w) * sigs[w].weights;
  }
  for (int v = 0; v < n_views; ++v) {
    Matrix a = Matrix::Zero(state.U.rows(), state.U.cols());
    for (int w = 0; w < n_views; ++w) a += c_pinv(v, w) * h[w];
    out.clamped.push_back(a.cwiseMax(0.0).cwiseMin(sigs[v].weights));
    out.unclamped.push_back(std::move(a));
  }
  return out;
}

int count_zero_eigenvalues(const Vector& eigenvalues) {
  return static_cast<int>((eigenvalues.array() < kZeroEigenvalue).count());
}

double adapt_lambda(double lambda, const Vector& eigenvalues, int n_clusters) {
  const int zeros = count_zero_eigenvalues(eigenvalues);
  if (zeros > n_clusters) lambda /= 2.0;
  if (zeros < n_clusters) lambda *= 2.0;
  return std::clamp(lambda, kLambdaMin, kLambdaMax);
}

double sig_fit(const SolverState& state, const std::vector<SimilarityGraph>& sigs) {
  double total = 0.0;
  for (const auto& sig : sigs) {
    const double dist_sq = (state.U - sig.weights).squaredNorm();
    total += dist_sq / (2.0 * std::max(std::sqrt(dist_sq), kAlphaGuard));
  }
  return total;
}

double inconsistency_penalty(const std::vector<Matrix>& A, const std::vector<SimilarityGraph>& sigs,
                             const Matrix& B) {
  const int n_views = static_cast<int>(sigs.size());
  std::vector<Matrix> e(n_views);
  for (int v = 0; v < n_views; ++v) e[v] = sigs[v].weights - A[v];
  double total = 0.0;
  for (int v = 0; v < n_views; ++v) {
    for (int w = 0; w < n_views; ++w) total += B(v, w) * e[v].cwiseProduct(e[w]).sum();
  }
  return 0.5 * total;
}

double objective(const SolverState& state, const std::vector<SimilarityGraph>& sigs, const Hyperparams& hp) {
  double fit = 0.0;
  for (std::size_t v = 0; v < state.A.size(); ++v) {
    fit += state.alpha(static_cast<Eigen::Index>(v)) * (state.U - state.A[v]).squaredNorm();
  }
  const double rank_term = 2.0 * state.lambda * (state.F.transpose() * laplacian(state.U) * state.F).trace();
  const Matrix b = penalty_matrix(static_cast<int>(sigs.size()), hp.beta, hp.gamma);
  return fit + rank_term + inconsistency_penalty(state.A, sigs, b);
}

SolverState run(const std::vector<SimilarityGraph>& sigs, const Hyperparams& hp) {
  SolverState state = init_state(sigs, hp);
  for (int iter = 1; iter <= hp.max_iter; ++iter) {
    const Matrix u_prev = state.U;
    state.alpha = update_alpha(state);
    state.U = update_u(state, hp);
    Embedding emb = update_f(laplacian(state.U), hp.n_clusters);
    state.F = std::move(emb.F);
    state.eigenvalues = std::move(emb.eigenvalues);

    TraceRecord rec;
    if (!hp.baseline_mode) {
      AUpdate a = update_a(state, sigs, hp);
      state.A = std::move(a.clamped);
      rec.c_condition = a.condition_number;
    }

    rec.iteration = iter;
    rec.sig_fit = sig_fit(state, sigs);
    rec.objective = objective(state, sigs, hp);
    rec.lambda = state.lambda;
    rec.zero_eig_count = count_zero_eigenvalues(state.eigenvalues);
    rec.relative_change = (state.U - u_prev).norm() / std::max(u_prev.norm(), 1e-12);
    state.trace.push_back(rec);

    state.lambda = adapt_lambda(state.lambda, state.eigenvalues, hp.n_clusters);
    if (rec.relative_change < hp.tol) {
      state.converged = true;
      break;
    }
  }
  return state;
}

}  // namespace cigmvc
