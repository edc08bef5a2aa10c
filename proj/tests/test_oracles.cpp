#include <random>

#include "doctest.h"

#include "oracles/oracles.hpp"

using namespace oracles;

TEST_CASE("oracle_simplex_qp base cases") {
  Vec v(2);
  v << 2, 0;
  Vec expected(2);
  expected << 1, 0;
  CHECK((oracle_simplex_qp(v) - expected).cwiseAbs().maxCoeff() == 0.0);
  Vec on(3);
  on << 0.1, 0.2, 0.7;
  CHECK((oracle_simplex_qp(on) - on).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(oracle_simplex_qp(Vec::Zero(5)), std::invalid_argument);
}

TEST_CASE("oracle_simplex_qp: the chosen support minimizes among feasible supports") {
  Vec v(3);
  v << 0.9, 0.3, -0.2;
  // Supports {0}: [1,0,0] obj 0.01+0.09+0.04; {0,1}: [0.8,0.2,0] obj 0.01+0.01+0.04.
  Vec s0(3), s01(3);
  s0 << 1, 0, 0;
  s01 << 0.8, 0.2, 0;
  const Vec best = oracle_simplex_qp(v);
  CHECK((best - s01).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((best - v).squaredNorm() < (s0 - v).squaredNorm());
  // Support {0,1,2} would need u_2 = -0.2 - (1.0-1)/3 < 0: infeasible.
}

TEST_CASE("oracles are deterministic given seeds") {
  std::mt19937_64 a(5), b(5);
  CHECK(random_graph(6, a) == random_graph(6, b));
  CHECK(random_simplex_point(4, a) == random_simplex_point(4, b));
}

TEST_CASE("oracle_a_update with V = 1 and beta = 0 clamps U") {
  std::mt19937_64 rng(1);
  const Mat S = random_graph(5, rng);
  const Mat U = Mat::Random(5, 5);
  Vec alpha(1);
  alpha << 0.7;
  const auto A = oracle_a_update(U, {S}, alpha, Mat::Zero(1, 1));
  CHECK((A[0] - U.cwiseMax(0.0).cwiseMin(S)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("jacobi eigenvalues of a diagonalizable example") {
  Mat m(3, 3);
  m << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  const Vec ev = jacobi_eigenvalues(m);
  CHECK(ev(0) == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(ev(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ev(2) == doctest::Approx(2 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("brute force accuracy") {
  CHECK(brute_force_accuracy({0, 1, 0, 1}, {0, 0, 1, 1}) == doctest::Approx(0.5));
  CHECK(brute_force_accuracy({2, 2, 0, 1}, {0, 0, 1, 2}) == doctest::Approx(1.0));
}
