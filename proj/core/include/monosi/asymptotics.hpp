#pragma once

#include <map>
#include <string>

#include "monosi/estimators.hpp"
#include "monosi/sphere.hpp"

namespace monosi {

enum class BenchmarkModelKind { uniform_cubic_d3, normal_cubic };

/// The two simulation benchmark families: psi0(x) = x^3, alpha0 = (1,..,1)/sqrt(d),
/// unit noise, covariates iid U[1,2] (d = 3 only) or iid N(0,1).
struct BenchmarkModel {
  BenchmarkModelKind kind = BenchmarkModelKind::uniform_cubic_d3;
  int d = 3;

  static BenchmarkModel uniform_cubic_d3() { return {BenchmarkModelKind::uniform_cubic_d3, 3}; }
  static BenchmarkModel normal_cubic(int d);
};

/// Reference scalars per estimator: the limiting n*cov diagonal/off-diagonal
/// and the n = 1000 finite-sample diagonal. NaN where no reference exists.
struct TableReference {
  double diag_inf;
  double offdiag_inf;
  double diag_n1000;
};

/// Closed-form curvature/score matrices and limiting covariances for a
/// benchmark model, plus the published reference scalars.
struct AsymptoticReference {
  Matrix A;           ///< E[psi0' Cov(X | alpha0^T X)]
  Matrix Sigma;       ///< E[eps^2 (X - E(X|..))(X - E(X|..))^T]
  Matrix Atilde;      ///< E[psi0'^2 Cov(X | alpha0^T X)]
  Matrix Sigmatilde;
  Matrix sse_cov;     ///< A^- Sigma A^-
  Matrix ese_cov;     ///< Atilde^- Sigmatilde Atilde^-
  Vector alpha0;
  std::map<EstimatorKind, TableReference> table;
};

AsymptoticReference benchmark_matrices(const BenchmarkModel& model);

/// A^- Sigma A^- computed through the chart: A^- = J_S (J_S^T A J_S)^{-1} J_S^T
/// at beta0 = from_sphere(alpha0). Throws when the inner matrix is singular.
Matrix sandwich_covariance(const Matrix& a, const Matrix& sigma, const Vector& alpha0,
                           const Chart& chart);

struct PenroseResult {
  bool pass = false;
  double max_deviation = 0.0;
};

/// Checks the four defining properties of the Moore-Penrose inverse:
/// AXA = A, XAX = X, (AX)^T = AX, (XA)^T = XA, each within tol.
PenroseResult penrose_check(const Matrix& a, const Matrix& candidate, double tol = 1e-10);

/// JSON rendering of an AsymptoticReference (matrices as row-major arrays).
std::string to_json_string(const AsymptoticReference& ref);

}  // namespace monosi
