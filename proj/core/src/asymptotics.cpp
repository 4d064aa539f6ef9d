#include "monosi/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace monosi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// M = 3 I - 1 1^T, the rank-(d-1) matrix every d=3 benchmark display is a
// multiple of (diag 2, off-diagonal -1 for d = 3).
Matrix exchangeable(int d) {
  return static_cast<double>(d) * Matrix::Identity(d, d) - Matrix::Ones(d, d);
}

}  // namespace

BenchmarkModel BenchmarkModel::normal_cubic(int d) {
  if (d < 2) throw std::invalid_argument("BenchmarkModel: need d >= 2");
  return {BenchmarkModelKind::normal_cubic, d};
}

AsymptoticReference benchmark_matrices(const BenchmarkModel& model) {
  AsymptoticReference ref;

  if (model.kind == BenchmarkModelKind::uniform_cubic_d3) {
    if (model.d != 3)
      throw std::invalid_argument("benchmark_matrices: uniform-cubic model is d = 3 only");
    const Matrix m = exchangeable(3);
    // 17/30 is pinned by J_S^T A J_S = diag(17/15, 17/10) at beta0 and by
    // A^- Sigma A^- = (25/2601) m; verified against quadrature of the
    // defining expectation.
    ref.A = (17.0 / 30.0) * m;
    ref.Sigma = (1.0 / 36.0) * m;
    ref.Atilde = (89953.0 / 7560.0) * m;
    ref.Sigmatilde = ref.Atilde;
    ref.sse_cov = (25.0 / 2601.0) * m;
    ref.ese_cov = (840.0 / 89953.0) * m;
    ref.alpha0 = Vector::Constant(3, 1.0 / std::sqrt(3.0));
    ref.table[EstimatorKind::sse] = {50.0 / 2601.0, -25.0 / 2601.0, 0.0204};
    ref.table[EstimatorKind::ese] = {1680.0 / 89953.0, -840.0 / 89953.0, 0.0199};
    ref.table[EstimatorKind::lse] = {kNaN, kNaN, 0.0496};
    ref.table[EstimatorKind::mrce] = {0.0214, -0.0107, 0.0343};
    return ref;
  }

  const int d = model.d;
  const Matrix q = Matrix::Identity(d, d) - Matrix::Ones(d, d) / static_cast<double>(d);
  // N(0, I) covariates: Cov(X | alpha0^T X) = I - alpha0 alpha0^T = Q exactly,
  // E[3 T^2] = 3 and E[9 T^4] = 27 for T ~ N(0,1).
  ref.A = 3.0 * q;
  ref.Sigma = q;
  ref.Atilde = 27.0 * q;
  ref.Sigmatilde = ref.Atilde;
  ref.sse_cov = q / 9.0;
  ref.ese_cov = q / 27.0;  // = Sigma_d = (1/(27d)) (d I - 1 1^T)
  ref.alpha0 = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  const double dd = static_cast<double>(d);
  ref.table[EstimatorKind::sse] = {(dd - 1.0) / (9.0 * dd), -1.0 / (9.0 * dd),
                                   d == 3 ? 0.1234 : kNaN};
  ref.table[EstimatorKind::ese] = {(dd - 1.0) / (27.0 * dd), -1.0 / (27.0 * dd),
                                   d == 3 ? 0.0433 : kNaN};
  if (d == 3) {
    ref.table[EstimatorKind::lse] = {kNaN, kNaN, 0.1011};
    ref.table[EstimatorKind::mrce] = {0.3583, -0.1791, 0.4875};
    ref.table[EstimatorKind::hlflse] = {14.0 / 27.0, -7.0 / 27.0, 0.5205};
    ref.table[EstimatorKind::lflse] = {37.0 / 54.0, -5.0 / 54.0, 0.6763};
    ref.table[EstimatorKind::linear_norm1] = {22.0 / 27.0, -11.0 / 27.0, kNaN};
  }
  return ref;
}

Matrix sandwich_covariance(const Matrix& a, const Matrix& sigma, const Vector& alpha0,
                           const Chart& chart) {
  if (a.rows() != a.cols() || sigma.rows() != sigma.cols() || a.rows() != sigma.rows())
    throw std::invalid_argument("sandwich_covariance: A and Sigma must be square, same size");
  if (alpha0.size() != a.rows())
    throw std::invalid_argument("sandwich_covariance: alpha0 has wrong length");
  Chart c = chart;
  c.dim = static_cast<int>(a.rows());

  const Vector beta0 = from_sphere(c, alpha0);
  const Matrix j = jacobian(c, beta0);
  const Matrix inner = j.transpose() * a * j;
  const Eigen::FullPivLU<Matrix> lu(inner);
  if (!lu.isInvertible())
    throw std::runtime_error("sandwich_covariance: J_S^T A J_S is singular at beta0");
  const Matrix pinv = j * lu.solve(j.transpose());
  return pinv * sigma * pinv;
}

PenroseResult penrose_check(const Matrix& a, const Matrix& candidate, double tol) {
  if (a.rows() != a.cols() || candidate.rows() != candidate.cols() || a.rows() != candidate.rows())
    throw std::invalid_argument("penrose_check: matrices must be square and of equal size");
  const Matrix ax = a * candidate;
  const Matrix xa = candidate * a;
  double dev = (ax * a - a).cwiseAbs().maxCoeff();
  dev = std::max(dev, (xa * candidate - candidate).cwiseAbs().maxCoeff());
  dev = std::max(dev, (ax - ax.transpose()).cwiseAbs().maxCoeff());
  dev = std::max(dev, (xa - xa.transpose()).cwiseAbs().maxCoeff());
  return {dev <= tol, dev};
}

std::string to_json_string(const AsymptoticReference& ref) {
  using nlohmann::json;
  const auto matrix_to_json = [](const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  const auto nan_to_null = [](double v) {
    return std::isnan(v) ? json(nullptr) : json(v);
  };

  json out;
  out["A"] = matrix_to_json(ref.A);
  out["Sigma"] = matrix_to_json(ref.Sigma);
  out["Atilde"] = matrix_to_json(ref.Atilde);
  out["Sigmatilde"] = matrix_to_json(ref.Sigmatilde);
  out["sse_cov"] = matrix_to_json(ref.sse_cov);
  out["ese_cov"] = matrix_to_json(ref.ese_cov);
  out["alpha0"] = std::vector<double>(ref.alpha0.data(), ref.alpha0.data() + ref.alpha0.size());
  json table;
  for (const auto& [kind, row] : ref.table) {
    table[estimator_name(kind)] = {{"diag_inf", nan_to_null(row.diag_inf)},
                                   {"offdiag_inf", nan_to_null(row.offdiag_inf)},
                                   {"diag_n1000", nan_to_null(row.diag_n1000)}};
  }
  out["table"] = std::move(table);
  return out.dump(2);
}

}  // namespace monosi
