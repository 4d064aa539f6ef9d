#include "monosi/score.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace monosi {

namespace {

// (1/n) sum_i X_i w_i r_i with r_i the isotonic-fit residuals and w_i either 1
// or the smoothed derivative at the i-th projection.
Vector residual_moment(const Dataset& data, const Vector& alpha, bool efficient,
                       BandwidthRule rule, double fixed_h) {
  const ProjectedData pd = project(data, alpha);
  const IsotonicFit fit = fit_isotonic(pd);
  const auto n = data.n();
  const auto m = pd.z.size();

  Vector per_group_weight;
  if (efficient) {
    per_group_weight.resize(m);
    const JumpSet js = jumps(fit);
    if (js.locations.empty() || m < 2) {
      // constant fit: derivative identically zero
      per_group_weight.setZero();
    } else {
      Bandwidth h{};
      if (rule == BandwidthRule::fixed) {
        if (fixed_h <= 0.0) throw std::invalid_argument("score: fixed bandwidth must be > 0");
        h.h = fixed_h;
      } else {
        h = default_bandwidth(pd.z, n);
      }
      const double lo = pd.z[0], hi = pd.z[m - 1];
      for (Eigen::Index g = 0; g < m; ++g)
        per_group_weight[g] = derivative_estimate(js, lo, hi, pd.z[g], h);
    }
  }

  Vector coeff(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int g = pd.group_of[i];
    const double r = data.y()[i] - fit.values[g];
    coeff[i] = efficient ? per_group_weight[g] * r : r;
  }
  return data.x().transpose() * coeff / static_cast<double>(n);
}

void check_unit(const Vector& alpha) {
  if (std::abs(alpha.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("score: alpha is not unit norm");
}

}  // namespace

Vector simple_score_param(const Vector& beta, const Dataset& data, const Chart& chart) {
  const Vector alpha = to_sphere(chart, beta);
  const Vector v = residual_moment(data, alpha, false, BandwidthRule::range_rule, 0.0);
  return jacobian(chart, beta).transpose() * v;
}

Vector efficient_score_param(const Vector& beta, const Dataset& data, const Chart& chart,
                             Bandwidth h) {
  const Vector alpha = to_sphere(chart, beta);
  const Vector v = residual_moment(data, alpha, true, BandwidthRule::fixed, h.h);
  return jacobian(chart, beta).transpose() * v;
}

Vector simple_score_lagrange(const Vector& alpha, const Dataset& data) {
  check_unit(alpha);
  const Vector v = residual_moment(data, alpha, false, BandwidthRule::range_rule, 0.0);
  return v - alpha * alpha.dot(v);
}

Vector efficient_score_lagrange(const Vector& alpha, const Dataset& data, Bandwidth h) {
  check_unit(alpha);
  const Vector v = residual_moment(data, alpha, true, BandwidthRule::fixed, h.h);
  return v - alpha * alpha.dot(v);
}

double score_objective(const Vector& point, const Dataset& data, const ScoreConfig& config) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (!point.allFinite()) return inf;

  Vector alpha;
  if (config.formulation == Formulation::parametrized) {
    if (point.size() != data.d() - 1)
      throw std::invalid_argument("score_objective: point has length " +
                                  std::to_string(point.size()) + ", expected d-1 = " +
                                  std::to_string(data.d() - 1));
    Chart chart = config.chart;
    chart.dim = static_cast<int>(data.d());
    if (!in_chart_domain(chart, point)) return inf;
    if (chart.kind == ChartKind::half_sphere && point.squaredNorm() >= 1.0)
      return inf;  // the Jacobian is singular on the equator
    alpha = to_sphere(chart, point);
    const Vector v = residual_moment(data, alpha, config.efficient, config.bandwidth_rule,
                                     config.fixed_h);
    return (jacobian(chart, point).transpose() * v).squaredNorm();
  }

  if (point.size() != data.d())
    throw std::invalid_argument("score_objective: point has length " +
                                std::to_string(point.size()) + ", expected d = " +
                                std::to_string(data.d()));
  const double nrm = point.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) return inf;
  alpha = point / nrm;
  const Vector v =
      residual_moment(data, alpha, config.efficient, config.bandwidth_rule, config.fixed_h);
  return (v - alpha * alpha.dot(v)).squaredNorm();
}

}  // namespace monosi
