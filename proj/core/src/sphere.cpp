#include "monosi/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monosi {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

void check_beta_size(const Chart& chart, const Vector& beta) {
  if (chart.dim < 2) throw std::invalid_argument("Chart: need dim >= 2");
  if (beta.size() != chart.dim - 1)
    throw std::invalid_argument("chart: beta has length " + std::to_string(beta.size()) +
                                ", expected " + std::to_string(chart.dim - 1));
}

void check_alpha(const Chart& chart, const Vector& alpha) {
  if (alpha.size() != chart.dim)
    throw std::invalid_argument("chart: alpha has length " + std::to_string(alpha.size()) +
                                ", expected " + std::to_string(chart.dim));
  if (std::abs(alpha.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("chart: alpha is not unit norm");
}

double wrap_angle(double a) {
  if (a < 0.0) a += kTwoPi;
  return a;
}

}  // namespace

bool in_chart_domain(const Chart& chart, const Vector& beta) {
  if (beta.size() != chart.dim - 1) return false;
  if (!beta.allFinite()) return false;
  if (chart.kind == ChartKind::half_sphere) return beta.squaredNorm() <= 1.0;
  return true;
}

Vector to_sphere(const Chart& chart, const Vector& beta) {
  check_beta_size(chart, beta);
  const int d = chart.dim;
  Vector alpha(d);

  switch (chart.kind) {
    case ChartKind::half_sphere: {
      const double rest = 1.0 - beta.squaredNorm();
      if (rest < 0.0) throw std::domain_error("half-sphere chart: |beta| > 1");
      alpha.head(d - 1) = beta;
      alpha[d - 1] = std::sqrt(rest);
      return alpha;
    }
    case ChartKind::spherical: {
      if (d == 3) {
        // (cos b1 sin b2, sin b1 sin b2, cos b2)
        alpha[0] = std::cos(beta[0]) * std::sin(beta[1]);
        alpha[1] = std::sin(beta[0]) * std::sin(beta[1]);
        alpha[2] = std::cos(beta[1]);
        return alpha;
      }
      // (cos b1, sin b1 cos b2, ..., sin b1 ... sin b_{d-2} cos b_{d-1},
      //  sin b1 ... sin b_{d-1})
      double prod = 1.0;
      for (int i = 0; i < d - 1; ++i) {
        alpha[i] = prod * std::cos(beta[i]);
        prod *= std::sin(beta[i]);
      }
      alpha[d - 1] = prod;
      return alpha;
    }
  }
  throw std::logic_error("unreachable chart kind");
}

Vector from_sphere(const Chart& chart, const Vector& alpha) {
  check_alpha(chart, alpha);
  const int d = chart.dim;
  Vector beta(d - 1);

  switch (chart.kind) {
    case ChartKind::half_sphere: {
      if (!(alpha[d - 1] > 0.0))
        throw std::domain_error("half-sphere chart: last coordinate must be positive");
      beta = alpha.head(d - 1);
      return beta;
    }
    case ChartKind::spherical: {
      if (d == 3) {
        const double c = std::clamp(alpha[2], -1.0, 1.0);
        beta[1] = std::acos(c);
        beta[0] = (alpha.head(2).norm() == 0.0) ? 0.0 : wrap_angle(std::atan2(alpha[1], alpha[0]));
        return beta;
      }
      // beta_i = atan2(|tail|, alpha_i) for i < d-2, last angle in [0, 2pi)
      for (int i = 0; i < d - 2; ++i) {
        const double tail = alpha.tail(d - 1 - i).norm();
        beta[i] = std::atan2(tail, alpha[i]);
      }
      beta[d - 2] = (alpha.tail(2).norm() == 0.0)
                        ? 0.0
                        : wrap_angle(std::atan2(alpha[d - 1], alpha[d - 2]));
      return beta;
    }
  }
  throw std::logic_error("unreachable chart kind");
}

Matrix jacobian(const Chart& chart, const Vector& beta) {
  check_beta_size(chart, beta);
  const int d = chart.dim;
  Matrix j = Matrix::Zero(d, d - 1);

  switch (chart.kind) {
    case ChartKind::half_sphere: {
      const double rest = 1.0 - beta.squaredNorm();
      if (rest < 0.0) throw std::domain_error("half-sphere chart: |beta| > 1");
      if (rest == 0.0) throw std::domain_error("half-sphere chart: Jacobian singular at |beta| = 1");
      const double inv = 1.0 / std::sqrt(rest);
      j.topLeftCorner(d - 1, d - 1).setIdentity();
      j.row(d - 1) = -inv * beta.transpose();
      return j;
    }
    case ChartKind::spherical: {
      if (d == 3) {
        const double c1 = std::cos(beta[0]), s1 = std::sin(beta[0]);
        const double c2 = std::cos(beta[1]), s2 = std::sin(beta[1]);
        j(0, 0) = -s1 * s2;
        j(0, 1) = c1 * c2;
        j(1, 0) = c1 * s2;
        j(1, 1) = s1 * c2;
        j(2, 0) = 0.0;
        j(2, 1) = -s2;
        return j;
      }
      Vector cosb(d - 1), sinb(d - 1);
      for (int k = 0; k < d - 1; ++k) {
        cosb[k] = std::cos(beta[k]);
        sinb[k] = std::sin(beta[k]);
      }
      // alpha_i = prod_{k<i} sin b_k * cos b_i (i < d-1); alpha_{d-1} = prod sin
      const auto skip_product = [&](int upto, int skip) {
        double p = 1.0;
        for (int k = 0; k < upto; ++k)
          if (k != skip) p *= sinb[k];
        return p;
      };
      for (int i = 0; i < d - 1; ++i) {
        for (int q = 0; q < i; ++q) j(i, q) = skip_product(i, q) * cosb[q] * cosb[i];
        j(i, i) = -skip_product(i, -1) * sinb[i];
      }
      for (int q = 0; q < d - 1; ++q) j(d - 1, q) = skip_product(d - 1, q) * cosb[q];
      return j;
    }
  }
  throw std::logic_error("unreachable chart kind");
}

}  // namespace monosi
