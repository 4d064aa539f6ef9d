#pragma once

#include "monosi/dataset.hpp"

namespace monosi {

enum class ChartKind {
  spherical,    ///< angular chart; for d = 3 the (cos b1 sin b2, sin b1 sin b2, cos b2) ordering
  half_sphere,  ///< (b1, ..., b_{d-1}, sqrt(1 - |b|^2)), positive last coordinate
};

/// A local parametrization of the unit sphere in R^d by d-1 coordinates.
struct Chart {
  ChartKind kind = ChartKind::spherical;
  int dim = 3;  ///< ambient dimension d >= 2
};

/// S(beta): maps beta in R^{d-1} to a unit vector in R^d.
Vector to_sphere(const Chart& chart, const Vector& beta);

/// Inverse chart; at spherical-chart poles the canonical representative with
/// trailing free angles set to 0 is returned. Half-sphere requires a positive
/// last coordinate.
Vector from_sphere(const Chart& chart, const Vector& alpha);

/// d x (d-1) matrix of partial derivatives dS/dbeta_j; satisfies
/// S(beta)^T J_S(beta) = 0.
Matrix jacobian(const Chart& chart, const Vector& beta);

/// True when beta lies in the chart's domain (half-sphere: |beta| <= 1).
bool in_chart_domain(const Chart& chart, const Vector& beta);

}  // namespace monosi
