#pragma once

#include "monosi/isotonic.hpp"

namespace monosi {

enum class KernelKind { triweight };

/// Kernel choice. The triweight (35/32)(1-u^2)^3 is the lowest-order polynomial
/// kernel on [-1, 1] that is twice continuously differentiable on all of R.
struct KernelSpec {
  KernelKind name = KernelKind::triweight;
};

struct Bandwidth {
  double h = 0.0;  ///< > 0, in projection-axis units
};

/// Triweight kernel value at u.
double kernel_value(double u);

/// h = 0.5 * (max - min of projections) * n^(-1/7). Throws on zero range.
Bandwidth default_bandwidth(const Vector& projections, Eigen::Index n);

/// Smoothed derivative of the isotonic fit: (1/h) sum_j K((u - tau_j)/h) * jump_j.
/// Within h of either end of the knot range the value at the clamped point
/// clamp(u, lo + h, hi - h) is returned (the constant slope a local linear
/// extension of psi-hat induces); a knot range narrower than 2h clamps to the
/// range midpoint.
double derivative_estimate(const IsotonicFit& fit, double u, Bandwidth h);

/// Same, for a precomputed jump set over the knot range [lo, hi].
double derivative_estimate(const JumpSet& js, double lo, double hi, double u, Bandwidth h);

}  // namespace monosi
