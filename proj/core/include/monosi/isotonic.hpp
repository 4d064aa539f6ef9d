#pragma once

#include "monosi/dataset.hpp"

namespace monosi {

/// The least-squares monotone (non-decreasing) fit at the distinct projections:
/// the left derivative of the greatest convex minorant of the cumulative sum
/// diagram, extended as a right-continuous step function, constant outside
/// [knots.front(), knots.back()].
struct IsotonicFit {
  Vector knots;              ///< strictly increasing
  Vector values;             ///< non-decreasing
  std::vector<int> weights;  ///< multiplicities carried over from ProjectedData
};

/// The atoms of d(psi-hat): each location is the right knot of an increase.
struct JumpSet {
  std::vector<double> locations;
  std::vector<double> sizes;  ///< all strictly positive
};

/// Weighted pool-adjacent-violators. Linear time; the unique minimizer of
/// sum_i w_i (ybar_i - v_i)^2 over non-decreasing v.
IsotonicFit fit_isotonic(const ProjectedData& pd);

/// Step-function evaluation: values[i] for knots[i] <= u < knots[i+1],
/// values.front() left of the knots, values.back() from the last knot on.
double evaluate(const IsotonicFit& fit, double u);

JumpSet jumps(const IsotonicFit& fit);

/// (1/n) sum_i (Y_i - psi-hat(alpha^T X_i))^2; fit must come from
/// project(data, alpha).
double sum_of_squares(const IsotonicFit& fit, const Dataset& data, const Vector& alpha);

/// CSV with header "knot,value", one row per knot, 17 significant digits.
void save_stepfunction(const IsotonicFit& fit, const std::string& path);

}  // namespace monosi
