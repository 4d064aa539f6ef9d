#include "monosi/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace monosi {

double kernel_value(double u) {
  if (u < -1.0 || u > 1.0) return 0.0;
  const double w = 1.0 - u * u;
  return (35.0 / 32.0) * w * w * w;
}

Bandwidth default_bandwidth(const Vector& projections, Eigen::Index n) {
  if (projections.size() < 2)
    throw std::invalid_argument("default_bandwidth: need at least two projections");
  const double range = projections.maxCoeff() - projections.minCoeff();
  if (range <= 0.0) throw std::invalid_argument("default_bandwidth: zero projection range");
  return Bandwidth{0.5 * range * std::pow(static_cast<double>(n), -1.0 / 7.0)};
}

double derivative_estimate(const JumpSet& js, double lo, double hi, double u, Bandwidth h) {
  if (h.h <= 0.0) throw std::invalid_argument("derivative_estimate: bandwidth must be positive");
  const double a = lo + h.h;
  const double b = hi - h.h;
  const double uc = (a <= b) ? std::clamp(u, a, b) : 0.5 * (lo + hi);

  // only jumps within [uc - h, uc + h] contribute
  const auto& tau = js.locations;
  const auto first = std::lower_bound(tau.begin(), tau.end(), uc - h.h);
  const auto last = std::upper_bound(tau.begin(), tau.end(), uc + h.h);
  double sum = 0.0;
  for (auto it = first; it != last; ++it) {
    const auto k = static_cast<std::size_t>(it - tau.begin());
    sum += kernel_value((uc - *it) / h.h) * js.sizes[k];
  }
  return sum / h.h;
}

double derivative_estimate(const IsotonicFit& fit, double u, Bandwidth h) {
  if (fit.knots.size() == 0) throw std::invalid_argument("derivative_estimate: empty fit");
  return derivative_estimate(jumps(fit), fit.knots[0], fit.knots[fit.knots.size() - 1], u, h);
}

}  // namespace monosi
