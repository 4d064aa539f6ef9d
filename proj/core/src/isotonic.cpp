#include "monosi/isotonic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace monosi {

IsotonicFit fit_isotonic(const ProjectedData& pd) {
  const auto m = pd.z.size();
  if (m == 0) throw std::invalid_argument("fit_isotonic: empty ProjectedData");
  if (pd.ybar.size() != m || static_cast<Eigen::Index>(pd.weights.size()) != m)
    throw std::invalid_argument("fit_isotonic: inconsistent ProjectedData sizes");

  // Block stack with running weighted means. An unmerged block keeps its ybar
  // verbatim, so already-monotone input round-trips bit-exactly.
  std::vector<double> sum(m);
  std::vector<double> weight(m);
  std::vector<double> mean(m);
  std::vector<Eigen::Index> span(m);
  Eigen::Index top = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    sum[top] = pd.ybar[i] * pd.weights[i];
    weight[top] = pd.weights[i];
    mean[top] = pd.ybar[i];
    span[top] = 1;
    ++top;
    while (top >= 2 && mean[top - 2] > mean[top - 1]) {
      sum[top - 2] += sum[top - 1];
      weight[top - 2] += weight[top - 1];
      span[top - 2] += span[top - 1];
      mean[top - 2] = sum[top - 2] / weight[top - 2];
      --top;
    }
  }

  IsotonicFit fit;
  fit.knots = pd.z;
  fit.weights = pd.weights;
  fit.values.resize(m);
  Eigen::Index pos = 0;
  for (Eigen::Index b = 0; b < top; ++b) {
    for (Eigen::Index k = 0; k < span[b]; ++k) fit.values[pos++] = mean[b];
  }
  return fit;
}

double evaluate(const IsotonicFit& fit, double u) {
  const auto m = fit.knots.size();
  if (m == 0) throw std::invalid_argument("evaluate: empty fit");
  if (u < fit.knots[0]) return fit.values[0];
  if (u >= fit.knots[m - 1]) return fit.values[m - 1];
  // largest i with knots[i] <= u
  const double* begin = fit.knots.data();
  const double* it = std::upper_bound(begin, begin + m, u);
  return fit.values[static_cast<Eigen::Index>(it - begin) - 1];
}

JumpSet jumps(const IsotonicFit& fit) {
  JumpSet js;
  for (Eigen::Index i = 1; i < fit.values.size(); ++i) {
    if (fit.values[i] > fit.values[i - 1]) {
      js.locations.push_back(fit.knots[i]);
      js.sizes.push_back(fit.values[i] - fit.values[i - 1]);
    }
  }
  return js;
}

double sum_of_squares(const IsotonicFit& fit, const Dataset& data, const Vector& alpha) {
  const auto n = data.n();
  const auto total_weight =
      std::accumulate(fit.weights.begin(), fit.weights.end(), Eigen::Index{0});
  if (total_weight != n)
    throw std::invalid_argument("sum_of_squares: fit weights sum to " +
                                std::to_string(total_weight) + ", dataset has n = " +
                                std::to_string(n));
  const Vector t = project_values(data, alpha);
  double ssq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = data.y()[i] - evaluate(fit, t[i]);
    ssq += r * r;
  }
  return ssq / static_cast<double>(n);
}

void save_stepfunction(const IsotonicFit& fit, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << "knot,value\n";
  char buf[40];
  for (Eigen::Index i = 0; i < fit.knots.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", fit.knots[i]);
    out << buf << ",";
    std::snprintf(buf, sizeof buf, "%.17g", fit.values[i]);
    out << buf << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace monosi
