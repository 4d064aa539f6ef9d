#include "monosi/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "monosi/rng.hpp"

namespace monosi {

namespace {

constexpr std::uint64_t kLinkFreeStartSeed = 0x6d6f6e6f7369ULL;  // extra Broyden starts

Vector random_unit_vector(Rng& rng, Eigen::Index d) {
  Vector v(d);
  do {
    for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.normal();
  } while (v.norm() == 0.0);
  return v / v.norm();
}

// identifiability convention: first nonzero component positive
bool needs_sign_flip(const Vector& alpha) {
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (std::abs(alpha[i]) > 1e-12) return alpha[i] < 0.0;
  }
  return false;
}

double prediction_error(const IsotonicFit& fit, const Dataset& data, const Vector& alpha) {
  return static_cast<double>(data.n()) * sum_of_squares(fit, data, alpha);
}

bool all_responses_equal(const Dataset& data) {
  return data.y().maxCoeff() == data.y().minCoeff();
}

// Degenerate flat-link data: the score vanishes identically and the model is
// unidentified, so the start point is returned flagged rather than an error.
Estimate degenerate_estimate(EstimatorKind kind, const Dataset& data, const Vector& start,
                             const FitConfig& config) {
  Estimate est;
  est.estimator = kind;
  est.alpha_hat = start;
  if (needs_sign_flip(est.alpha_hat)) est.alpha_hat = -est.alpha_hat;
  if (config.score.formulation == Formulation::parametrized) {
    Chart chart = config.score.chart;
    chart.dim = static_cast<int>(data.d());
    try {
      est.beta_hat = from_sphere(chart, est.alpha_hat);
    } catch (const std::domain_error&) {
      // flipped start outside the chart's half: no chart coordinates to report
    }
  }
  est.link_fit = fit_isotonic(project(data, est.alpha_hat));
  est.criterion = 0.0;
  est.prediction_error = prediction_error(est.link_fit, data, est.alpha_hat);
  est.report.solution = est.alpha_hat;
  est.report.objective_or_residual = 0.0;
  est.report.converged = true;
  est.report.degenerate = true;
  return est;
}

// Pattern-search fit of a chart-parametrized objective (LSE, MRCE, and the
// parametrized score routes share this wiring).
Estimate fit_over_chart(EstimatorKind kind, const Dataset& data, const FitConfig& config,
                        const Vector& alpha_start,
                        const std::function<double(const Vector&)>& objective) {
  Chart chart = config.score.chart;
  chart.dim = static_cast<int>(data.d());
  // the half chart only covers the positive half: reflect starts into it
  Vector start = alpha_start;
  if (chart.kind == ChartKind::half_sphere && start[start.size() - 1] < 0.0) start = -start;
  const Vector beta0 = from_sphere(chart, start);
  SolveReport report = hooke_jeeves(objective, beta0, config.pattern);

  Estimate est;
  est.estimator = kind;
  est.beta_hat = report.solution;
  est.alpha_hat = to_sphere(chart, report.solution);
  est.criterion = report.objective_or_residual;
  est.report = std::move(report);
  return est;
}

Estimate fit_over_rays(EstimatorKind kind, const FitConfig& config, const Vector& alpha_start,
                       const std::function<double(const Vector&)>& objective) {
  SolveReport report = hooke_jeeves(objective, alpha_start, config.pattern);

  Estimate est;
  est.estimator = kind;
  const double nrm = report.solution.norm();
  if (!(nrm > 0.0)) throw std::runtime_error("fit: pattern search returned the zero vector");
  est.alpha_hat = report.solution / nrm;
  est.criterion = report.objective_or_residual;
  est.report = std::move(report);
  return est;
}

// Applies the sign convention and fills link fit, prediction error and, when
// the sign flipped, re-evaluates the criterion so the estimate is coherent.
void finalize_estimate(Estimate& est, const Dataset& data, const FitConfig& config,
                       const std::function<double(const Vector&)>* criterion_at) {
  if (needs_sign_flip(est.alpha_hat)) {
    est.alpha_hat = -est.alpha_hat;
    if (est.beta_hat) {
      Chart chart = config.score.chart;
      chart.dim = static_cast<int>(data.d());
      try {
        est.beta_hat = from_sphere(chart, est.alpha_hat);
      } catch (const std::domain_error&) {
        est.beta_hat.reset();  // flipped point not representable in this chart
      }
    }
    if (criterion_at) {
      try {
        est.criterion = (*criterion_at)(est.alpha_hat);
      } catch (const std::domain_error&) {
        // keep the solver's achieved value when the flip leaves the chart
      }
    }
  }
  est.link_fit = fit_isotonic(project(data, est.alpha_hat));
  est.prediction_error = prediction_error(est.link_fit, data, est.alpha_hat);
}

Estimate fit_score_from(EstimatorKind kind, const Dataset& data, const FitConfig& config,
                        const Vector& start, bool efficient) {
  if (all_responses_equal(data)) return degenerate_estimate(kind, data, start, config);
  ScoreConfig sc = config.score;
  sc.efficient = efficient;
  sc.chart.dim = static_cast<int>(data.d());

  Estimate est;
  if (sc.formulation == Formulation::parametrized) {
    const auto objective = [&](const Vector& beta) { return score_objective(beta, data, sc); };
    est = fit_over_chart(kind, data, config, start, objective);
  } else {
    const auto objective = [&](const Vector& point) { return score_objective(point, data, sc); };
    est = fit_over_rays(kind, config, start, objective);
  }
  const auto criterion_at = std::function<double(const Vector&)>([&](const Vector& alpha) {
    if (sc.formulation == Formulation::parametrized)
      return score_objective(from_sphere(sc.chart, alpha), data, sc);
    return score_objective(alpha, data, sc);
  });
  finalize_estimate(est, data, config, &criterion_at);
  if (efficient) {
    if (sc.bandwidth_rule == BandwidthRule::fixed) {
      est.bandwidth = sc.fixed_h;
    } else {
      const ProjectedData pd = project(data, est.alpha_hat);
      est.bandwidth = pd.z.size() >= 2 ? default_bandwidth(pd.z, data.n()).h
                                       : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return est;
}

// Shared pieces of the link-free estimators.
struct CenteredData {
  Matrix xc;   // X - Xbar
  Matrix sn;   // (1/n) Xc^T Xc
  Vector g;    // (1/n) Xc^T y
};

CenteredData center(const Dataset& data) {
  CenteredData c;
  c.xc = data.x().rowwise() - data.x().colwise().mean();
  c.sn = c.xc.transpose() * c.xc / static_cast<double>(data.n());
  c.g = c.xc.transpose() * data.y() / static_cast<double>(data.n());
  return c;
}

double least_squares_criterion(const CenteredData& c, const Dataset& data, const Vector& alpha) {
  return (data.y() - c.xc * alpha).squaredNorm();
}

Vector ols_solution(const CenteredData& c) {
  const Eigen::FullPivLU<Matrix> lu(c.sn);
  if (!lu.isInvertible()) throw std::runtime_error("link-free fit: singular Gram matrix S_n");
  return lu.solve(c.g);
}

// Root search for the two constrained link-free estimators. `metric` is S_n for
// the LFLSE and the identity for the norm-1 variant; the unconstrained OLS
// point also solves the projected equation, so roots violating the constraint
// are dropped before the smallest-criterion rule.
Estimate fit_link_free_root(EstimatorKind kind, const Dataset& data, const BroydenOpts& opts) {
  const CenteredData c = center(data);
  const auto d = data.d();
  const bool sn_metric = (kind == EstimatorKind::lflse);

  const auto field = [&](const Vector& alpha) -> Vector {
    const Vector v = c.g - c.sn * alpha;
    if (sn_metric) return v - c.sn * alpha * alpha.dot(v);
    return v - alpha * alpha.dot(v);
  };
  const auto constraint = [&](const Vector& alpha) {
    return sn_metric ? alpha.dot(c.sn * alpha) : alpha.squaredNorm();
  };
  const auto scale_to_constraint = [&](const Vector& v) -> Vector {
    const double q = constraint(v);
    if (!(q > 0.0)) throw std::runtime_error("link-free fit: degenerate start direction");
    return v / std::sqrt(q);
  };

  std::vector<Vector> starts;
  starts.push_back(scale_to_constraint(ols_solution(c)));
  Rng rng(kLinkFreeStartSeed);
  for (int s = 0; s < 4; ++s) starts.push_back(scale_to_constraint(random_unit_vector(rng, d)));

  std::optional<Estimate> best;
  std::string failures;
  for (const Vector& start : starts) {
    SolveReport report = broyden(field, start, opts);
    if (!report.converged) {
      failures += failures.empty() ? "non-converged start" : ", non-converged start";
      continue;
    }
    if (std::abs(constraint(report.solution) - 1.0) > 1e-6) continue;  // spurious OLS root
    Estimate est;
    est.estimator = kind;
    Vector root = report.solution;
    if (needs_sign_flip(root)) root = -root;
    est.criterion = least_squares_criterion(c, data, root);
    if (sn_metric) {
      est.alpha_sn = root;
      est.alpha_hat = root / root.norm();
    } else {
      est.alpha_hat = root;
    }
    est.report = std::move(report);
    est.report.solution = root;
    if (!best || est.criterion < best->criterion) best = std::move(est);
  }
  if (!best)
    throw std::runtime_error("link-free fit: no Broyden start converged to a constrained root (" +
                             (failures.empty() ? std::string("all roots violated the constraint")
                                               : failures) +
                             ")");
  best->link_fit = fit_isotonic(project(data, best->alpha_hat));
  best->prediction_error = prediction_error(best->link_fit, data, best->alpha_hat);
  return best.value();
}

}  // namespace

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::sse: return "sse";
    case EstimatorKind::ese: return "ese";
    case EstimatorKind::lse: return "lse";
    case EstimatorKind::mrce: return "mrce";
    case EstimatorKind::hlflse: return "hlflse";
    case EstimatorKind::lflse: return "lflse";
    case EstimatorKind::linear_norm1: return "linear-norm1";
  }
  throw std::logic_error("unknown estimator kind");
}

EstimatorKind estimator_from_name(const std::string& name) {
  if (name == "sse") return EstimatorKind::sse;
  if (name == "ese") return EstimatorKind::ese;
  if (name == "lse") return EstimatorKind::lse;
  if (name == "mrce") return EstimatorKind::mrce;
  if (name == "hlflse") return EstimatorKind::hlflse;
  if (name == "lflse") return EstimatorKind::lflse;
  if (name == "linear-norm1") return EstimatorKind::linear_norm1;
  throw std::invalid_argument("unknown estimator '" + name + "'");
}

Starts Starts::given(std::vector<Vector> points) {
  Starts s;
  s.points = std::move(points);
  s.random = false;
  if (s.points.empty()) throw std::invalid_argument("Starts::given: need at least one point");
  return s;
}

Starts Starts::random_grid(int count, std::uint64_t seed) {
  Starts s;
  s.count = count;
  s.seed = seed;
  s.random = true;
  if (count < 1) throw std::invalid_argument("Starts::random_grid: need count >= 1");
  return s;
}

std::vector<Vector> Starts::materialize(Eigen::Index d) const {
  if (!random) {
    for (const auto& p : points) {
      if (p.size() != d) throw std::invalid_argument("Starts: start point has wrong dimension");
      if (std::abs(p.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("Starts: start point is not unit norm");
    }
    return points;
  }
  std::vector<Vector> out;
  out.reserve(count);
  Rng rng(seed);
  for (int s = 0; s < count; ++s) out.push_back(random_unit_vector(rng, d));
  return out;
}

Estimate multi_start(const Fitter& fitter, const Dataset& data, const FitConfig& config) {
  const auto starts = config.starts.materialize(data.d());
  std::optional<Estimate> best;
  std::string errors;
  for (const Vector& start : starts) {
    try {
      Estimate est = fitter(data, start);
      if (!best || est.prediction_error < best->prediction_error) best = std::move(est);
    } catch (const std::exception& e) {
      if (!errors.empty()) errors += "; ";
      errors += e.what();
    }
  }
  if (!best) throw std::runtime_error("multi_start: every start failed (" + errors + ")");
  return best.value();
}

Estimate fit_sse(const Dataset& data, const FitConfig& config) {
  return multi_start(
      [&](const Dataset& d, const Vector& start) {
        return fit_score_from(EstimatorKind::sse, d, config, start, false);
      },
      data, config);
}

Estimate fit_ese(const Dataset& data, const FitConfig& config) {
  return multi_start(
      [&](const Dataset& d, const Vector& start) {
        return fit_score_from(EstimatorKind::ese, d, config, start, true);
      },
      data, config);
}

Estimate fit_lse(const Dataset& data, const FitConfig& config) {
  const auto fit_one = [&](const Dataset& d, const Vector& start) {
    Chart chart = config.score.chart;
    chart.dim = static_cast<int>(d.d());
    const auto objective = [&](const Vector& beta) -> double {
      if (!in_chart_domain(chart, beta)) return std::numeric_limits<double>::infinity();
      const Vector alpha = to_sphere(chart, beta);
      const ProjectedData pd = project(d, alpha);
      const IsotonicFit fit = fit_isotonic(pd);
      double ssq = 0.0;
      for (Eigen::Index i = 0; i < d.n(); ++i) {
        const double r = d.y()[i] - fit.values[pd.group_of[i]];
        ssq += r * r;
      }
      return ssq / static_cast<double>(d.n());
    };
    Estimate est = fit_over_chart(EstimatorKind::lse, d, config, start, objective);
    const auto criterion_at = std::function<double(const Vector&)>([&](const Vector& alpha) {
      return sum_of_squares(fit_isotonic(project(d, alpha)), d, alpha);
    });
    finalize_estimate(est, d, config, &criterion_at);
    return est;
  };
  return multi_start(fit_one, data, config);
}

double rank_correlation(const Dataset& data, const Vector& alpha) {
  const Vector t = project_values(data, alpha);
  const auto n = data.n();
  std::int64_t concordant = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (data.y()[i] > data.y()[j] && t[i] > t[j]) ++concordant;
    }
  }
  return static_cast<double>(concordant) /
         (static_cast<double>(n) * static_cast<double>(n - 1));
}

Estimate fit_mrce(const Dataset& data, const FitConfig& config) {
  const auto fit_one = [&](const Dataset& d, const Vector& start) {
    Chart chart = config.score.chart;
    chart.dim = static_cast<int>(d.d());
    const auto objective = [&](const Vector& beta) -> double {
      if (!in_chart_domain(chart, beta)) return std::numeric_limits<double>::infinity();
      return -rank_correlation(d, to_sphere(chart, beta));
    };
    Estimate est = fit_over_chart(EstimatorKind::mrce, d, config, start, objective);
    const auto criterion_at = std::function<double(const Vector&)>(
        [&](const Vector& alpha) { return -rank_correlation(d, alpha); });
    finalize_estimate(est, d, config, &criterion_at);
    return est;
  };
  return multi_start(fit_one, data, config);
}

Estimate fit_hlflse(const Dataset& data) {
  const CenteredData c = center(data);
  Vector a = ols_solution(c);
  if (!(a.norm() > 0.0)) throw std::runtime_error("fit_hlflse: zero OLS solution");

  Estimate est;
  est.estimator = EstimatorKind::hlflse;
  est.criterion = least_squares_criterion(c, data, a);
  est.alpha_hat = a / a.norm();
  if (needs_sign_flip(est.alpha_hat)) est.alpha_hat = -est.alpha_hat;
  est.link_fit = fit_isotonic(project(data, est.alpha_hat));
  est.prediction_error = prediction_error(est.link_fit, data, est.alpha_hat);
  est.report.solution = est.alpha_hat;
  est.report.objective_or_residual = est.criterion;
  est.report.converged = true;
  return est;
}

Estimate fit_lflse(const Dataset& data, const BroydenOpts& opts) {
  return fit_link_free_root(EstimatorKind::lflse, data, opts);
}

Estimate fit_linear_norm1(const Dataset& data, const BroydenOpts& opts) {
  return fit_link_free_root(EstimatorKind::linear_norm1, data, opts);
}

Estimate fit(EstimatorKind kind, const Dataset& data, const FitConfig& config) {
  switch (kind) {
    case EstimatorKind::sse: return fit_sse(data, config);
    case EstimatorKind::ese: return fit_ese(data, config);
    case EstimatorKind::lse: return fit_lse(data, config);
    case EstimatorKind::mrce: return fit_mrce(data, config);
    case EstimatorKind::hlflse: return fit_hlflse(data);
    case EstimatorKind::lflse: return fit_lflse(data, config.broyden);
    case EstimatorKind::linear_norm1: return fit_linear_norm1(data, config.broyden);
  }
  throw std::logic_error("unknown estimator kind");
}

std::string to_json_string(const Estimate& est, const std::string& link_csv_path) {
  using nlohmann::json;
  const auto to_array = [](const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  json out;
  out["estimator"] = estimator_name(est.estimator);
  out["alpha_hat"] = to_array(est.alpha_hat);
  if (est.beta_hat) out["beta_hat"] = to_array(*est.beta_hat);
  if (est.alpha_sn) out["alpha_sn_norm1"] = to_array(*est.alpha_sn);
  out["criterion"] = est.criterion;
  out["prediction_error"] = est.prediction_error;
  out["converged"] = est.report.converged;
  out["evaluations"] = est.report.evaluations;
  if (est.bandwidth) out["bandwidth"] = *est.bandwidth;
  if (est.report.degenerate) out["degenerate"] = true;
  out["link_csv"] = link_csv_path;
  return out.dump(2);
}

}  // namespace monosi
