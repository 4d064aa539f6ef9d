#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "monosi/optim.hpp"
#include "monosi/score.hpp"

namespace monosi {

enum class EstimatorKind { sse, ese, lse, mrce, hlflse, lflse, linear_norm1 };

std::string estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_name(const std::string& name);

/// A fitted index vector with its link fit and solver diagnostics.
struct Estimate {
  EstimatorKind estimator = EstimatorKind::sse;
  Vector alpha_hat;                ///< unit Euclidean norm, first nonzero component positive
  std::optional<Vector> beta_hat;  ///< chart coordinates (parametrized fits only)
  std::optional<Vector> alpha_sn;  ///< LFLSE: the raw root with alpha^T S_n alpha = 1
  IsotonicFit link_fit;            ///< isotonic fit at alpha_hat
  double criterion = 0.0;          ///< achieved score objective, S_n-tilde, -H_n-tilde, or residual norm
  double prediction_error = 0.0;   ///< sum_i (Y_i - psi-hat(alpha_hat^T X_i))^2
  std::optional<double> bandwidth;  ///< ESE only
  SolveReport report;
};

/// Start points: an explicit list, or a seeded random grid on the unit sphere
/// (normalized standard normal vectors).
struct Starts {
  static Starts given(std::vector<Vector> points);
  static Starts random_grid(int count, std::uint64_t seed);
  std::vector<Vector> materialize(Eigen::Index d) const;

  std::vector<Vector> points;
  int count = 10;
  std::uint64_t seed = 1;
  bool random = true;
};

struct FitConfig {
  static PatternSearchOpts default_pattern() {
    PatternSearchOpts opts;
    opts.restarts = 16;
    return opts;
  }

  ScoreConfig score;
  PatternSearchOpts pattern = default_pattern();
  BroydenOpts broyden;
  Starts starts = Starts::random_grid(10, 1);
};

/// A single fit of an estimator from one start point.
using Fitter = std::function<Estimate(const Dataset&, const Vector& start)>;

/// Runs the fitter from every configured start and keeps the run with the
/// smallest prediction error (first found wins ties).
Estimate multi_start(const Fitter& fitter, const Dataset& data, const FitConfig& config);

Estimate fit_sse(const Dataset& data, const FitConfig& config);
Estimate fit_ese(const Dataset& data, const FitConfig& config);
Estimate fit_lse(const Dataset& data, const FitConfig& config);
Estimate fit_mrce(const Dataset& data, const FitConfig& config);

/// OLS of Y on X - Xbar followed by Euclidean normalization. Closed form.
Estimate fit_hlflse(const Dataset& data);

/// Broyden root of (I - S_n alpha alpha^T) sum (X_i - Xbar)(Y_i - alpha^T (X_i - Xbar)) = 0;
/// the root satisfies alpha^T S_n alpha = 1 without renormalization. Among the
/// converged constrained roots the smallest least-squares criterion wins.
Estimate fit_lflse(const Dataset& data, const BroydenOpts& opts = {});

/// Identity-norm variant: root of (I - alpha alpha^T) sum (X_i - Xbar)(Y_i - alpha^T (X_i - Xbar)) = 0
/// with |alpha| = 1 emerging from the equation.
Estimate fit_linear_norm1(const Dataset& data, const BroydenOpts& opts = {});

/// Dispatch by kind; the three link-free estimators ignore the start rule.
Estimate fit(EstimatorKind kind, const Dataset& data, const FitConfig& config);

/// H_n(alpha): fraction of concordant ordered pairs (Y_i > Y_j and
/// alpha^T X_i > alpha^T X_j) among the n(n-1) ordered pairs. O(n^2).
double rank_correlation(const Dataset& data, const Vector& alpha);

/// JSON rendering of an estimate; link_csv_path is recorded verbatim.
std::string to_json_string(const Estimate& est, const std::string& link_csv_path);

}  // namespace monosi
