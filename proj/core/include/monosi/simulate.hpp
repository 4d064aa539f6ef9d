#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monosi/estimators.hpp"

namespace monosi {

enum class CovariateLaw { iid_uniform_1_2, iid_standard_normal };
enum class LinkKind { cubic };

/// Synthetic-data law: Y = psi0(alpha0^T X) + noise_sd * eps, eps ~ N(0,1).
struct ModelSpec {
  int d = 3;
  CovariateLaw covariates = CovariateLaw::iid_uniform_1_2;
  LinkKind link = LinkKind::cubic;
  double noise_sd = 1.0;
  Vector alpha0;

  static ModelSpec uniform_cubic();        ///< d = 3, X ~ U[1,2]^3, alpha0 = 1/sqrt(3)
  static ModelSpec normal_cubic(int d);    ///< X ~ N(0, I_d), alpha0 = 1/sqrt(d)
};

double link_value(LinkKind link, double u);

/// Deterministic given (spec, n, seed): X is filled row-major from the
/// covariate law, then the noise vector is drawn, using the xoshiro256++
/// stream seeded with `seed` (see rng.hpp for the derivation rule).
Dataset generate(const ModelSpec& spec, Eigen::Index n, std::uint64_t seed);

struct MonteCarloSummary {
  EstimatorKind estimator = EstimatorKind::sse;
  std::int64_t replications = 0;  ///< N requested
  Eigen::Index n = 0;
  Vector mean_alpha;
  Matrix n_cov;  ///< n times the sample covariance over converged replications
  std::int64_t failures = 0;
  double wall_time_seconds = 0.0;
};

struct MonteCarloConfig {
  FitConfig fit;
  bool start_at_truth = true;  ///< alpha0 starts; otherwise config.fit.starts applies
  int threads = 1;
};

/// Replication r uses derive_seed(master_seed, r); fits each estimator on each
/// replication. Results are reduced in replication order, so summaries do not
/// depend on the thread count. Non-converged or throwing fits are counted as
/// failures and excluded. The LFLSE contributes its raw S_n-normalized root.
std::vector<MonteCarloSummary> monte_carlo(const ModelSpec& spec,
                                           const std::vector<EstimatorKind>& estimators,
                                           Eigen::Index n, std::int64_t replications,
                                           std::uint64_t master_seed,
                                           const MonteCarloConfig& config);

/// Per-replication sqrt(n/d) * |alpha_hat - alpha0| samples, one vector per
/// estimator in input order (NaN marks a failed replication).
std::vector<std::vector<double>> l2_error_experiment(const ModelSpec& spec,
                                                     const std::vector<EstimatorKind>& estimators,
                                                     Eigen::Index n, std::int64_t replications,
                                                     std::uint64_t master_seed,
                                                     const MonteCarloConfig& config);

/// Sigma_d = (1/(27 d)) (d I - 1 1^T), the efficient limiting covariance for
/// the normal-cubic family.
Matrix sigma_d(int d);

/// Reference draws from N(0, Sigma_d), one column per draw.
Matrix draws_from_sigma_d(int d, int count, std::uint64_t seed);

/// Table CSV: header estimator,n,mu1..mud,sigma11..sigmadd,sigma12,... with
/// upper-triangle off-diagonals in row-major order; 17 significant digits.
void write_table_csv(const std::vector<MonteCarloSummary>& summaries, const std::string& path);

std::string table_csv_string(const std::vector<MonteCarloSummary>& summaries);

}  // namespace monosi
