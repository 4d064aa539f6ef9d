#include "monosi/simulate.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "monosi/rng.hpp"

namespace monosi {

ModelSpec ModelSpec::uniform_cubic() {
  ModelSpec spec;
  spec.d = 3;
  spec.covariates = CovariateLaw::iid_uniform_1_2;
  spec.noise_sd = 1.0;
  spec.alpha0 = Vector::Constant(3, 1.0 / std::sqrt(3.0));
  return spec;
}

ModelSpec ModelSpec::normal_cubic(int d) {
  if (d < 2) throw std::invalid_argument("ModelSpec: need d >= 2");
  ModelSpec spec;
  spec.d = d;
  spec.covariates = CovariateLaw::iid_standard_normal;
  spec.noise_sd = 1.0;
  spec.alpha0 = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  return spec;
}

double link_value(LinkKind link, double u) {
  switch (link) {
    case LinkKind::cubic: return u * u * u;
  }
  throw std::logic_error("unknown link kind");
}

Dataset generate(const ModelSpec& spec, Eigen::Index n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate: need n >= 2");
  if (spec.alpha0.size() != spec.d || std::abs(spec.alpha0.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("generate: alpha0 must be a unit vector of length d");
  if (!(spec.noise_sd >= 0.0)) throw std::invalid_argument("generate: noise_sd must be >= 0");

  Rng rng(seed);
  Matrix x(n, spec.d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < spec.d; ++j) {
      x(i, j) = spec.covariates == CovariateLaw::iid_uniform_1_2 ? rng.uniform(1.0, 2.0)
                                                                 : rng.normal();
    }
  }
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = x.row(i).dot(spec.alpha0);
    y[i] = link_value(spec.link, t) + spec.noise_sd * rng.normal();
  }
  return Dataset(std::move(x), std::move(y));
}

namespace {

// Vector each estimator contributes to summaries; the LFLSE is summarized by
// its raw S_n-normalized root.
const Vector& summary_vector(const Estimate& est) {
  if (est.estimator == EstimatorKind::lflse && est.alpha_sn) return *est.alpha_sn;
  return est.alpha_hat;
}

struct ReplicationGrid {
  // one slot per (estimator, replication); nullopt marks a failure
  std::vector<std::vector<std::optional<Vector>>> alphas;
  std::vector<std::atomic<std::int64_t>> fit_nanos;
};

void run_replications(const ModelSpec& spec, const std::vector<EstimatorKind>& estimators,
                      Eigen::Index n, std::int64_t replications, std::uint64_t master_seed,
                      const MonteCarloConfig& config, ReplicationGrid& grid) {
  const int threads = std::max(1, config.threads);

  FitConfig fit_config = config.fit;
  if (config.start_at_truth) fit_config.starts = Starts::given({spec.alpha0});

  std::atomic<std::int64_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::int64_t r = next.fetch_add(1);
      if (r >= replications) return;
      const Dataset data = generate(spec, n, derive_seed(master_seed, r));
      for (std::size_t e = 0; e < estimators.size(); ++e) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const Estimate est = fit(estimators[e], data, fit_config);
          if (est.report.converged) grid.alphas[e][r] = summary_vector(est);
        } catch (const std::exception&) {
          // counted as a failure below
        }
        const auto t1 = std::chrono::steady_clock::now();
        grid.fit_nanos[e].fetch_add(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count(),
            std::memory_order_relaxed);
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
}

}  // namespace

std::vector<MonteCarloSummary> monte_carlo(const ModelSpec& spec,
                                           const std::vector<EstimatorKind>& estimators,
                                           Eigen::Index n, std::int64_t replications,
                                           std::uint64_t master_seed,
                                           const MonteCarloConfig& config) {
  if (replications < 2) throw std::invalid_argument("monte_carlo: need N >= 2");

  ReplicationGrid grid{
      std::vector<std::vector<std::optional<Vector>>>(
          estimators.size(), std::vector<std::optional<Vector>>(replications)),
      std::vector<std::atomic<std::int64_t>>(estimators.size())};
  run_replications(spec, estimators, n, replications, master_seed, config, grid);

  std::vector<MonteCarloSummary> out;
  out.reserve(estimators.size());
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    MonteCarloSummary s;
    s.estimator = estimators[e];
    s.replications = replications;
    s.n = n;
    s.failures = 0;

    // index-ordered reduction: independent of thread count
    std::vector<const Vector*> kept;
    kept.reserve(replications);
    for (std::int64_t r = 0; r < replications; ++r) {
      if (grid.alphas[e][r])
        kept.push_back(&*grid.alphas[e][r]);
      else
        ++s.failures;
    }
    const auto kept_n = static_cast<double>(kept.size());
    if (kept.size() < 2)
      throw std::runtime_error("monte_carlo: fewer than 2 converged replications for " +
                               estimator_name(estimators[e]));
    Vector mean = Vector::Zero(spec.d);
    for (const Vector* a : kept) mean += *a;
    mean /= kept_n;
    Matrix cov = Matrix::Zero(spec.d, spec.d);
    for (const Vector* a : kept) {
      const Vector c = *a - mean;
      cov += c * c.transpose();
    }
    cov *= static_cast<double>(n) / (kept_n - 1.0);
    s.mean_alpha = std::move(mean);
    s.n_cov = std::move(cov);
    s.wall_time_seconds =
        static_cast<double>(grid.fit_nanos[e].load(std::memory_order_relaxed)) * 1e-9;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<double>> l2_error_experiment(const ModelSpec& spec,
                                                     const std::vector<EstimatorKind>& estimators,
                                                     Eigen::Index n, std::int64_t replications,
                                                     std::uint64_t master_seed,
                                                     const MonteCarloConfig& config) {
  if (replications < 1) throw std::invalid_argument("l2_error_experiment: need N >= 1");
  ReplicationGrid grid{
      std::vector<std::vector<std::optional<Vector>>>(
          estimators.size(), std::vector<std::optional<Vector>>(replications)),
      std::vector<std::atomic<std::int64_t>>(estimators.size())};
  run_replications(spec, estimators, n, replications, master_seed, config, grid);

  const double scale = std::sqrt(static_cast<double>(n) / static_cast<double>(spec.d));
  std::vector<std::vector<double>> out(estimators.size());
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    out[e].resize(replications);
    for (std::int64_t r = 0; r < replications; ++r) {
      out[e][r] = grid.alphas[e][r] ? scale * (*grid.alphas[e][r] - spec.alpha0).norm()
                                    : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

Matrix sigma_d(int d) {
  if (d < 2) throw std::invalid_argument("sigma_d: need d >= 2");
  return (static_cast<double>(d) * Matrix::Identity(d, d) - Matrix::Ones(d, d)) /
         (27.0 * static_cast<double>(d));
}

Matrix draws_from_sigma_d(int d, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("draws_from_sigma_d: need count >= 1");
  // Sigma_d = (1/27) Q with Q the projection onto {1}^perp, so
  // x = Q z / sqrt(27) with z ~ N(0, I) has exactly this covariance.
  Rng rng(seed);
  Matrix out(d, count);
  const double inv = 1.0 / std::sqrt(27.0);
  Vector z(d);
  for (int c = 0; c < count; ++c) {
    for (int i = 0; i < d; ++i) z[i] = rng.normal();
    out.col(c) = inv * (z.array() - z.mean()).matrix();
  }
  return out;
}

std::string table_csv_string(const std::vector<MonteCarloSummary>& summaries) {
  std::string out;
  if (summaries.empty()) return out;
  const auto d = summaries.front().mean_alpha.size();
  out += "estimator,n";
  for (Eigen::Index j = 0; j < d; ++j) out += ",mu" + std::to_string(j + 1);
  for (Eigen::Index j = 0; j < d; ++j)
    out += ",sigma" + std::to_string(j + 1) + std::to_string(j + 1);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j)
      out += ",sigma" + std::to_string(i + 1) + std::to_string(j + 1);
  out += "\n";

  char buf[40];
  const auto append_num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += ",";
    out += buf;
  };
  for (const auto& s : summaries) {
    if (s.mean_alpha.size() != d)
      throw std::invalid_argument("table_csv_string: mixed dimensions");
    out += estimator_name(s.estimator) + "," + std::to_string(s.n);
    for (Eigen::Index j = 0; j < d; ++j) append_num(s.mean_alpha[j]);
    for (Eigen::Index j = 0; j < d; ++j) append_num(s.n_cov(j, j));
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = i + 1; j < d; ++j) append_num(s.n_cov(i, j));
    out += "\n";
  }
  return out;
}

void write_table_csv(const std::vector<MonteCarloSummary>& summaries, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << table_csv_string(summaries);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace monosi
