#include <doctest.h>

#include <cmath>

#include "monosi/simulate.hpp"
#include "support/test_data.hpp"

using namespace monosi;

TEST_CASE("generate is deterministic") {
  const ModelSpec spec = ModelSpec::uniform_cubic();
  const Dataset a = generate(spec, 50, 123);
  const Dataset b = generate(spec, 50, 123);
  CHECK((a.x() - b.x()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y() - b.y()).cwiseAbs().maxCoeff() == 0.0);
  const Dataset c = generate(spec, 50, 124);
  CHECK((a.y() - c.y()).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("generate matches the model law") {
  const ModelSpec spec = ModelSpec::uniform_cubic();
  const Dataset data = generate(spec, 100000, 7);
  // E[alpha0^T X] = 1.5 * sqrt(3)
  const double mean_proj = (data.x() * spec.alpha0).mean();
  CHECK(mean_proj == doctest::Approx(1.5 * std::sqrt(3.0)).epsilon(0.01 / 2.598));
  CHECK(data.x().minCoeff() >= 1.0);
  CHECK(data.x().maxCoeff() <= 2.0);

  ModelSpec noiseless = spec;
  noiseless.noise_sd = 0.0;
  const Dataset clean = generate(noiseless, 50, 7);
  for (Eigen::Index i = 0; i < clean.n(); ++i) {
    const double t = clean.x().row(i).dot(spec.alpha0);
    CHECK(clean.y()[i] == t * t * t);
  }
}

TEST_CASE("seed derivation separates replications") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
}

TEST_CASE("monte_carlo toy run matches direct fits") {
  const ModelSpec spec = ModelSpec::normal_cubic(3);
  MonteCarloConfig config;
  config.start_at_truth = true;
  const auto summaries = monte_carlo(spec, {EstimatorKind::hlflse}, 80, 2, 99, config);
  REQUIRE(summaries.size() == 1);
  const auto& s = summaries[0];
  CHECK(s.failures == 0);
  CHECK(s.replications == 2);

  const Estimate a = fit_hlflse(generate(spec, 80, derive_seed(99, 0)));
  const Estimate b = fit_hlflse(generate(spec, 80, derive_seed(99, 1)));
  const Vector expected_mean = (a.alpha_hat + b.alpha_hat) / 2.0;
  CHECK((s.mean_alpha - expected_mean).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("estimator order does not change summaries") {
  const ModelSpec spec = ModelSpec::normal_cubic(3);
  MonteCarloConfig config;
  const std::vector<EstimatorKind> ab{EstimatorKind::hlflse, EstimatorKind::lflse};
  const std::vector<EstimatorKind> ba{EstimatorKind::lflse, EstimatorKind::hlflse};
  const auto s1 = monte_carlo(spec, ab, 60, 4, 11, config);
  const auto s2 = monte_carlo(spec, ba, 60, 4, 11, config);
  CHECK((s1[0].n_cov - s2[1].n_cov).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s1[1].mean_alpha - s2[0].mean_alpha).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("thread count does not change summaries") {
  const ModelSpec spec = ModelSpec::uniform_cubic();
  MonteCarloConfig one;
  one.threads = 1;
  MonteCarloConfig four;
  four.threads = 4;
  const std::vector<EstimatorKind> estimators{EstimatorKind::sse, EstimatorKind::hlflse};
  const auto s1 = monte_carlo(spec, estimators, 80, 6, 5150, one);
  const auto s4 = monte_carlo(spec, estimators, 80, 6, 5150, four);
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    CHECK((s1[e].mean_alpha - s4[e].mean_alpha).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s1[e].n_cov - s4[e].n_cov).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(table_csv_string(s1) == table_csv_string(s4));
}

TEST_CASE("l2 errors vanish on noiseless data") {
  ModelSpec spec = ModelSpec::uniform_cubic();
  spec.noise_sd = 1e-12;
  MonteCarloConfig config;
  const auto samples = l2_error_experiment(spec, {EstimatorKind::sse}, 100, 3, 8, config);
  REQUIRE(samples.size() == 1);
  for (const double v : samples[0]) CHECK(v < 0.5);
}

TEST_CASE("sigma_d and its sampler") {
  const Matrix s5 = sigma_d(5);
  CHECK(s5(0, 0) == doctest::Approx(4.0 / 135.0).epsilon(1e-15));
  CHECK(s5(0, 1) == doctest::Approx(-1.0 / 135.0).epsilon(1e-15));
  CHECK(s5.trace() == doctest::Approx(4.0 / 27.0).epsilon(1e-14));

  const int count = 60000;
  const Matrix draws = draws_from_sigma_d(3, count, 17);
  const Matrix centered = draws.colwise() - draws.rowwise().mean();
  const Matrix cov = centered * centered.transpose() / (count - 1.0);
  CHECK((cov - sigma_d(3)).cwiseAbs().maxCoeff() < 5e-4);
}

TEST_CASE("hlflse diagonal symmetry under coordinate exchange") {
  // exchangeable model: the three diagonal entries estimate the same number
  const ModelSpec spec = ModelSpec::normal_cubic(3);
  MonteCarloConfig config;
  const auto summaries = monte_carlo(spec, {EstimatorKind::hlflse}, 300, 300, 2718, config);
  const Matrix& cov = summaries[0].n_cov;
  const double lo = std::min({cov(0, 0), cov(1, 1), cov(2, 2)});
  const double hi = std::max({cov(0, 0), cov(1, 1), cov(2, 2)});
  CHECK((hi - lo) / hi < 0.5);
}

TEST_CASE("table csv layout") {
  MonteCarloSummary s;
  s.estimator = EstimatorKind::sse;
  s.replications = 2;
  s.n = 10;
  s.mean_alpha = Vector::Constant(3, 0.5);
  s.n_cov = Matrix::Identity(3, 3);
  const std::string csv = table_csv_string({s});
  CHECK(csv.find("estimator,n,mu1,mu2,mu3,sigma11,sigma22,sigma33,sigma12,sigma13,sigma23") == 0);
  CHECK(csv.find("sse,10,0.5,0.5,0.5,") != std::string::npos);
}
