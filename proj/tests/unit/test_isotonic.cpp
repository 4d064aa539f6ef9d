#include <doctest.h>

#include <cmath>

#include "monosi/isotonic.hpp"
#include "support/test_data.hpp"

using namespace monosi;

namespace {

ProjectedData make_pd(std::vector<double> ybar, std::vector<int> w) {
  ProjectedData pd;
  const auto m = static_cast<Eigen::Index>(ybar.size());
  pd.z.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) pd.z[i] = static_cast<double>(i);
  pd.ybar = Eigen::Map<const Vector>(ybar.data(), m);
  pd.weights = std::move(w);
  return pd;
}

// Exhaustive oracle: best non-decreasing fit over all 2^(m-1) partitions into
// consecutive blocks, each block at its weighted mean; partitions with
// decreasing block means are infeasible and skipped.
Vector brute_force_isotonic(const ProjectedData& pd) {
  const auto m = pd.z.size();
  REQUIRE(m <= 16);
  double best_sse = std::numeric_limits<double>::infinity();
  Vector best(m);
  for (unsigned mask = 0; mask < (1u << (m - 1)); ++mask) {
    Vector fit(m);
    Eigen::Index start = 0;
    double prev_mean = -std::numeric_limits<double>::infinity();
    bool feasible = true;
    double sse = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const bool block_ends = (i == m - 1) || ((mask >> i) & 1u);
      if (!block_ends) continue;
      double sum = 0.0, weight = 0.0;
      for (Eigen::Index j = start; j <= i; ++j) {
        sum += pd.ybar[j] * pd.weights[j];
        weight += pd.weights[j];
      }
      const double mean = sum / weight;
      if (mean < prev_mean) {
        feasible = false;
        break;
      }
      for (Eigen::Index j = start; j <= i; ++j) {
        fit[j] = mean;
        const double r = pd.ybar[j] - mean;
        sse += pd.weights[j] * r * r;
      }
      prev_mean = mean;
      start = i + 1;
    }
    if (feasible && sse < best_sse) {
      best_sse = sse;
      best = fit;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("single adjacent-violator pool") {
  const auto pd = make_pd({1, 3, 2}, {1, 1, 1});
  const IsotonicFit fit = fit_isotonic(pd);
  CHECK(fit.values[0] == 1.0);
  CHECK(fit.values[1] == 2.5);
  CHECK(fit.values[2] == 2.5);
}

TEST_CASE("weighted pool") {
  const auto pd = make_pd({2, 1}, {2, 1});
  const IsotonicFit fit = fit_isotonic(pd);
  CHECK(fit.values[0] == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(fit.values[0] == fit.values[1]);
}

TEST_CASE("matches the exhaustive-partition oracle") {
  Rng rng(101);
  for (int rep = 0; rep < 300; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 7);  // 2..8
    std::vector<double> ybar(m);
    std::vector<int> w(m);
    for (int i = 0; i < m; ++i) {
      ybar[i] = rng.uniform(-2.0, 2.0);
      w[i] = 1 + static_cast<int>(rng.next_u64() % 3);
    }
    const auto pd = make_pd(ybar, w);
    const IsotonicFit fit = fit_isotonic(pd);
    const Vector oracle = brute_force_isotonic(pd);
    CHECK((fit.values - oracle).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("fit bounds, mean preservation, idempotence") {
  Rng rng(55);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 10);
    std::vector<double> ybar(m);
    std::vector<int> w(m);
    double wsum = 0.0, wysum = 0.0;
    for (int i = 0; i < m; ++i) {
      ybar[i] = rng.uniform(-1.0, 1.0);
      w[i] = 1 + static_cast<int>(rng.next_u64() % 3);
      wsum += w[i];
      wysum += w[i] * ybar[i];
    }
    const auto pd = make_pd(ybar, w);
    const IsotonicFit fit = fit_isotonic(pd);

    const double lo = *std::min_element(ybar.begin(), ybar.end());
    const double hi = *std::max_element(ybar.begin(), ybar.end());
    double fit_mean = 0.0;
    for (int i = 0; i < m; ++i) {
      CHECK(fit.values[i] >= lo - 1e-12);
      CHECK(fit.values[i] <= hi + 1e-12);
      if (i) CHECK(fit.values[i] >= fit.values[i - 1]);
      fit_mean += fit.values[i] * w[i];
    }
    CHECK(fit_mean / wsum == doctest::Approx(wysum / wsum).epsilon(1e-12));

    // refit of the fitted values returns them unchanged
    ProjectedData refit_pd = pd;
    refit_pd.ybar = fit.values;
    const IsotonicFit refit = fit_isotonic(refit_pd);
    CHECK((refit.values - fit.values).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("degenerate inputs are rejected") {
  ProjectedData empty;
  empty.z.resize(0);
  empty.ybar.resize(0);
  CHECK_THROWS_AS(fit_isotonic(empty), std::invalid_argument);
  IsotonicFit blank;
  blank.knots.resize(0);
  blank.values.resize(0);
  CHECK_THROWS_AS(evaluate(blank, 0.0), std::invalid_argument);
}

TEST_CASE("evaluate is right-continuous with constant extension") {
  IsotonicFit fit;
  fit.knots.resize(2);
  fit.knots << 1, 2;
  fit.values.resize(2);
  fit.values << 0, 1;
  fit.weights = {1, 1};
  CHECK(evaluate(fit, 1.5) == 0.0);
  CHECK(evaluate(fit, 2.0) == 1.0);
  CHECK(evaluate(fit, 0.5) == 0.0);
  CHECK(evaluate(fit, 5.0) == 1.0);
  CHECK(evaluate(fit, 1.0) == 0.0);
}

TEST_CASE("evaluate at knots returns stored values exactly") {
  Rng rng(9);
  IsotonicFit fit;
  const int m = 12;
  fit.knots.resize(m);
  fit.values.resize(m);
  double knot = 0.0, value = 0.0;
  for (int i = 0; i < m; ++i) {
    knot += rng.uniform(0.1, 1.0);
    value += rng.uniform(0.0, 1.0);
    fit.knots[i] = knot;
    fit.values[i] = value;
    fit.weights.push_back(1);
  }
  for (int i = 0; i < m; ++i) CHECK(evaluate(fit, fit.knots[i]) == fit.values[i]);
}

TEST_CASE("jumps") {
  IsotonicFit fit;
  fit.knots.resize(3);
  fit.knots << 0, 1, 2;
  fit.values.resize(3);
  fit.values << 1, 1, 3;
  fit.weights = {1, 1, 1};
  const JumpSet js = jumps(fit);
  REQUIRE(js.locations.size() == 1);
  CHECK(js.locations[0] == 2.0);
  CHECK(js.sizes[0] == 2.0);

  fit.values << 2, 2, 2;
  CHECK(jumps(fit).locations.empty());
}

TEST_CASE("jump sizes telescope") {
  Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 10);
    std::vector<double> ybar(m);
    std::vector<int> w(m, 1);
    for (int i = 0; i < m; ++i) ybar[i] = rng.uniform(-1.0, 1.0);
    const IsotonicFit fit = fit_isotonic(make_pd(ybar, w));
    const JumpSet js = jumps(fit);
    double total = 0.0;
    for (double s : js.sizes) {
      CHECK(s > 0.0);
      total += s;
    }
    CHECK(total == doctest::Approx(fit.values[m - 1] - fit.values[0]).epsilon(1e-12));
  }
}

TEST_CASE("jumps reconstruct the step function") {
  Rng rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 8);
    std::vector<double> ybar(m);
    std::vector<int> w(m, 1);
    for (int i = 0; i < m; ++i) ybar[i] = rng.uniform(-1.0, 1.0);
    const IsotonicFit fit = fit_isotonic(make_pd(ybar, w));
    const JumpSet js = jumps(fit);
    for (int probe = 0; probe < 20; ++probe) {
      const double u = rng.uniform(-1.0, m + 1.0);
      double rebuilt = fit.values[0];
      for (std::size_t k = 0; k < js.locations.size(); ++k)
        if (js.locations[k] <= u) rebuilt += js.sizes[k];
      CHECK(rebuilt == doctest::Approx(evaluate(fit, u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sum_of_squares") {
  SUBCASE("interpolating fit on increasing data") {
    Matrix x(3, 2);
    x << 1, 0, 2, 0, 3, 0;
    Vector y(3);
    y << 1, 2, 5;
    Vector alpha(2);
    alpha << 1, 0;
    const Dataset data(x, y);
    const IsotonicFit fit = fit_isotonic(project(data, alpha));
    CHECK(sum_of_squares(fit, data, alpha) == 0.0);
  }
  SUBCASE("pooled values") {
    Matrix x(3, 2);
    x << 1, 0, 2, 0, 3, 0;
    Vector y(3);
    y << 1, 3, 2;
    Vector alpha(2);
    alpha << 1, 0;
    const Dataset data(x, y);
    const IsotonicFit fit = fit_isotonic(project(data, alpha));
    CHECK(sum_of_squares(fit, data, alpha) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  }
  SUBCASE("decomposes into within-group variance plus pooled error") {
    Rng rng(77);
    const Dataset data = monosi::testing::random_dataset(rng, 24, 3, 6);
    const Vector alpha = monosi::testing::random_unit(rng, 3);
    const ProjectedData pd = project(data, alpha);
    const IsotonicFit fit = fit_isotonic(pd);

    // within-group spread around ybar plus weighted error of the fit vs ybar
    double within = 0.0;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const double r = data.y()[i] - pd.ybar[pd.group_of[i]];
      within += r * r;
    }
    double pooled = 0.0;
    for (Eigen::Index g = 0; g < pd.z.size(); ++g) {
      const double r = pd.ybar[g] - fit.values[g];
      pooled += pd.weights[g] * r * r;
    }
    const double expected = (within + pooled) / static_cast<double>(data.n());
    CHECK(sum_of_squares(fit, data, alpha) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("rejects mismatched sizes") {
    Matrix x(3, 2);
    x << 1, 0, 2, 0, 3, 0;
    Vector y(3);
    y << 1, 2, 3;
    Vector alpha(2);
    alpha << 1, 0;
    const Dataset data(x, y);
    IsotonicFit fit = fit_isotonic(project(data, alpha));
    fit.weights.pop_back();
    CHECK_THROWS_AS(sum_of_squares(fit, data, alpha), std::invalid_argument);
  }
}
