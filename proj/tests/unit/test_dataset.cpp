#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "monosi/dataset.hpp"
#include "support/test_data.hpp"

using namespace monosi;

namespace {

std::string temp_file(const std::string& name) {
  return std::string("monosi_test_") + name;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

}  // namespace

TEST_CASE("dataset invariants") {
  Matrix x(3, 2);
  x << 1, 0, 2, 0, 3, 0;
  Vector y(3);
  y << 5, 6, 7;
  CHECK_NOTHROW(Dataset(x, y));

  Matrix one_col(3, 1);
  one_col << 1, 2, 3;
  CHECK_THROWS(Dataset(one_col, y));

  Matrix nan_x = x;
  nan_x(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(Dataset(nan_x, y));

  Vector short_y(2);
  short_y << 1, 2;
  CHECK_THROWS(Dataset(x, short_y));
}

TEST_CASE("load_csv parses a 3-row file") {
  const std::string path = temp_file("basic.csv");
  write_file(path, "x1,x2,y\n1,0,5\n2,0,6\n3,0,7\n");
  const Dataset data = load_csv(path);
  CHECK(data.n() == 3);
  CHECK(data.d() == 2);
  CHECK(data.x()(2, 0) == 3.0);
  CHECK(data.y()[0] == 5.0);
  std::remove(path.c_str());
}

TEST_CASE("load_csv accepts scientific notation and any y position") {
  const std::string path = temp_file("sci.csv");
  write_file(path, "y,x1,x2\n1.5e2,-2.25E-1,3\n-4e-3,0.5,1e0\n");
  const Dataset data = load_csv(path);
  CHECK(data.y()[0] == 150.0);
  CHECK(data.x()(0, 0) == -0.225);
  CHECK(data.y()[1] == -0.004);
  CHECK(data.x()(1, 1) == 1.0);
  std::remove(path.c_str());

  const std::string bad = temp_file("names.csv");
  write_file(bad, "x1,foo,y\n1,2,3\n4,5,6\n");
  CHECK_THROWS_WITH_AS(load_csv(bad), doctest::Contains("expected 'x2'"), std::runtime_error);
  std::remove(bad.c_str());
}

TEST_CASE("load_csv error reporting") {
  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(load_csv("definitely_missing.csv"),
                         doctest::Contains("cannot open"), std::runtime_error);
  }
  SUBCASE("nan cell named") {
    const std::string path = temp_file("nan.csv");
    write_file(path, "x1,x2,y\n1,0,5\n2,nan,6\n3,0,7\n");
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains(":3: column 2"), std::runtime_error);
    std::remove(path.c_str());
  }
  SUBCASE("non-numeric cell named") {
    const std::string path = temp_file("alpha.csv");
    write_file(path, "x1,x2,y\n1,0,5\nfoo,0,6\n");
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("non-numeric"), std::runtime_error);
    std::remove(path.c_str());
  }
  SUBCASE("missing y column") {
    const std::string path = temp_file("noy.csv");
    write_file(path, "x1,x2,x3\n1,0,5\n2,0,6\n");
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("missing required column 'y'"),
                         std::runtime_error);
    std::remove(path.c_str());
  }
  SUBCASE("too few rows") {
    const std::string path = temp_file("short.csv");
    write_file(path, "x1,x2,y\n1,0,5\n");
    CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("at least 2 data rows"),
                         std::runtime_error);
    std::remove(path.c_str());
  }
}

TEST_CASE("save/load round trip is bit-exact") {
  Rng rng(42);
  const Dataset data = monosi::testing::random_dataset(rng, 25, 4);
  const std::string path = temp_file("roundtrip.csv");
  save_csv(data, path);
  const Dataset back = load_csv(path);
  REQUIRE(back.n() == data.n());
  REQUIRE(back.d() == data.d());
  CHECK((back.x() - data.x()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.y() - data.y()).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("project groups and averages") {
  SUBCASE("no ties") {
    Matrix x(3, 2);
    x << 1, 0, 2, 0, 3, 0;
    Vector y(3);
    y << 5, 6, 7;
    Vector alpha(2);
    alpha << 1, 0;
    const ProjectedData pd = project(Dataset(x, y), alpha);
    REQUIRE(pd.z.size() == 3);
    CHECK(pd.z[0] == 1.0);
    CHECK(pd.z[2] == 3.0);
    CHECK(pd.weights == std::vector<int>{1, 1, 1});
    CHECK(pd.ybar[1] == 6.0);
  }
  SUBCASE("tied projections pool the responses") {
    Matrix x(3, 2);
    x << 1, 0, 1, 0, 2, 0;
    Vector y(3);
    y << 0, 4, 1;
    Vector alpha(2);
    alpha << 1, 0;
    const ProjectedData pd = project(Dataset(x, y), alpha);
    REQUIRE(pd.z.size() == 2);
    CHECK(pd.weights == std::vector<int>{2, 1});
    CHECK(pd.ybar[0] == 2.0);
    CHECK(pd.ybar[1] == 1.0);
    CHECK(pd.group_of == std::vector<int>{0, 0, 1});
  }
}

TEST_CASE("project invariants on random data") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const Dataset data = monosi::testing::random_dataset(rng, 20, 3, 3);
    const Vector alpha = monosi::testing::random_unit(rng, 3);
    const ProjectedData pd = project(data, alpha);
    int total = 0;
    for (int w : pd.weights) total += w;
    CHECK(total == 20);
    for (Eigen::Index i = 1; i < pd.z.size(); ++i) CHECK(pd.z[i] > pd.z[i - 1]);
  }
}

TEST_CASE("project is permutation invariant, bitwise") {
  Rng rng(11);
  const Dataset data = monosi::testing::random_dataset(rng, 30, 3, 5);
  const Vector alpha = monosi::testing::random_unit(rng, 3);
  const ProjectedData pd = project(data, alpha);

  // reverse the rows
  Matrix xr(data.n(), data.d());
  Vector yr(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    xr.row(i) = data.x().row(data.n() - 1 - i);
    yr[i] = data.y()[data.n() - 1 - i];
  }
  const ProjectedData pr = project(Dataset(xr, yr), alpha);
  REQUIRE(pr.z.size() == pd.z.size());
  CHECK((pr.z - pd.z).cwiseAbs().maxCoeff() == 0.0);
  CHECK((pr.ybar - pd.ybar).cwiseAbs().maxCoeff() == 0.0);
  CHECK(pr.weights == pd.weights);
}

TEST_CASE("a 1-ulp perturbation splits an exact tie") {
  Matrix x(3, 2);
  x << 1, 0, 1, 0, 2, 0;
  Vector y(3);
  y << 0, 4, 1;
  Vector alpha(2);
  alpha << 1, 0;
  x(1, 0) = std::nextafter(1.0, 2.0);
  const ProjectedData pd = project(Dataset(x, y), alpha);
  CHECK(pd.z.size() == 3);
  CHECK(pd.weights == std::vector<int>{1, 1, 1});
}

TEST_CASE("project rejects non-unit alpha") {
  Rng rng(3);
  const Dataset data = monosi::testing::random_dataset(rng, 10, 2);
  Vector alpha(2);
  alpha << 1.0, 1e-6;  // norm off by ~5e-13: fine
  CHECK_NOTHROW(project(data, alpha / alpha.norm()));
  alpha << 1.0, 1e-3;  // norm off by ~5e-7: rejected
  CHECK_THROWS_AS(project(data, alpha), std::invalid_argument);
}
