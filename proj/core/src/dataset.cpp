#include "monosi/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace monosi {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trimmed(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  return s.substr(i);
}

}  // namespace

Dataset::Dataset(Matrix x, Vector y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() != y_.size())
    throw std::invalid_argument("Dataset: x has " + std::to_string(x_.rows()) +
                                " rows but y has length " + std::to_string(y_.size()));
  if (x_.rows() < 2) throw std::invalid_argument("Dataset: need n >= 2");
  if (x_.cols() < 2) throw std::invalid_argument("Dataset: need d >= 2");
  if (!x_.allFinite()) throw std::invalid_argument("Dataset: non-finite covariate entry");
  if (!y_.allFinite()) throw std::invalid_argument("Dataset: non-finite response entry");
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) fail(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_line(line);
  int y_col = -1;
  std::vector<int> x_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = trimmed(header[c]);
    if (name == "y") {
      if (y_col >= 0) fail(path + ": duplicate column 'y'");
      y_col = static_cast<int>(c);
    } else {
      x_cols.push_back(static_cast<int>(c));
    }
  }
  if (y_col < 0) fail(path + ": missing required column 'y'");
  for (std::size_t k = 0; k < x_cols.size(); ++k) {
    const std::string expected = "x" + std::to_string(k + 1);
    if (trimmed(header[x_cols[k]]) != expected)
      fail(path + ": covariate column " + std::to_string(x_cols[k] + 1) + " is named '" +
           trimmed(header[x_cols[k]]) + "', expected '" + expected + "'");
  }
  const auto d = static_cast<Eigen::Index>(x_cols.size());
  if (d < 2) fail(path + ": need at least 2 covariate columns (x1, x2, ...)");

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trimmed(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size())
      fail(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
           " cells, got " + std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trimmed(cells[c]);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || end != cell.c_str() + cell.size())
        fail(path + ":" + std::to_string(lineno) + ": column " + std::to_string(c + 1) +
             ": non-numeric cell '" + cell + "'");
      if (!std::isfinite(v))
        fail(path + ":" + std::to_string(lineno) + ": column " + std::to_string(c + 1) +
             ": non-finite value '" + cell + "'");
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n < 2) fail(path + ": need at least 2 data rows, got " + std::to_string(n));

  Matrix x(n, d);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = rows[i][y_col];
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = rows[i][x_cols[j]];
  }
  return Dataset(std::move(x), std::move(y));
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot open file for writing: " + path);
  char buf[40];
  for (Eigen::Index j = 0; j < data.d(); ++j) out << "x" << (j + 1) << ",";
  out << "y\n";
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.d(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", data.x()(i, j));
      out << buf << ",";
    }
    std::snprintf(buf, sizeof buf, "%.17g", data.y()[i]);
    out << buf << "\n";
  }
  if (!out) fail("write failed: " + path);
}

Vector project_values(const Dataset& data, const Vector& alpha) {
  if (alpha.size() != data.d())
    throw std::invalid_argument("project: alpha has length " + std::to_string(alpha.size()) +
                                ", expected " + std::to_string(data.d()));
  Vector t(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) t[i] = data.x().row(i).dot(alpha);
  return t;
}

ProjectedData project(const Dataset& data, const Vector& alpha) {
  if (std::abs(alpha.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("project: alpha is not unit norm (|norm - 1| = " +
                                std::to_string(std::abs(alpha.norm() - 1.0)) + ")");
  const Vector t = project_values(data, alpha);
  if (!t.allFinite()) throw std::invalid_argument("project: non-finite projection");

  const auto n = data.n();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return t[a] < t[b]; });

  ProjectedData pd;
  pd.group_of.assign(n, 0);
  std::vector<double> z;
  std::vector<int> w;
  std::vector<std::vector<double>> group_values;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = order[k];
    // exact-equality tie detection
    if (z.empty() || t[i] != z.back()) {
      z.push_back(t[i]);
      w.push_back(0);
      group_values.emplace_back();
    }
    const int g = static_cast<int>(z.size()) - 1;
    ++w.back();
    group_values.back().push_back(data.y()[i]);
    pd.group_of[i] = g;
  }

  const auto m = static_cast<Eigen::Index>(z.size());
  pd.z = Eigen::Map<const Vector>(z.data(), m);
  pd.weights = std::move(w);
  pd.ybar.resize(m);
  for (Eigen::Index g = 0; g < m; ++g) {
    auto& vals = group_values[g];
    // value-ordered summation: ybar does not depend on the row order
    std::sort(vals.begin(), vals.end());
    double sum = 0.0;
    for (double v : vals) sum += v;
    pd.ybar[g] = sum / static_cast<double>(vals.size());
  }
  return pd;
}

}  // namespace monosi
