#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace monosi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// The sample (X_1, Y_1), ..., (X_n, Y_n): an n x d covariate matrix and the
/// n-vector of responses. Immutable after construction; construction enforces
/// n >= 2, d >= 2 and finiteness of every entry.
class Dataset {
 public:
  Dataset(Matrix x, Vector y);

  Eigen::Index n() const { return x_.rows(); }
  Eigen::Index d() const { return x_.cols(); }
  const Matrix& x() const { return x_; }
  const Vector& y() const { return y_; }

 private:
  Matrix x_;
  Vector y_;
};

/// The sorted distinct projections Z_1 < ... < Z_m of alpha^T X_i, their
/// multiplicities, the within-group response means, and the row -> group map.
struct ProjectedData {
  Vector z;                   ///< strictly increasing distinct projections
  std::vector<int> weights;   ///< multiplicities; sums to n
  Vector ybar;                ///< within-group means of y
  std::vector<int> group_of;  ///< original row index -> group index
};

/// Reads a dataset from CSV: header row with columns x1..xd (in order) plus a
/// column named y; decimal or scientific numbers. Errors carry the offending
/// row/column. Throws std::runtime_error.
Dataset load_csv(const std::string& path);

/// Writes the CSV form read back bit-exactly by load_csv (17 significant digits).
void save_csv(const Dataset& data, const std::string& path);

/// The projections alpha^T X_i, computed the same way at every call site so
/// repeated evaluations agree bitwise.
Vector project_values(const Dataset& data, const Vector& alpha);

/// Sorts the projections and groups rows whose projections are exactly equal
/// (bitwise; ties split under any 1-ulp perturbation). alpha must be unit to
/// within 1e-8 or std::invalid_argument is thrown. Within-group sums are taken
/// in value order, making the result invariant under row permutations.
ProjectedData project(const Dataset& data, const Vector& alpha);

}  // namespace monosi
