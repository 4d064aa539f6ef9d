#pragma once

#include <cstdint>
#include <functional>

#include "monosi/dataset.hpp"

namespace monosi {

struct PatternSearchOpts {
  double initial_step = 0.5;
  double min_step = 1e-8;
  std::int64_t max_evals = 1'000'000;
  /// After convergence, rerun from the solution at the full initial step until
  /// no restart improves the objective (at most this many times). Escapes
  /// pattern-stationary points of discontinuous objectives.
  int restarts = 0;
};

struct BroydenOpts {
  double residual_tol = 1e-12;
  int max_iters = 200;
  double fd_step = 1e-7;  ///< step of the initial finite-difference Jacobian
};

struct SolveReport {
  Vector solution;
  double objective_or_residual = 0.0;
  std::int64_t evaluations = 0;
  bool converged = false;
  bool degenerate = false;  ///< score identically zero; solution is the start point
};

/// Hooke-Jeeves pattern search: greedy coordinate probes (+e_i then -e_i, fixed
/// order) around the base, then repeated pattern moves doubling the last
/// displacement; the step halves when no probe improves and the search stops
/// once a sweep at min_step fails. Deterministic; f may be discontinuous but
/// must be total (+inf marks out-of-domain points).
SolveReport hooke_jeeves(const std::function<double(const Vector&)>& f, const Vector& x0,
                         const PatternSearchOpts& opts = {});

/// Broyden's good method with a forward-difference initial Jacobian and
/// halving backtracking (a step that fails 30 halvings is taken in full).
/// Converged when |F| <= residual_tol.
SolveReport broyden(const std::function<Vector(const Vector&)>& field, const Vector& x0,
                    const BroydenOpts& opts = {});

}  // namespace monosi
