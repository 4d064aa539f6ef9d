#include "monosi/optim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace monosi {

namespace {

SolveReport hooke_jeeves_once(const std::function<double(const Vector&)>& f, const Vector& x0,
                              const PatternSearchOpts& opts) {
  if (!(opts.min_step > 0.0) || !(opts.min_step < opts.initial_step))
    throw std::invalid_argument("hooke_jeeves: need 0 < min_step < initial_step");
  const auto k = x0.size();
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::int64_t evals = 0;
  const auto eval = [&](const Vector& x) {
    if (evals >= opts.max_evals) return inf;  // budget exhausted: probes never improve
    ++evals;
    return f(x);
  };

  double step = opts.initial_step;

  // Greedy exploratory move around y; probes +e_i then -e_i in coordinate order.
  const auto explore = [&](Vector y, double fy) {
    for (Eigen::Index i = 0; i < k; ++i) {
      y[i] += step;
      double ft = eval(y);
      if (ft < fy) {
        fy = ft;
        continue;
      }
      y[i] -= 2.0 * step;
      ft = eval(y);
      if (ft < fy) {
        fy = ft;
        continue;
      }
      y[i] += step;
    }
    return std::pair<Vector, double>{std::move(y), fy};
  };

  Vector base = x0;
  double fbase = eval(base);
  bool converged = false;

  while (evals < opts.max_evals) {
    auto [xe, fe] = explore(base, fbase);
    if (fe < fbase) {
      // pattern moves: step in the direction of the previous move, then explore
      while (evals < opts.max_evals) {
        const Vector pattern = 2.0 * xe - base;
        base = xe;
        fbase = fe;
        const double fp = eval(pattern);
        auto [xt, ft] = explore(pattern, fp);
        if (ft < fbase) {
          xe = std::move(xt);
          fe = ft;
        } else {
          break;
        }
      }
    } else {
      if (step <= opts.min_step) {
        converged = true;  // a full sweep at min_step found no improvement
        break;
      }
      step = std::max(0.5 * step, opts.min_step);
    }
  }

  SolveReport report;
  report.solution = std::move(base);
  report.objective_or_residual = fbase;
  report.evaluations = evals;
  report.converged = converged;
  return report;
}

}  // namespace

SolveReport hooke_jeeves(const std::function<double(const Vector&)>& f, const Vector& x0,
                         const PatternSearchOpts& opts) {
  SolveReport report = hooke_jeeves_once(f, x0, opts);
  for (int r = 0; r < opts.restarts && report.converged; ++r) {
    PatternSearchOpts rest = opts;
    rest.max_evals = opts.max_evals - report.evaluations;
    if (rest.max_evals <= 0) break;
    SolveReport next = hooke_jeeves_once(f, report.solution, rest);
    const std::int64_t total = report.evaluations + next.evaluations;
    const bool improved = next.objective_or_residual < report.objective_or_residual;
    if (improved) report = std::move(next);
    report.evaluations = total;
    if (!improved) break;
  }
  return report;
}

SolveReport broyden(const std::function<Vector(const Vector&)>& field, const Vector& x0,
                    const BroydenOpts& opts) {
  if (!(opts.residual_tol > 0.0) || !(opts.fd_step > 0.0) || opts.max_iters < 1)
    throw std::invalid_argument("broyden: options must be positive");
  const auto k = x0.size();

  std::int64_t evals = 0;
  const auto eval = [&](const Vector& x) {
    ++evals;
    return field(x);
  };

  SolveReport report;
  Vector x = x0;
  Vector fx = eval(x);
  if (fx.size() != k) throw std::invalid_argument("broyden: field dimension mismatch");

  const auto finish = [&](bool ok) {
    report.solution = x;
    report.objective_or_residual = fx.allFinite() ? fx.norm()
                                                  : std::numeric_limits<double>::infinity();
    report.evaluations = evals;
    report.converged = ok;
    return report;
  };

  if (!fx.allFinite()) return finish(false);
  if (fx.norm() <= opts.residual_tol) return finish(true);

  // forward-difference initial Jacobian
  Matrix jac(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Vector xp = x;
    xp[j] += opts.fd_step;
    jac.col(j) = (eval(xp) - fx) / opts.fd_step;
  }
  if (!jac.allFinite()) return finish(false);

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    const Vector dir = jac.partialPivLu().solve(-fx);
    if (!dir.allFinite()) return finish(false);

    // halving backtracking; after 30 failed halvings the full step is taken
    const double fnorm = fx.norm();
    double lambda = 1.0;
    Vector x_new, f_new;
    bool accepted = false;
    Vector x_full, f_full;
    for (int t = 0; t <= 30; ++t) {
      x_new = x + lambda * dir;
      f_new = eval(x_new);
      if (t == 0) {
        x_full = x_new;
        f_full = f_new;
      }
      if (f_new.allFinite() && f_new.norm() < fnorm) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      x_new = x_full;
      f_new = f_full;
      if (!f_new.allFinite()) return finish(false);
    }

    const Vector ds = x_new - x;
    const Vector df = f_new - fx;
    const double denom = ds.squaredNorm();
    if (denom == 0.0) return finish(fx.norm() <= opts.residual_tol);
    jac += (df - jac * ds) * ds.transpose() / denom;

    x = std::move(x_new);
    fx = std::move(f_new);
    if (fx.norm() <= opts.residual_tol) return finish(true);
  }
  return finish(fx.norm() <= opts.residual_tol);
}

}  // namespace monosi
