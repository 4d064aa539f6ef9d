#pragma once

#include "monosi/kernel.hpp"
#include "monosi/sphere.hpp"

namespace monosi {

enum class Formulation { parametrized, lagrange };
enum class BandwidthRule { range_rule, fixed };

/// Selects which of the four score functions score_objective evaluates.
struct ScoreConfig {
  Formulation formulation = Formulation::lagrange;
  bool efficient = false;
  Chart chart{};  ///< used iff formulation == parametrized
  BandwidthRule bandwidth_rule = BandwidthRule::range_rule;
  double fixed_h = 0.0;  ///< > 0 required iff bandwidth_rule == fixed
};

/// phi_n(beta) = (1/n) sum_i J_S(beta)^T X_i { Y_i - psi-hat(alpha^T X_i) },
/// alpha = S(beta), psi-hat refitted at alpha.
Vector simple_score_param(const Vector& beta, const Dataset& data, const Chart& chart);

/// xi_nh(beta): the simple score with each summand weighted by the smoothed
/// derivative estimate at alpha^T X_i.
Vector efficient_score_param(const Vector& beta, const Dataset& data, const Chart& chart,
                             Bandwidth h);

/// (1/n) (I - alpha alpha^T) sum_i X_i { Y_i - psi-hat(alpha^T X_i) }.
Vector simple_score_lagrange(const Vector& alpha, const Dataset& data);

Vector efficient_score_lagrange(const Vector& alpha, const Dataset& data, Bandwidth h);

/// Squared Euclidean norm of the configured score vector. The Lagrange
/// formulation renormalizes the point to the unit sphere first, so the
/// objective is constant on rays; off-chart points (half-sphere, |beta| > 1)
/// and the zero vector evaluate to +infinity so a pattern search rejects them.
double score_objective(const Vector& point, const Dataset& data, const ScoreConfig& config);

}  // namespace monosi
