#pragma once

#include <functional>
#include <span>
#include <vector>

namespace hexconf {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule on [0, 1]; rules are computed once and cached.
const GaussRule& gauss_legendre(int n);

struct LineIntegral {
  double value = 0.0;
  int nodes = 0;          // nodes used by the accepted estimate
  bool converged = true;  // false when the node cap was hit
};

/// Integrates f over [0, 1], doubling the node count from `start_nodes` until
/// two successive estimates agree to `rel_tol` (relative to the integral of
/// |f|) plus `abs_tol`, or `max_nodes` is reached.
LineIntegral integrate_unit(const std::function<double(double)>& f, int start_nodes,
                            int max_nodes, double rel_tol, double abs_tol = 0.0);

/// Integral of the 1-form `field` (a covector at each point) along the
/// straight segment from `from` to `to`.
using CovectorField = std::function<std::vector<double>(std::span<const double>)>;
LineIntegral integrate_one_form(const CovectorField& field, std::span<const double> from,
                                std::span<const double> to, double abs_tol = 0.0);

/// Sum of segment integrals along a polyline through `waypoints`.
LineIntegral integrate_one_form_path(const CovectorField& field,
                                     const std::vector<std::vector<double>>& waypoints);

}  // namespace hexconf
