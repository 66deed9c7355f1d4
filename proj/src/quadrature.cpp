#include "hexconf/quadrature.hpp"

#include "hexconf/errors.hpp"
#include "hexconf/tolerances.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace hexconf {

namespace {

// Nodes are the roots of P_n, found by Newton from the Chebyshev-like guess.
GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged root for the weight
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> [0, 1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

LineIntegral integrate_unit(const std::function<double(double)>& f, int start_nodes,
                            int max_nodes, double rel_tol, double abs_tol) {
  auto estimate = [&](int n, double& abs_integral) {
    const GaussRule& rule = gauss_legendre(n);
    double sum = 0.0;
    abs_integral = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = f(rule.nodes[i]);
      sum += rule.weights[i] * v;
      abs_integral += rule.weights[i] * std::abs(v);
    }
    return sum;
  };

  int n = start_nodes;
  double scale = 0.0;
  double prev = estimate(n, scale);
  while (2 * n <= max_nodes) {
    double next_scale = 0.0;
    const double next = estimate(2 * n, next_scale);
    n *= 2;
    if (std::abs(next - prev) <= rel_tol * next_scale + abs_tol) return {next, n, true};
    prev = next;
  }
  return {prev, n, false};
}

LineIntegral integrate_one_form(const CovectorField& field, std::span<const double> from,
                                std::span<const double> to, double abs_tol) {
  if (from.size() != to.size()) throw LengthMismatch("segment endpoints differ in dimension");
  const std::size_t n = from.size();
  std::vector<double> delta(n);
  bool empty = true;
  for (std::size_t i = 0; i < n; ++i) {
    delta[i] = to[i] - from[i];
    empty = empty && delta[i] == 0.0;
  }
  if (empty) return {0.0, 0, true};

  std::vector<double> point(n);
  auto integrand = [&](double t) {
    for (std::size_t i = 0; i < n; ++i) point[i] = from[i] + t * delta[i];
    const std::vector<double> w = field(point);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += w[i] * delta[i];
    return dot;
  };
  return integrate_unit(integrand, tol::kQuadratureStartNodes, tol::kQuadratureMaxNodes,
                        tol::kQuadratureRelative, abs_tol);
}

LineIntegral integrate_one_form_path(const CovectorField& field,
                                     const std::vector<std::vector<double>>& waypoints) {
  LineIntegral total;
  for (std::size_t s = 1; s < waypoints.size(); ++s) {
    const LineIntegral seg = integrate_one_form(field, waypoints[s - 1], waypoints[s]);
    total.value += seg.value;
    total.nodes += seg.nodes;
    total.converged = total.converged && seg.converged;
  }
  return total;
}

}  // namespace hexconf
