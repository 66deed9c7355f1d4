#pragma once

#include "hexconf/conformal.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hexconf {

enum class FlowMethod { Ricci, Calabi, Fractional };

const char* to_string(FlowMethod m);
/// "ricci", "calabi" or "fractional"; throws ParseError otherwise.
FlowMethod parse_flow_method(const std::string& name);

struct FlowConfig {
  FlowMethod method = FlowMethod::Ricci;
  double s = 0.5;  // fractional order, read only by FlowMethod::Fractional
  double dt0 = 0.1;
  double tol = 1e-10;  // on |K - Kbar|_inf
  long max_steps = 100000;
  double shrink = 0.5;
  double admissibility_margin = 1e-9;
  int grow_after = 5;           // accepted steps before dt grows by 1/shrink
  double max_dt_factor = 10.0;  // dt never exceeds dt0 * max_dt_factor

  /// Throws DomainError on a non-positive tol/dt0, shrink outside (0,1), etc.
  void validate() const;
};

enum class FlowStatus { Converged, MaxSteps, StalledStep, JacobianNotPD };
const char* to_string(FlowStatus s);

struct FlowRow {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double resid_inf = 0.0;
  double calabi_energy = 0.0;
  double potential = 0.0;
  double min_margin = 0.0;
};

struct FlowTrace {
  std::vector<FlowRow> rows;  // row 0 is the initial state
  FlowStatus status = FlowStatus::MaxSteps;
  bool structure_condition = true;
  long rejected_steps = 0;
  std::string message;
};

struct FlowResult {
  Vec alpha;
  FlowTrace trace;
};

/// Symmetric J^s = V diag(lambda^s) V^T. s = 0 gives the identity and s = 1
/// returns J unchanged. Throws NotSPD if an eigenvalue is <= 0.
Mat spd_power(const Mat& J, double s);

/// ricci: Kbar - K; calabi: -J (K - Kbar); fractional: -J^s (K - Kbar).
/// Fractional with s = 0 or s = 1 takes exactly the ricci or calabi branch.
/// `J` is not read when the method does not need it. Throws JacobianNotPD.
Vec velocity(FlowMethod method, double s, const Vec& K, const Vec& Kbar, const Mat& J);

/// Whether velocity() reads the Jacobian for this method and order.
bool velocity_needs_jacobian(FlowMethod method, double s);

/// Explicit Euler with admissibility and monotonicity guards. The potential
/// column is relative to `base` (default_base(s) if omitted). Dynamics never
/// throw; malformed input does.
FlowResult run_flow(const Surface& s, const Vec& alpha0, const Vec& Kbar, const FlowConfig& cfg,
                    const std::optional<Vec>& base = std::nullopt);

struct NewtonConfig {
  double tol = 1e-10;
  int max_iters = 100;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double admissibility_margin = 1e-9;
  double min_step = 1e-14;
  // NotAttained once this many consecutive iterates sit within pinned_factor
  // times the margin guard and only accept line-search steps below pinned_step.
  int pinned_iters = 5;
  double pinned_factor = 10.0;
  double pinned_step = 1e-6;

  void validate() const;
};

enum class NewtonStatus { Converged, MaxIters, NotAttained, JacobianNotPD };
const char* to_string(NewtonStatus s);

struct NewtonIterate {
  int iter = 0;
  double resid_inf = 0.0;
  double step = 0.0;  // accepted line-search parameter leaving this iterate
  double potential_change = 0.0;
  double min_margin = 0.0;
  bool gradient_fallback = false;
};

struct NewtonResult {
  Vec alpha;
  NewtonStatus status = NewtonStatus::MaxIters;
  std::vector<NewtonIterate> log;
  std::string message;
};

/// Damped Newton on the potential with Armijo backtracking.
NewtonResult solve_prescribed(const Surface& s, const Vec& alpha0, const Vec& Kbar,
                              const NewtonConfig& cfg);

struct MultiStartResult {
  Vec alpha;  // first converged solution
  std::vector<NewtonResult> runs;
  double max_disagreement = 0.0;  // |alpha_r - alpha|_inf over converged runs
};

/// Runs the solver from every start. Throws Error if two converged runs
/// disagree by more than `agreement`, or if none converges.
MultiStartResult solve_multistart(const Surface& s, const std::vector<Vec>& starts,
                                  const Vec& Kbar, const NewtonConfig& cfg,
                                  double agreement = 1e-8);

}  // namespace hexconf
