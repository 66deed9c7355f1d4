#include "hexconf/solve.hpp"

#include "hexconf/errors.hpp"
#include "hexconf/tolerances.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hexconf {

const char* to_string(FlowMethod m) {
  switch (m) {
    case FlowMethod::Ricci: return "ricci";
    case FlowMethod::Calabi: return "calabi";
    case FlowMethod::Fractional: return "fractional";
  }
  return "?";
}

FlowMethod parse_flow_method(const std::string& name) {
  if (name == "ricci") return FlowMethod::Ricci;
  if (name == "calabi") return FlowMethod::Calabi;
  if (name == "fractional") return FlowMethod::Fractional;
  throw ParseError("unknown flow method \"" + name + "\"");
}

const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::Converged: return "Converged";
    case FlowStatus::MaxSteps: return "MaxSteps";
    case FlowStatus::StalledStep: return "StalledStep";
    case FlowStatus::JacobianNotPD: return "JacobianNotPD";
  }
  return "?";
}

const char* to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::Converged: return "Converged";
    case NewtonStatus::MaxIters: return "MaxIters";
    case NewtonStatus::NotAttained: return "NotAttained";
    case NewtonStatus::JacobianNotPD: return "JacobianNotPD";
  }
  return "?";
}

void FlowConfig::validate() const {
  if (!(dt0 > 0.0)) throw DomainError("dt0 must be positive");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw DomainError("shrink must lie in (0, 1)");
  if (max_steps < 0) throw DomainError("max_steps must be non-negative");
  if (!(admissibility_margin >= 0.0)) throw DomainError("admissibility margin must be >= 0");
  if (grow_after < 1) throw DomainError("grow_after must be at least 1");
  if (!(max_dt_factor >= 1.0)) throw DomainError("max_dt_factor must be >= 1");
  if (!std::isfinite(s)) throw DomainError("fractional order must be finite");
}

void NewtonConfig::validate() const {
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (max_iters < 0) throw DomainError("max_iters must be non-negative");
  if (!(armijo > 0.0 && armijo < 0.5)) throw DomainError("armijo constant must lie in (0, 0.5)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw DomainError("backtrack must lie in (0, 1)");
  if (!(admissibility_margin >= 0.0)) throw DomainError("admissibility margin must be >= 0");
  if (!(min_step > 0.0)) throw DomainError("min_step must be positive");
  if (pinned_iters < 1) throw DomainError("pinned_iters must be at least 1");
  if (!(pinned_factor >= 1.0)) throw DomainError("pinned_factor must be >= 1");
  if (!(pinned_step > 0.0)) throw DomainError("pinned_step must be positive");
}

// ---------------------------------------------------------------------------

namespace {

double min_eigenvalue_sym(const Mat& J) {
  Eigen::SelfAdjointEigenSolver<Mat> es(J, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

[[noreturn]] void throw_not_pd(const Mat& J) {
  const double lo = min_eigenvalue_sym(J);
  std::ostringstream os;
  os.precision(17);
  os << "curvature Jacobian is not positive definite (min eigenvalue " << lo << ")";
  throw JacobianNotPD(os.str(), lo);
}

void check_target(const Surface& s, const Vec& Kbar) {
  if (Kbar.size() != s.n_boundary()) {
    throw LengthMismatch("target curvature has " + std::to_string(Kbar.size()) +
                         " components, surface has " + std::to_string(s.n_boundary()));
  }
  for (Eigen::Index i = 0; i < Kbar.size(); ++i) {
    if (!(Kbar[i] > 0.0) || !std::isfinite(Kbar[i])) {
      throw DomainError("target curvature component " + std::to_string(i) +
                        " must be positive and finite");
    }
  }
}

// Minimum edge margin if `alpha` is in the box and every margin clears `margin`.
std::optional<double> guarded_margin(const Surface& s, const Vec& alpha, double margin) {
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!std::isfinite(alpha[i])) return std::nullopt;
  }
  const AdmissibilityReport r = admissibility(s, alpha);
  if (!r.admissible || r.min_margin < margin) return std::nullopt;
  return r.min_margin;
}

}  // namespace

Mat spd_power(const Mat& J, double s) {
  if (J.rows() != J.cols()) throw LengthMismatch("spd_power needs a square matrix");
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  if (es.info() != Eigen::Success) throw NotSPD("eigendecomposition failed", std::nan(""));
  const Vec& lambda = es.eigenvalues();
  if (lambda.size() > 0 && !(lambda[0] > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "matrix is not positive definite (min eigenvalue " << lambda[0] << ")";
    throw NotSPD(os.str(), lambda[0]);
  }
  if (s == 0.0) return Mat::Identity(J.rows(), J.cols());
  if (s == 1.0) return J;
  const Mat& V = es.eigenvectors();
  const Vec powered = lambda.array().pow(s).matrix();
  Mat out = V * powered.asDiagonal() * V.transpose();
  return 0.5 * (out + out.transpose());
}

bool velocity_needs_jacobian(FlowMethod method, double s) {
  return method == FlowMethod::Calabi || (method == FlowMethod::Fractional && s != 0.0);
}

Vec velocity(FlowMethod method, double s, const Vec& K, const Vec& Kbar, const Mat& J) {
  if (K.size() != Kbar.size()) throw LengthMismatch("K and Kbar differ in length");
  if (method == FlowMethod::Fractional && s == 0.0) method = FlowMethod::Ricci;
  if (method == FlowMethod::Fractional && s == 1.0) method = FlowMethod::Calabi;

  switch (method) {
    case FlowMethod::Ricci:
      return Kbar - K;
    case FlowMethod::Calabi: {
      if (J.rows() != K.size() || J.cols() != K.size()) throw LengthMismatch("Jacobian size");
      if (Eigen::LLT<Mat>(J).info() != Eigen::Success) throw_not_pd(J);
      return -(J * (K - Kbar));
    }
    case FlowMethod::Fractional: {
      if (J.rows() != K.size() || J.cols() != K.size()) throw LengthMismatch("Jacobian size");
      Mat Js;
      try {
        Js = spd_power(J, s);
      } catch (const NotSPD&) {
        throw_not_pd(J);
      }
      return -(Js * (K - Kbar));
    }
  }
  return Vec();
}

// ---------------------------------------------------------------------------

FlowResult run_flow(const Surface& s, const Vec& alpha0, const Vec& Kbar, const FlowConfig& cfg,
                    const std::optional<Vec>& base) {
  cfg.validate();
  check_target(s, Kbar);
  require_admissible(s, alpha0);
  const Vec base_point = base ? *base : default_base(s);

  FlowResult out;
  FlowTrace& trace = out.trace;
  trace.structure_condition = structure_condition_holds(s);

  Vec alpha = alpha0;
  Vec K = curvature(s, alpha).K;
  double C = calabi_energy(K, Kbar);
  double P = potential(s, alpha, base_point, Kbar);
  double t = 0.0;
  trace.rows.push_back({0, 0.0, 0.0, (K - Kbar).lpNorm<Eigen::Infinity>(), C, P,
                        admissibility(s, alpha).min_margin});

  const bool needs_J = velocity_needs_jacobian(cfg.method, cfg.s);
  const double dt_cap = cfg.dt0 * cfg.max_dt_factor;
  double dt = cfg.dt0;
  int streak = 0;
  long step = 0;
  Vec v;
  bool have_velocity = false;

  while (true) {
    if (trace.rows.back().resid_inf <= cfg.tol) {
      trace.status = FlowStatus::Converged;
      break;
    }
    if (step >= cfg.max_steps) {
      trace.status = FlowStatus::MaxSteps;
      break;
    }
    if (!have_velocity) {
      try {
        const Mat J = needs_J ? global_jacobian(s, alpha).dense : Mat();
        v = velocity(cfg.method, cfg.s, K, Kbar, J);
      } catch (const JacobianNotPD& e) {
        trace.status = FlowStatus::JacobianNotPD;
        trace.message = e.what();
        break;
      }
      have_velocity = true;
    }

    const Vec trial = alpha + dt * v;
    bool accepted = false;
    double margin = 0.0, C_trial = 0.0, dP = 0.0;
    Vec K_trial;
    if (auto m = guarded_margin(s, trial, cfg.admissibility_margin)) {
      margin = *m;
      K_trial = curvature(s, trial).K;
      C_trial = calabi_energy(K_trial, Kbar);
      if (C_trial <= C) {
        dP = potential_increment(s, alpha, trial, Kbar).value;
        accepted = dP <= 0.0;
      }
    }

    if (!accepted) {
      ++trace.rejected_steps;
      streak = 0;
      dt *= cfg.shrink;
      if (dt < tol::kStepUnderflow) {
        trace.status = FlowStatus::StalledStep;
        trace.message = "step size fell below the underflow threshold";
        break;
      }
      continue;
    }

    ++step;
    t += dt;
    alpha = trial;
    K = std::move(K_trial);
    C = C_trial;
    P += dP;
    have_velocity = false;
    trace.rows.push_back({step, t, dt, (K - Kbar).lpNorm<Eigen::Infinity>(), C, P, margin});

    if (++streak >= cfg.grow_after) {
      streak = 0;
      dt = std::min(dt / cfg.shrink, dt_cap);
    }
  }

  out.alpha = alpha;
  return out;
}

// ---------------------------------------------------------------------------

NewtonResult solve_prescribed(const Surface& s, const Vec& alpha0, const Vec& Kbar,
                              const NewtonConfig& cfg) {
  cfg.validate();
  check_target(s, Kbar);
  require_admissible(s, alpha0);

  NewtonResult out;
  Vec alpha = alpha0;
  bool fallback_used = false;
  int pinned = 0;

  for (int iter = 0;; ++iter) {
    const Vec r = curvature(s, alpha).K - Kbar;
    NewtonIterate row;
    row.iter = iter;
    row.resid_inf = r.lpNorm<Eigen::Infinity>();
    row.min_margin = admissibility(s, alpha).min_margin;

    if (row.resid_inf <= cfg.tol) {
      out.log.push_back(row);
      out.status = NewtonStatus::Converged;
      break;
    }
    if (iter >= cfg.max_iters) {
      out.log.push_back(row);
      out.status = NewtonStatus::MaxIters;
      break;
    }

    const Mat J = global_jacobian(s, alpha).dense;
    Eigen::LLT<Mat> llt(J);
    Vec d;
    if (llt.info() == Eigen::Success) {
      d = -llt.solve(r);
    } else if (!fallback_used) {
      fallback_used = true;
      row.gradient_fallback = true;
      d = -r;
    } else {
      out.log.push_back(row);
      out.status = NewtonStatus::JacobianNotPD;
      std::ostringstream os;
      os.precision(17);
      os << "curvature Jacobian is not positive definite (min eigenvalue "
         << min_eigenvalue_sym(J) << ")";
      out.message = os.str();
      break;
    }

    const double slope = r.dot(d);
    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= cfg.min_step) {
      const Vec trial = alpha + lambda * d;
      if (guarded_margin(s, trial, cfg.admissibility_margin)) {
        const double dP = potential_increment(s, alpha, trial, Kbar).value;
        if (dP <= cfg.armijo * lambda * slope) {
          row.step = lambda;
          row.potential_change = dP;
          alpha = trial;
          accepted = true;
          break;
        }
      }
      lambda *= cfg.backtrack;
    }
    out.log.push_back(row);
    const bool at_facet = admissibility(s, alpha).min_margin <= cfg.pinned_factor * cfg.admissibility_margin;
    pinned = accepted && at_facet && row.step < cfg.pinned_step ? pinned + 1 : 0;
    if (!accepted || pinned >= cfg.pinned_iters) {
      const AdmissibilityReport rep = admissibility(s, alpha);
      std::ostringstream os;
      os.precision(6);
      os << "line search stalled; nearest facet: edge " << rep.nearest_edge_id << " margin "
         << rep.min_margin << ", distance estimate " << rep.distance_estimate
         << "; the target curvature is likely not attained by an admissible factor";
      if (accepted) {
        out.log.push_back(NewtonIterate{iter + 1, (curvature(s, alpha).K - Kbar).lpNorm<Eigen::Infinity>(),
                                        0.0, 0.0, rep.min_margin, false});
      }
      out.status = NewtonStatus::NotAttained;
      out.message = os.str();
      break;
    }
  }

  out.alpha = alpha;
  return out;
}

MultiStartResult solve_multistart(const Surface& s, const std::vector<Vec>& starts,
                                  const Vec& Kbar, const NewtonConfig& cfg, double agreement) {
  MultiStartResult out;
  bool have = false;
  for (const Vec& a0 : starts) {
    out.runs.push_back(solve_prescribed(s, a0, Kbar, cfg));
    const NewtonResult& run = out.runs.back();
    if (run.status != NewtonStatus::Converged) continue;
    if (!have) {
      out.alpha = run.alpha;
      have = true;
      continue;
    }
    out.max_disagreement =
        std::max(out.max_disagreement, (run.alpha - out.alpha).lpNorm<Eigen::Infinity>());
  }
  if (!have) throw Error("no start converged");
  if (out.max_disagreement > agreement) {
    std::ostringstream os;
    os.precision(6);
    os << "multi-start solutions disagree by " << out.max_disagreement << " > " << agreement;
    throw Error(os.str());
  }
  return out;
}

}  // namespace hexconf
