#include "hexconf/cli.hpp"

#include "hexconf/conformal.hpp"
#include "hexconf/errors.hpp"
#include "hexconf/io.hpp"
#include "hexconf/sampling.hpp"
#include "hexconf/solve.hpp"
#include "hexconf/tolerances.hpp"
#include "hexconf/volume.hpp"

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

namespace hexconf::cli {

std::string version() { return "hexconf 0.1.0"; }

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const NotAdmissible& e) {
    err << "error: not admissible: " << e.what() << '\n';
    return kNotAdmissible;
  } catch (const JacobianNotPD& e) {
    err << "error: " << e.what() << '\n';
    return kNotPD;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

// Writes to `path`, or to `fallback` when the path is empty.
class Sink {
public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw ParseError("cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream* stream_;
};

Surface open_surface(const std::string& path, bool allow_repeated) {
  Surface s = load_surface(path, !allow_repeated);
  return s;
}

Vec open_factor(const std::string& path, const Surface& s) {
  const FactorFile f = load_factor(path);
  if (f.factor.size() != s.n_boundary()) {
    throw LengthMismatch("factor file has " + std::to_string(f.factor.size()) +
                         " components, surface has " + std::to_string(s.n_boundary()));
  }
  return f.factor.alpha();
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Surface s = open_surface(o.surface, o.allow_repeated);
    out << "surface: " << o.surface << '\n';
    out << "n_boundary: " << s.n_boundary() << "\nedges: " << s.edges().size()
        << "\nfaces: " << s.faces().size() << '\n';
    for (const std::string& w : s.warnings()) out << "warning: " << w << '\n';
    const auto violations = check_structure_condition(s);
    out << "structure_condition: " << (violations.empty() ? "holds" : "fails") << '\n';
    for (const StructureViolation& v : violations) {
      out << "  face " << v.face_id << ' ' << v.label << " = " << format_double(v.value) << '\n';
    }
    return kOk;
  });
}

int cmd_curvature(const CurvatureOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Surface s = open_surface(o.surface, o.allow_repeated);
    const Vec alpha = open_factor(o.factors, s);
    const AdmissibilityReport report = admissibility(s, alpha);
    if (!report.admissible) {
      out << margins_to_json(s, report);
      err << "error: not admissible: edge " << report.nearest_edge_id << " has margin "
          << format_double(report.min_margin) << '\n';
      return kNotAdmissible;
    }
    const CurvatureResult c = curvature(s, alpha);
    std::optional<GlobalJacobian> J;
    if (o.jacobian) J = global_jacobian(s, alpha);
    Sink sink(o.out, out);
    *sink << curvature_to_json(s, c, report, J ? &*J : nullptr);
    return kOk;
  });
}

int cmd_flow(const FlowOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Surface s = open_surface(o.surface, o.allow_repeated);
    const Vec alpha0 = open_factor(o.factors, s);
    const Vec Kbar = load_target(o.target, s);
    FlowConfig cfg;
    cfg.method = parse_flow_method(o.method);
    cfg.s = o.s;
    cfg.dt0 = o.dt;
    cfg.tol = o.tol;
    cfg.max_steps = o.max_steps;
    cfg.shrink = o.shrink;
    cfg.admissibility_margin = o.margin;
    const FlowResult r = run_flow(s, alpha0, Kbar, cfg);

    {
      Sink sink(o.trace, out);
      write_trace_csv(*sink, r.trace);
    }
    if (!o.out.empty()) save_factor(r.alpha, o.out);
    if (!r.trace.structure_condition) {
      err << "note: structure condition fails; monotonicity and definiteness are not guaranteed\n";
    }
    if (!r.trace.message.empty()) err << r.trace.message << '\n';
    switch (r.trace.status) {
      case FlowStatus::Converged: return kOk;
      case FlowStatus::JacobianNotPD: return kNotPD;
      default: return kNotConverged;
    }
  });
}

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Surface s = open_surface(o.surface, o.allow_repeated);
    const Vec alpha0 = open_factor(o.factors, s);
    const Vec Kbar = load_target(o.target, s);
    NewtonConfig cfg;
    cfg.tol = o.tol;
    cfg.max_iters = o.max_iters;
    cfg.armijo = o.armijo;
    cfg.backtrack = o.backtrack;
    cfg.admissibility_margin = o.margin;

    NewtonResult result;
    if (o.starts > 0) {
      std::vector<Vec> starts{alpha0};
      Rng rng(o.seed);
      for (int i = 0; i < o.starts; ++i) starts.push_back(sample_admissible(s, rng));
      MultiStartResult multi;
      try {
        multi = solve_multistart(s, starts, Kbar, cfg);
      } catch (const NotAdmissible&) {
        throw;
      } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kNotConverged;
      }
      err << "starts: " << starts.size() << ", max disagreement "
          << format_double(multi.max_disagreement) << '\n';
      result = multi.runs.front();
      if (result.status != NewtonStatus::Converged) {
        for (const NewtonResult& run : multi.runs) {
          if (run.status == NewtonStatus::Converged) {
            result = run;
            break;
          }
        }
      }
    } else {
      result = solve_prescribed(s, alpha0, Kbar, cfg);
    }

    if (!o.log.empty()) {
      Sink sink(o.log, out);
      write_newton_log_csv(*sink, result);
    }
    err << "status: " << to_string(result.status) << ", iterations "
        << result.log.size() - 1 << ", residual " << format_double(result.log.back().resid_inf)
        << '\n';
    if (!result.message.empty()) err << result.message << '\n';

    switch (result.status) {
      case NewtonStatus::Converged: {
        Sink sink(o.out, out);
        *sink << factor_to_json(result.alpha);
        return kOk;
      }
      case NewtonStatus::NotAttained: return kNotAttained;
      case NewtonStatus::JacobianNotPD: return kNotPD;
      case NewtonStatus::MaxIters: return kNotConverged;
    }
    return kNotConverged;
  });
}

// ---------------------------------------------------------------------------

namespace {

double inf_norm(const Mat& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

struct CheckLine {
  std::string name;
  double value;
  std::string threshold;
  bool pass;
  bool applicable = true;
  bool diagnostic = false;  // reported, never fails the run
};

}  // namespace

int cmd_jacobian_check(const JacobianCheckOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Surface s = open_surface(o.surface, o.allow_repeated);
    if (o.samples < 1) throw DomainError("--samples must be at least 1");
    const bool structure = structure_condition_holds(s);
    bool all_zero = true;
    for (const Edge& e : s.edges()) all_zero = all_zero && e.eta == 0.0;

    Rng rng(o.seed);
    double sym = 0.0, min_eig = std::numeric_limits<double>::infinity();
    double fd_face = 0.0, fd_global = 0.0, zero_id = 0.0, weighted_id = 0.0, det_dev = 0.0;
    bool any_weighted = false;
    double det_min = std::numeric_limits<double>::infinity();
    double lb_gap = std::numeric_limits<double>::infinity();

    for (int n = 0; n < o.samples; ++n) {
      const Vec alpha = sample_admissible(s, rng, o.margin);
      const GlobalJacobian J = global_jacobian(s, alpha);
      const GlobalJacobian Jc = global_jacobian(s, alpha, JacobianRoute::ChainRule);
      sym = std::max({sym, J.symmetry_residual(), Jc.symmetry_residual()});
      min_eig = std::min(min_eig, J.min_eigenvalue());
      const Mat fd = global_jacobian_fd(s, alpha, tol::kFdStep);
      fd_global = std::max(fd_global, inf_norm(fd - J.dense) / inf_norm(J.dense));

      for (std::size_t f = 0; f < s.faces().size(); ++f) {
        const Face& face = s.faces()[f];
        const CornerAlpha a{{alpha[face.corners[0]], alpha[face.corners[1]], alpha[face.corners[2]]}};
        const FaceEta eta{s.face_eta(f)};
        const HexagonMetric m = face_metric(a, eta);
        const Mat3 Jf = face_jacobian_closed(a, eta, m);
        fd_face = std::max(fd_face, inf_norm(face_jacobian_fd(a, eta, tol::kFdStep) - Jf) / inf_norm(Jf));
        if (eta[0] == 0.0 && eta[1] == 0.0 && eta[2] == 0.0) {
          for (double r : zero_weight_identity_residual(Jf, m)) zero_id = std::max(zero_id, std::abs(r));
        } else {
          any_weighted = true;
          for (double r : zero_weight_identity_residual(Jf, m)) weighted_id = std::max(weighted_id, std::abs(r));
        }
        const double det = det_dl_dalpha(a, eta, m);
        const double det_fd = pair_order(length_jacobian_fd(a, eta, tol::kFdStep)).determinant();
        det_dev = std::max(det_dev, std::abs(det - det_fd) / std::abs(det));
        det_min = std::min(det_min, det);
        const double lb = det_dl_dalpha_lower_bound(a, eta, m);
        lb_gap = std::min(lb_gap, (det - lb) / std::abs(lb));
      }
    }

    std::vector<CheckLine> lines{
        {"symmetry_residual", sym, "<= " + fmt(tol::kSymmetry), sym <= tol::kSymmetry},
        {"min_eigenvalue", min_eig, "> 0", min_eig > 0.0, s.strict()},
        {"fd_face_deviation", fd_face, "<= " + fmt(tol::kFdAgreement), fd_face <= tol::kFdAgreement},
        {"fd_global_deviation", fd_global, "<= " + fmt(tol::kFdAgreement),
         fd_global <= tol::kFdAgreement},
        {"zero_weight_identity", zero_id, "<= " + fmt(tol::kZeroWeightIdentity),
         zero_id <= tol::kZeroWeightIdentity, all_zero},
        {"weighted_identity", weighted_id, "-", true, any_weighted, true},
        {"det_deviation", det_dev, "<= " + fmt(tol::kDetAgreement), det_dev <= tol::kDetAgreement},
        {"det_min", det_min, "> 0", det_min > 0.0},
        {"det_lower_bound_gap", lb_gap, ">= " + fmt(-tol::kDetLowerBoundSlack),
         lb_gap >= -tol::kDetLowerBoundSlack},
    };

    out << "surface: " << o.surface << "\nsamples: " << o.samples << "\nseed: " << o.seed << '\n';
    out << "structure_condition: " << (structure ? "holds" : "fails (report only)") << '\n';
    out << std::left << std::setw(24) << "check" << std::setw(16) << "value" << std::setw(20)
        << "threshold" << "result\n";
    bool failed = false;
    for (const CheckLine& l : lines) {
      std::string result;
      if (!l.applicable) {
        result = "n/a";
      } else if (l.diagnostic) {
        result = "(info)";
      } else if (!structure) {
        result = l.pass ? "ok (info)" : "exceeds (info)";
      } else {
        result = l.pass ? "pass" : "FAIL";
        failed = failed || !l.pass;
      }
      out << std::left << std::setw(24) << l.name << std::setw(16) << fmt(l.value) << std::setw(20)
          << l.threshold << result << '\n';
    }
    return failed ? kCheckFailed : kOk;
  });
}

int cmd_volume(const VolumeOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const FaceEta eta = FaceEta::from_pairs(o.eta[0], o.eta[1], o.eta[2]);
    CornerAlpha base;
    if (o.base) {
      base = CornerAlpha{*o.base};
    } else {
      double bound = std::numbers::pi / 4.0;
      for (int t = 0; t < 3; ++t) bound = std::min(bound, std::acos(-std::min(eta[t], 1.0)) / 2.0);
      base = CornerAlpha{{0.5 * bound, 0.5 * bound, 0.5 * bound}};
    }
    const PyramidChart chart(eta, base);
    const double step = o.grid > 0.0 ? o.grid : std::numbers::pi / 60.0;
    if (step >= std::numbers::pi / 2.0) throw DomainError("--grid step must be below pi/2");

    Sink sink(o.out, out);
    std::ostream& csv = *sink;
    csv << "a_i,a_j,a_k,V,hess_min_eig,hess_max_eig" << (o.dogleg ? ",V_dogleg" : "") << '\n';

    auto row = [&](const CornerAlpha& a) {
      const double V = relative_volume(chart, a).value;
      Eigen::SelfAdjointEigenSolver<Mat3> es(volume_hessian(chart, a), Eigen::EigenvaluesOnly);
      csv << format_double(a[0]) << ',' << format_double(a[1]) << ',' << format_double(a[2]) << ','
          << format_double(V) << ',' << format_double(es.eigenvalues()[0]) << ','
          << format_double(es.eigenvalues()[2]);
      if (o.dogleg) {
        CornerAlpha w;
        for (int t = 0; t < 3; ++t) w[t] = 0.5 * std::min(base[t], a[t]);
        csv << ',' << format_double(relative_volume_path(chart, {w, a}).value);
      }
      csv << '\n';
    };

    row(base);
    const int count = static_cast<int>(std::ceil(std::numbers::pi / 2.0 / step)) - 1;
    for (int i = 1; i <= count; ++i) {
      for (int j = 1; j <= count; ++j) {
        for (int k = 1; k <= count; ++k) {
          const CornerAlpha a{{i * step, j * step, k * step}};
          if (chart.admissible(a)) row(a);
        }
      }
    }
    return kOk;
  });
}

int cmd_sample(const SampleOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Surface s = open_surface(o.surface, o.allow_repeated);
    Rng rng(o.seed);
    const Vec alpha = sample_admissible(s, rng, o.margin);
    Sink sink(o.out, out);
    *sink << factor_to_json(alpha, o.as_u);
    return kOk;
  });
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete conformal structures on ideally triangulated surfaces with boundary"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  ValidateOptions val;
  auto* c_val = app.add_subcommand("validate", "Validate a surface file and check the structure condition");
  c_val->add_option("surface", val.surface, "Surface JSON file")->required()->check(CLI::ExistingFile);
  c_val->add_flag("--allow-repeated", val.allow_repeated, "Accept faces with repeated corners");

  CurvatureOptions cur;
  auto* c_cur = app.add_subcommand("curvature", "Boundary lengths K and the Jacobian dK/dalpha");
  c_cur->add_option("surface", cur.surface, "Surface JSON file")->required()->check(CLI::ExistingFile);
  c_cur->add_option("factors", cur.factors, "Factor JSON file (alpha or u)")->required()->check(CLI::ExistingFile);
  c_cur->add_option("--out", cur.out, "Output JSON path (default: stdout)");
  c_cur->add_flag("!--no-jacobian", cur.jacobian, "Omit the Jacobian from the output");
  c_cur->add_flag("--allow-repeated", cur.allow_repeated, "Accept faces with repeated corners");

  FlowOptions flow;
  auto* c_flow = app.add_subcommand("flow", "Integrate a Ricci, Calabi or fractional Calabi flow");
  c_flow->add_option("surface", flow.surface, "Surface JSON file")->required()->check(CLI::ExistingFile);
  c_flow->add_option("factors", flow.factors, "Initial factor JSON file")->required()->check(CLI::ExistingFile);
  c_flow->add_option("target", flow.target, "Target: {\"K\": [...]} or a factor file")->required()->check(CLI::ExistingFile);
  c_flow->add_option("--method", flow.method, "ricci, calabi or fractional")
      ->check(CLI::IsMember({"ricci", "calabi", "fractional"}))->capture_default_str();
  c_flow->add_option("--s", flow.s, "Fractional order")->capture_default_str();
  c_flow->add_option("--dt", flow.dt, "Initial step size")->capture_default_str();
  c_flow->add_option("--tol", flow.tol, "Stop when |K - Kbar|_inf <= tol")->capture_default_str();
  c_flow->add_option("--max-steps", flow.max_steps, "Accepted step limit")->capture_default_str();
  c_flow->add_option("--shrink", flow.shrink, "Step shrink factor on rejection")->capture_default_str();
  c_flow->add_option("--margin", flow.margin, "Minimum edge margin for accepted steps")->capture_default_str();
  c_flow->add_option("--trace", flow.trace, "Trace CSV path (default: stdout)");
  c_flow->add_option("--out", flow.out, "Write the final factor to this JSON file");
  c_flow->add_flag("--allow-repeated", flow.allow_repeated, "Accept faces with repeated corners");

  SolveOptions sol;
  auto* c_sol = app.add_subcommand("solve", "Newton solve for a prescribed curvature");
  c_sol->add_option("surface", sol.surface, "Surface JSON file")->required()->check(CLI::ExistingFile);
  c_sol->add_option("factors", sol.factors, "Starting factor JSON file")->required()->check(CLI::ExistingFile);
  c_sol->add_option("target", sol.target, "Target: {\"K\": [...]} or a factor file")->required()->check(CLI::ExistingFile);
  c_sol->add_option("--tol", sol.tol, "Stop when |K - Kbar|_inf <= tol")->capture_default_str();
  c_sol->add_option("--max-iters", sol.max_iters, "Iteration limit")->capture_default_str();
  c_sol->add_option("--armijo", sol.armijo, "Sufficient-decrease constant")->capture_default_str();
  c_sol->add_option("--backtrack", sol.backtrack, "Line-search shrink factor")->capture_default_str();
  c_sol->add_option("--margin", sol.margin, "Minimum edge margin for accepted steps")->capture_default_str();
  c_sol->add_option("--starts", sol.starts, "Additional seeded random starts; all must agree")->capture_default_str();
  c_sol->add_option("--seed", sol.seed, "Seed for the random starts")->capture_default_str();
  c_sol->add_option("--out", sol.out, "Solution factor path (default: stdout)");
  c_sol->add_option("--log", sol.log, "Iteration log CSV path");
  c_sol->add_flag("--allow-repeated", sol.allow_repeated, "Accept faces with repeated corners");

  JacobianCheckOptions jc;
  auto* c_jc = app.add_subcommand("jacobian-check", "Sampled checks of the Jacobian identities");
  c_jc->add_option("surface", jc.surface, "Surface JSON file")->required()->check(CLI::ExistingFile);
  c_jc->add_option("--samples", jc.samples, "Number of admissible samples")->capture_default_str();
  c_jc->add_option("--seed", jc.seed, "Sampling seed")->capture_default_str();
  c_jc->add_option("--margin", jc.margin, "Sampling margin from the box and facets")->capture_default_str();
  c_jc->add_flag("--allow-repeated", jc.allow_repeated, "Accept faces with repeated corners");

  VolumeOptions vol;
  std::vector<double> vol_eta, vol_base;
  auto* c_vol = app.add_subcommand("volume", "Relative pyramid volume and Hessian eigenvalues on a grid");
  c_vol->add_option("--eta", vol_eta, "Weights e_ij e_ik e_jk")->expected(3)->required();
  c_vol->add_option("--base", vol_base, "Reference angles a_i a_j a_k (volume zero there)")->expected(3);
  c_vol->add_option("--grid", vol.grid, "Grid step (default pi/60)");
  c_vol->add_option("--out", vol.out, "CSV path (default: stdout)");
  c_vol->add_flag("--dogleg", vol.dogleg, "Add a column recomputed along a two-segment path");

  SampleOptions smp;
  auto* c_smp = app.add_subcommand("sample", "Draw a seeded admissible factor");
  c_smp->add_option("surface", smp.surface, "Surface JSON file")->required()->check(CLI::ExistingFile);
  c_smp->add_option("--seed", smp.seed, "Sampling seed")->capture_default_str();
  c_smp->add_option("--margin", smp.margin, "Sampling margin")->capture_default_str();
  c_smp->add_option("--out", smp.out, "Factor path (default: stdout)");
  c_smp->add_flag("--u", smp.as_u, "Write the factor in the u chart");
  c_smp->add_flag("--allow-repeated", smp.allow_repeated, "Accept faces with repeated corners");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  if (c_val->parsed()) return cmd_validate(val, out, err);
  if (c_cur->parsed()) return cmd_curvature(cur, out, err);
  if (c_flow->parsed()) return cmd_flow(flow, out, err);
  if (c_sol->parsed()) return cmd_solve(sol, out, err);
  if (c_jc->parsed()) return cmd_jacobian_check(jc, out, err);
  if (c_vol->parsed()) {
    vol.eta = {vol_eta[0], vol_eta[1], vol_eta[2]};
    if (!vol_base.empty()) vol.base = std::array<double, 3>{vol_base[0], vol_base[1], vol_base[2]};
    return cmd_volume(vol, out, err);
  }
  if (c_smp->parsed()) return cmd_sample(smp, out, err);
  return kInputError;
}

}  // namespace hexconf::cli
