// Acceptance run: one PASS/FAIL line per check, nonzero exit on any failure.

#include "fixtures.hpp"

#include "hexconf/errors.hpp"
#include "hexconf/hexagon.hpp"
#include "hexconf/sampling.hpp"
#include "hexconf/solve.hpp"
#include "hexconf/tolerances.hpp"
#include "hexconf/volume.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace hexconf;
using std::numbers::pi;

namespace {

constexpr int kSamples = 100;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  %2d  %-28s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double inf_norm(const Mat& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Seeded samples per fixture; every check sees the same points.
std::vector<Vec> samples_for(const Surface& s, unsigned seed) {
  Rng rng(seed);
  std::vector<Vec> out;
  for (int k = 0; k < kSamples; ++k) out.push_back(sample_admissible(s, rng, 1e-3));
  return out;
}

struct FaceView {
  CornerAlpha alpha;
  FaceEta eta;
};

std::vector<FaceView> faces_at(const Surface& s, const Vec& a) {
  std::vector<FaceView> out;
  for (std::size_t f = 0; f < s.faces().size(); ++f) {
    const Face& face = s.faces()[f];
    out.push_back({CornerAlpha{{a[face.corners[0]], a[face.corners[1]], a[face.corners[2]]}},
                   FaceEta{s.face_eta(f)}});
  }
  return out;
}

template <typename F>
void for_each_sample(F f) {
  unsigned seed = 1000;
  for (const auto& fx : fixtures::all()) {
    const Surface s = fixtures::load(fx.file);
    for (const Vec& a : samples_for(s, seed++)) f(fx, s, a);
  }
}

Vec delta(int n) {
  Vec d(n);
  for (int i = 0; i < n; ++i) d[i] = i % 2 ? -0.02 : 0.02;
  return d;
}

struct Target {
  Vec bar, Kbar;
};

Target target_for(const Surface& s, unsigned seed) {
  Rng rng(seed);
  Target t;
  t.bar = sample_admissible(s, rng, 0.05);
  t.Kbar = curvature(s, t.bar).K;
  return t;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_trace(const FlowResult& x, const FlowResult& y) {
  if (x.trace.status != y.trace.status || x.trace.rows.size() != y.trace.rows.size()) return false;
  for (Eigen::Index i = 0; i < x.alpha.size(); ++i) {
    if (!same_bits(x.alpha[i], y.alpha[i])) return false;
  }
  for (std::size_t i = 0; i < x.trace.rows.size(); ++i) {
    const FlowRow &a = x.trace.rows[i], &b = y.trace.rows[i];
    if (a.step != b.step || !same_bits(a.t, b.t) || !same_bits(a.dt, b.dt) ||
        !same_bits(a.resid_inf, b.resid_inf) || !same_bits(a.calabi_energy, b.calabi_energy) ||
        !same_bits(a.potential, b.potential) || !same_bits(a.min_margin, b.min_margin)) {
      return false;
    }
  }
  return true;
}

// Least-squares decay rate of log |r|_2 against t, with |r|_2 = sqrt(2 C). The
// envelope uses half that rate and allows a transient constant of kEnvelopeConstant.
constexpr double kEnvelopeConstant = 10.0;

bool geometric_envelope(const FlowTrace& trace, double& rate, double& constant) {
  const auto& rows = trace.rows;
  if (rows.size() < 3) {
    rate = 0;
    constant = 1;
    return true;
  }
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (const FlowRow& r : rows) {
    const double y = std::log(std::sqrt(2 * r.calabi_energy));
    st += r.t;
    sy += y;
    stt += r.t * r.t;
    sty += r.t * y;
  }
  const double m = static_cast<double>(rows.size());
  rate = -(m * sty - st * sy) / (m * stt - st * st);
  if (!(rate > 0)) return false;
  const double r0 = std::sqrt(2 * rows.front().calabi_energy);
  constant = 0;
  for (const FlowRow& r : rows) {
    constant = std::max(constant, std::sqrt(2 * r.calabi_energy) * std::exp(0.5 * rate * r.t) / r0);
  }
  return constant <= kEnvelopeConstant;
}

}  // namespace

int main() {
  std::printf("hexconf acceptance: %zu fixtures, %d samples each\n", fixtures::all().size(), kSamples);

  report(1, "jacobian symmetry", [] {
    double worst = 0;
    for_each_sample([&](const auto&, const Surface& s, const Vec& a) {
      for (JacobianRoute route : {JacobianRoute::Closed, JacobianRoute::ChainRule}) {
        const GlobalJacobian J = global_jacobian(s, a, route);
        const double sym = (J.dense - J.dense.transpose()).cwiseAbs().maxCoeff() /
                           std::max(1.0, inf_norm(J.dense));
        worst = std::max(worst, sym);
      }
    });
    return Outcome{worst <= tol::kSymmetry, "max relative asymmetry " + sci(worst)};
  });

  report(2, "positive definiteness", [] {
    double lowest = std::numeric_limits<double>::infinity();
    bool all_structure = true;
    for_each_sample([&](const auto&, const Surface& s, const Vec& a) {
      all_structure = all_structure && structure_condition_holds(s);
      lowest = std::min(lowest, global_jacobian(s, a).min_eigenvalue());
    });
    return Outcome{all_structure && lowest > 0, "min eigenvalue " + sci(lowest)};
  });

  report(3, "closed form vs differences", [] {
    double face = 0, global = 0;
    for_each_sample([&](const auto&, const Surface& s, const Vec& a) {
      const GlobalJacobian J = global_jacobian(s, a);
      global = std::max(global, inf_norm(global_jacobian_fd(s, a, 1e-6) - J.dense) / inf_norm(J.dense));
      for (const FaceView& f : faces_at(s, a)) {
        const Mat3 Jf = face_jacobian_closed(f.alpha, f.eta, face_metric(f.alpha, f.eta));
        face = std::max(face, inf_norm(face_jacobian_fd(f.alpha, f.eta, 1e-6) - Jf) / inf_norm(Jf));
      }
    });
    return Outcome{face <= 1e-5 && global <= 1e-5, "face " + sci(face) + ", global " + sci(global)};
  });

  report(4, "zero-weight identity", [] {
    double worst = 0;
    int faces = 0;
    for_each_sample([&](const auto& fx, const Surface& s, const Vec& a) {
      if (!fx.zero_weights) return;
      for (const FaceView& f : faces_at(s, a)) {
        const HexagonMetric m = face_metric(f.alpha, f.eta);
        for (double r : zero_weight_identity_residual(face_jacobian_closed(f.alpha, f.eta, m), m)) {
          worst = std::max(worst, std::abs(r));
        }
        ++faces;
      }
    });
    return Outcome{faces > 0 && worst <= 1e-9,
                   std::to_string(faces) + " faces, max residual " + sci(worst)};
  });

  report(5, "length determinant", [] {
    double dev = 0, det_min = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    for_each_sample([&](const auto&, const Surface& s, const Vec& a) {
      for (const FaceView& f : faces_at(s, a)) {
        const HexagonMetric m = face_metric(f.alpha, f.eta);
        const double det = det_dl_dalpha(f.alpha, f.eta, m);
        const double fd = pair_order(length_jacobian_fd(f.alpha, f.eta, 1e-6)).determinant();
        dev = std::max(dev, std::abs(det - fd) / std::abs(det));
        det_min = std::min(det_min, det);
        const double lb = det_dl_dalpha_lower_bound(f.alpha, f.eta, m);
        gap = std::min(gap, (det - lb) / std::abs(lb));
      }
    });
    return Outcome{dev <= 1e-6 && det_min > 0 && gap >= -1e-9,
                   "deviation " + sci(dev) + ", min det " + sci(det_min) + ", bound gap " + sci(gap)};
  });

  report(6, "rigidity round trip", [] {
    double worst = 0;
    int runs = 0, converged = 0;
    unsigned seed = 2000;
    for (const auto& fx : fixtures::all()) {
      const Surface s = fixtures::load(fx.file);
      const Target t = target_for(s, seed++);
      Rng rng(seed++);
      for (int k = 0; k < 10; ++k) {
        const NewtonResult r = solve_prescribed(s, sample_admissible(s, rng, 1e-3), t.Kbar, NewtonConfig{});
        ++runs;
        if (r.status == NewtonStatus::Converged) ++converged;
        worst = std::max(worst, (r.alpha - t.bar).lpNorm<Eigen::Infinity>());
      }
    }
    return Outcome{converged == runs && worst < 1e-8,
                   std::to_string(converged) + "/" + std::to_string(runs) + " converged, max error " + sci(worst)};
  });

  struct FlowCase {
    const char* label;
    FlowMethod method;
    double s;
  };
  const std::vector<FlowCase> flow_cases{{"ricci", FlowMethod::Ricci, 0},
                                         {"calabi", FlowMethod::Calabi, 0},
                                         {"fractional 0.5", FlowMethod::Fractional, 0.5},
                                         {"fractional 2", FlowMethod::Fractional, 2}};
  double flow_margin_low = std::numeric_limits<double>::infinity();
  bool flow_margin_ok = true;

  report(7, "flow convergence", [&] {
    int runs = 0, ok = 0;
    long most_rows = 0;
    double slowest = std::numeric_limits<double>::infinity(), worst_constant = 0;
    std::string first_bad;
    unsigned seed = 3000;
    for (const auto& fx : fixtures::all()) {
      const Surface s = fixtures::load(fx.file);
      const Target t = target_for(s, seed++);
      const Vec a0 = t.bar + delta(s.n_boundary());
      for (const FlowCase& c : flow_cases) {
        FlowConfig cfg;
        cfg.method = c.method;
        cfg.s = c.s;
        const FlowResult r = run_flow(s, a0, t.Kbar, cfg);
        ++runs;
        bool good = r.trace.status == FlowStatus::Converged && r.trace.rows.back().resid_inf <= 1e-10;
        for (std::size_t i = 1; i < r.trace.rows.size(); ++i) {
          good = good && r.trace.rows[i].calabi_energy <= r.trace.rows[i - 1].calabi_energy;
        }
        for (const FlowRow& row : r.trace.rows) {
          flow_margin_low = std::min(flow_margin_low, row.min_margin);
          flow_margin_ok = flow_margin_ok && row.min_margin >= cfg.admissibility_margin;
        }
        double rate = 0, constant = 0;
        good = good && geometric_envelope(r.trace, rate, constant);
        slowest = std::min(slowest, rate);
        worst_constant = std::max(worst_constant, constant);
        most_rows = std::max(most_rows, static_cast<long>(r.trace.rows.size()));
        if (good) {
          ++ok;
        } else if (first_bad.empty()) {
          first_bad = fx.file + " " + c.label + " (" + to_string(r.trace.status) + ")";
        }
      }
    }
    std::string detail = std::to_string(ok) + "/" + std::to_string(runs) + " runs, max rows " +
                         std::to_string(most_rows) + ", slowest fitted rate " + sci(slowest) +
                         ", envelope constant " + sci(worst_constant);
    if (!first_bad.empty()) detail += ", first failure " + first_bad;
    return Outcome{ok == runs, detail};
  });

  report(8, "reduction identities", [] {
    int pairs = 0, identical = 0;
    unsigned seed = 3000;
    for (const auto& fx : fixtures::all()) {
      const Surface s = fixtures::load(fx.file);
      const Target t = target_for(s, seed++);
      const Vec a0 = t.bar + delta(s.n_boundary());
      FlowConfig ricci, calabi, f0, f1;
      calabi.method = FlowMethod::Calabi;
      f0.method = f1.method = FlowMethod::Fractional;
      f0.s = 0;
      f1.s = 1;
      identical += same_trace(run_flow(s, a0, t.Kbar, ricci), run_flow(s, a0, t.Kbar, f0));
      identical += same_trace(run_flow(s, a0, t.Kbar, calabi), run_flow(s, a0, t.Kbar, f1));
      pairs += 2;
    }
    return Outcome{identical == pairs,
                   std::to_string(identical) + "/" + std::to_string(pairs) + " traces bitwise identical"};
  });

  report(9, "closedness and gradients", [] {
    double energy_path_dev = 0, volume_path_dev = 0, energy_grad = 0, volume_grad = 0;
    const double h = 1e-5;
    unsigned seed = 4000;
    for (const auto& fx : fixtures::all()) {
      const Surface s = fixtures::load(fx.file);
      const int n = s.n_boundary();
      const Vec base = default_base(s);
      Rng rng(seed++);
      for (int k = 0; k < 10; ++k) {
        const Vec a = sample_admissible(s, rng, 1e-2);
        const Vec w = 0.5 * base.cwiseMin(a);
        const double straight = energy(s, a, base).value;
        const double dogleg = energy_path(s, {base, w, a}).value;
        energy_path_dev = std::max(energy_path_dev, std::abs(straight - dogleg));
        const Vec K = curvature(s, a).K;
        for (int i = 0; i < n; ++i) {
          Vec e = Vec::Zero(n);
          e[i] = h;
          const double fd = energy_path(s, {a - e, a + e}).value / (2 * h);
          energy_grad = std::max(energy_grad, std::abs(fd - K[i]) / std::max(1.0, std::abs(K[i])));
        }
      }
    }
    const std::vector<FaceEta> profiles{FaceEta::uniform(0), FaceEta::uniform(1.5),
                                        FaceEta::from_pairs(-0.5, 1, 1)};
    for (const FaceEta& eta : profiles) {
      Rng rng(seed++);
      for (int k = 0; k < 10; ++k) {
        const CornerAlpha base = sample_face_alpha(eta, rng, 1e-2);
        const CornerAlpha a = sample_face_alpha(eta, rng, 1e-2);
        const PyramidChart chart(eta, base);
        CornerAlpha w;
        for (int t = 0; t < 3; ++t) w[t] = 0.5 * std::min(base[t], a[t]);
        volume_path_dev = std::max(volume_path_dev, std::abs(relative_volume(chart, a).value -
                                                             relative_volume_path(chart, {w, a}).value));
        const HexagonMetric m = face_metric(a, eta);
        for (int t = 0; t < 3; ++t) {
          CornerAlpha lo = a, hi = a;
          lo[t] -= h;
          hi[t] += h;
          const double fd = relative_volume_path(PyramidChart(eta, lo), {hi}).value / (2 * h);
          volume_grad = std::max(volume_grad, std::abs(fd + 0.5 * m.theta[t]) /
                                                  std::max(1.0, 0.5 * m.theta[t]));
        }
      }
    }
    const bool pass = energy_path_dev <= 1e-8 && volume_path_dev <= 1e-8 && energy_grad <= 1e-6 &&
                      volume_grad <= 1e-6;
    return Outcome{pass, "paths: energy " + sci(energy_path_dev) + ", volume " + sci(volume_path_dev) +
                             "; gradients: energy " + sci(energy_grad) + ", volume " + sci(volume_grad)};
  });

  report(10, "volume concavity", [] {
    const std::vector<FaceEta> profiles{FaceEta::uniform(0), FaceEta::uniform(1.5),
                                        FaceEta::from_pairs(-0.5, 1, 1)};
    const double step = pi / 60;
    long points = 0;
    double highest = -std::numeric_limits<double>::infinity();
    for (const FaceEta& eta : profiles) {
      double bound = pi / 4;
      for (int t = 0; t < 3; ++t) bound = std::min(bound, std::acos(-std::min(eta[t], 1.0)) / 2);
      const PyramidChart chart(eta, CornerAlpha{{bound / 2, bound / 2, bound / 2}});
      for (int i = 1; i < 30; ++i) {
        for (int j = 1; j < 30; ++j) {
          for (int k = 1; k < 30; ++k) {
            const CornerAlpha a{{i * step, j * step, k * step}};
            if (!chart.admissible(a)) continue;
            const Eigen::SelfAdjointEigenSolver<Mat3> es(volume_hessian(chart, a), Eigen::EigenvaluesOnly);
            highest = std::max(highest, es.eigenvalues()[2]);
            ++points;
          }
        }
      }
    }
    return Outcome{points > 0 && highest < 0,
                   std::to_string(points) + " grid points, max Hessian eigenvalue " + sci(highest)};
  });

  report(11, "boundary behavior", [&] {
    // u0 = u1 = d/2 drives the shared zero-weight edge to length zero as d -> 0+.
    const Surface s = fixtures::load("torus3_zero.json");
    const std::vector<double> thresholds{10, 100, 1000};
    std::vector<double> reached;
    double previous = 0;
    bool monotone = true;
    std::size_t next = 0;
    for (int k = 0; k <= 6460 && next < thresholds.size(); ++k) {
      const double d = std::pow(10.0, -0.05 * k);
      const Vec u = (Vec(3) << d / 2, d / 2, 1.0).finished();
      const double K0 = curvature_from_u(s, u)[0];
      monotone = monotone && K0 > previous;
      previous = K0;
      while (next < thresholds.size() && K0 > thresholds[next]) {
        reached.push_back(d);
        ++next;
      }
    }
    // flows towards a target whose shared edge sits close to its facet
    const Surface pants = fixtures::load("pants_zero.json");
    const Vec near = (Vec(3) << pi / 4 - 5e-4, pi / 4 - 5e-4, 0.3).finished();
    const Vec Kbar = curvature(pants, near).K;
    for (const FlowCase& c : flow_cases) {
      FlowConfig cfg;
      cfg.method = c.method;
      cfg.s = c.s;
      cfg.max_steps = 5000;  // the stiff approach to the facet is slow; only the guard matters here
      const FlowResult r = run_flow(pants, fixtures::constant(3, pi / 6), Kbar, cfg);
      for (const FlowRow& row : r.trace.rows) {
        flow_margin_low = std::min(flow_margin_low, row.min_margin);
        flow_margin_ok = flow_margin_ok && row.min_margin >= cfg.admissibility_margin;
      }
    }
    std::ostringstream detail;
    detail << "K_0 passes";
    for (std::size_t i = 0; i < reached.size(); ++i) {
      detail << ' ' << thresholds[i] << " at d=" << sci(reached[i]);
    }
    detail << "; min accepted margin " << sci(flow_margin_low);
    return Outcome{reached.size() == thresholds.size() && monotone && flow_margin_ok, detail.str()};
  });

  report(12, "worked value", [] {
    const Surface s = fixtures::load("pants_zero.json");
    const Vec K = curvature(s, fixtures::constant(3, pi / 6)).K;
    const double expected = 2 * std::acosh(1.5);
    const double dev = (K.array() - expected).abs().maxCoeff();
    return Outcome{dev <= 1e-9, "K = " + sci(K[0]) + ", deviation " + sci(dev)};
  });

  std::printf("%s: %d failing\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
