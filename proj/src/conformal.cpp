#include "hexconf/conformal.hpp"

#include "hexconf/errors.hpp"
#include "hexconf/tolerances.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hexconf {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

bool in_box(double a) { return a > 0.0 && a < kHalfPi; }

void require_size(const Surface& s, const Vec& v, const char* what) {
  if (v.size() != s.n_boundary()) {
    std::ostringstream os;
    os << what << " has " << v.size() << " components, surface has " << s.n_boundary();
    throw LengthMismatch(os.str());
  }
}

Vec to_vec(std::span<const double> x) {
  return Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

ConformalFactor ConformalFactor::from_alpha(Vec alpha) {
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!in_box(alpha[i])) {
      std::ostringstream os;
      os.precision(17);
      os << "alpha[" << i << "] = " << alpha[i] << " is outside (0, pi/2)";
      throw DomainError(os.str());
    }
  }
  ConformalFactor f;
  f.alpha_ = std::move(alpha);
  return f;
}

ConformalFactor ConformalFactor::from_u(const Vec& u) {
  Vec alpha(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) throw DomainError("u[" + std::to_string(i) + "] is not finite");
    alpha[i] = alpha_from_u(u[i]);
  }
  return from_alpha(std::move(alpha));
}

Vec ConformalFactor::u() const {
  Vec u(alpha_.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = u_from_alpha(alpha_[i]);
  return u;
}

// ---------------------------------------------------------------------------

AdmissibilityReport admissibility(const Surface& s, const Vec& alpha) {
  require_size(s, alpha, "conformal factor");
  AdmissibilityReport r;
  r.admissible = true;
  r.min_margin = std::numeric_limits<double>::infinity();
  r.distance_estimate = std::numeric_limits<double>::infinity();

  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!in_box(alpha[i])) r.admissible = false;
    r.distance_estimate = std::min({r.distance_estimate, alpha[i], kHalfPi - alpha[i]});
  }

  r.margins.reserve(s.edges().size());
  for (const Edge& e : s.edges()) {
    const double a_i = alpha[e.ends[0]], a_j = alpha[e.ends[1]];
    const double m = edge_margin(a_i, a_j, e.eta);
    r.margins.push_back(m);
    if (m < r.min_margin) {
      r.min_margin = m;
      r.nearest_edge_id = e.id;
    }
    if (!(m > tol::kAdmissibilityFloor)) r.admissible = false;
    // |grad margin| in alpha; a self-edge sees 2 alpha_i
    const double sn = std::abs(std::sin(a_i + a_j));
    const double grad = e.ends[0] == e.ends[1] ? 2.0 * sn : std::numbers::sqrt2 * sn;
    if (grad > 0.0) r.distance_estimate = std::min(r.distance_estimate, m / grad);
  }
  return r;
}

void require_admissible(const Surface& s, const Vec& alpha) {
  const AdmissibilityReport r = admissibility(s, alpha);
  if (r.admissible) return;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (!in_box(alpha[i])) {
      std::ostringstream os;
      os.precision(17);
      os << "alpha[" << i << "] = " << alpha[i] << " is outside (0, pi/2)";
      throw NotAdmissible(os.str(), -1.0);
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << "edge " << r.nearest_edge_id << " has margin " << r.min_margin << ", not above "
     << tol::kAdmissibilityFloor;
  throw NotAdmissible(os.str(), r.min_margin, r.nearest_edge_id);
}

CurvatureResult curvature(const Surface& s, const Vec& alpha) {
  require_admissible(s, alpha);
  CurvatureResult out;
  out.K = Vec::Zero(s.n_boundary());
  out.edge_lengths.reserve(s.edges().size());
  for (const Edge& e : s.edges()) {
    out.edge_lengths.push_back(edge_length_alpha(alpha[e.ends[0]], alpha[e.ends[1]], e.eta));
  }
  out.face_angles.reserve(s.faces().size());
  for (std::size_t f = 0; f < s.faces().size(); ++f) {
    const auto& idx = s.face_edge_indices()[f];
    const HexagonMetric m = hexagon_angles(
        {out.edge_lengths[idx[0]], out.edge_lengths[idx[1]], out.edge_lengths[idx[2]]});
    for (int t = 0; t < 3; ++t) out.K[s.faces()[f].corners[t]] += m.theta[t];
    out.face_angles.push_back(m.theta);
  }
  return out;
}

Vec curvature_from_u(const Surface& s, const Vec& u) {
  require_size(s, u, "conformal factor");
  std::vector<double> lengths;
  lengths.reserve(s.edges().size());
  for (const Edge& e : s.edges()) {
    try {
      lengths.push_back(edge_length_u(u[e.ends[0]], u[e.ends[1]], e.eta));
    } catch (const NotAdmissible& err) {
      throw NotAdmissible("edge " + std::to_string(e.id) + ": " + err.what(), err.margin(), e.id);
    }
  }
  Vec K = Vec::Zero(s.n_boundary());
  for (std::size_t f = 0; f < s.faces().size(); ++f) {
    const auto& idx = s.face_edge_indices()[f];
    const HexagonMetric m = hexagon_angles({lengths[idx[0]], lengths[idx[1]], lengths[idx[2]]});
    for (int t = 0; t < 3; ++t) K[s.faces()[f].corners[t]] += m.theta[t];
  }
  return K;
}

// ---------------------------------------------------------------------------

namespace {

double extremal_eigenvalue_dense(const Mat& sym, bool smallest) {
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  const Vec& ev = es.eigenvalues();  // ascending
  return smallest ? ev[0] : ev[ev.size() - 1];
}

// Power iteration on a symmetric matrix; returns the dominant Rayleigh quotient.
double power_iteration(const Mat& sym, double shift) {
  Vec x = Vec::Ones(sym.rows()).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 5000; ++it) {
    Vec y = sym * x - shift * x;
    const double norm = y.norm();
    if (norm == 0.0) return shift;
    const double next = x.dot(y);
    x = y / norm;
    if (std::abs(next - lambda) <= 1e-13 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda + shift;
}

constexpr Eigen::Index kDenseEigenLimit = 512;

}  // namespace

double GlobalJacobian::symmetry_residual() const {
  const double norm = dense.cwiseAbs().rowwise().sum().maxCoeff();
  return (dense - dense.transpose()).cwiseAbs().maxCoeff() / std::max(1.0, norm);
}

double GlobalJacobian::min_eigenvalue() const {
  const Mat sym = 0.5 * (dense + dense.transpose());
  if (sym.rows() <= kDenseEigenLimit) return extremal_eigenvalue_dense(sym, true);
  const double top = power_iteration(sym, 0.0);
  return power_iteration(sym, top);
}

double GlobalJacobian::max_eigenvalue() const {
  const Mat sym = 0.5 * (dense + dense.transpose());
  if (sym.rows() <= kDenseEigenLimit) return extremal_eigenvalue_dense(sym, false);
  return power_iteration(sym, 0.0);
}

GlobalJacobian global_jacobian(const Surface& s, const Vec& alpha, JacobianRoute route) {
  require_admissible(s, alpha);
  const int n = s.n_boundary();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * s.faces().size());

  for (std::size_t f = 0; f < s.faces().size(); ++f) {
    const Face& face = s.faces()[f];
    const CornerAlpha a{{alpha[face.corners[0]], alpha[face.corners[1]], alpha[face.corners[2]]}};
    const FaceEta eta{s.face_eta(f)};
    const HexagonMetric m = face_metric(a, eta);
    const Mat3 J = route == JacobianRoute::Closed ? face_jacobian_closed(a, eta, m)
                                                  : face_jacobian_chain(a, eta, m);
    // repeated corners land on the same entry and are summed
    for (int t = 0; t < 3; ++t) {
      for (int c = 0; c < 3; ++c) triplets.emplace_back(face.corners[t], face.corners[c], J(t, c));
    }
  }

  GlobalJacobian out;
  out.sparse.resize(n, n);
  out.sparse.setFromTriplets(triplets.begin(), triplets.end());
  out.dense = Mat(out.sparse);
  return out;
}

Mat global_jacobian_fd(const Surface& s, const Vec& alpha, double h) {
  const Eigen::Index n = alpha.size();
  Mat J(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Vec plus = alpha, minus = alpha;
    plus[c] += h;
    minus[c] -= h;
    J.col(c) = (curvature(s, plus).K - curvature(s, minus).K) / (2.0 * h);
  }
  return J;
}

// ---------------------------------------------------------------------------

Vec default_base(const Surface& s) {
  double bound = std::numbers::pi / 4.0;
  for (const Edge& e : s.edges()) {
    bound = std::min(bound, std::acos(-std::min(e.eta, 1.0)) / 2.0);
  }
  return Vec::Constant(s.n_boundary(), 0.5 * bound);
}

LineIntegral energy(const Surface& s, const Vec& a, const Vec& base) {
  return energy_path(s, {base, a});
}

LineIntegral energy_path(const Surface& s, const std::vector<Vec>& waypoints) {
  std::vector<std::vector<double>> pts;
  for (const Vec& w : waypoints) {
    require_size(s, w, "path point");
    require_admissible(s, w);
    pts.push_back(to_std(w));
  }
  const CovectorField field = [&](std::span<const double> x) {
    return to_std(curvature(s, to_vec(x)).K);
  };
  return integrate_one_form_path(field, pts);
}

double potential(const Surface& s, const Vec& a, const Vec& base, const Vec& Kbar) {
  require_size(s, Kbar, "target curvature");
  return energy(s, a, base).value - Kbar.dot(a - base);
}

LineIntegral potential_increment(const Surface& s, const Vec& from, const Vec& to,
                                 const Vec& Kbar) {
  require_size(s, Kbar, "target curvature");
  require_admissible(s, from);
  require_admissible(s, to);
  const CovectorField field = [&](std::span<const double> x) {
    return to_std(curvature(s, to_vec(x)).K - Kbar);
  };
  // (K - Kbar) is evaluated with absolute error ~ eps |Kbar|; below that the
  // estimates only differ by rounding.
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() *
                       Kbar.cwiseAbs().dot((to - from).cwiseAbs());
  const std::vector<double> f = to_std(from), t = to_std(to);
  return integrate_one_form(field, f, t, floor);
}

double calabi_energy(const Vec& K, const Vec& Kbar) {
  if (K.size() != Kbar.size()) {
    throw LengthMismatch("curvature vectors have lengths " + std::to_string(K.size()) + " and " +
                         std::to_string(Kbar.size()));
  }
  return 0.5 * (K - Kbar).squaredNorm();
}

}  // namespace hexconf
