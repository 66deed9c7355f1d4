#include "hexconf/hexagon.hpp"

#include "hexconf/errors.hpp"
#include "hexconf/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hexconf {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

std::string describe_margin(double margin) {
  std::ostringstream os;
  os.precision(17);
  os << "edge margin " << margin << " is not above " << tol::kAdmissibilityFloor;
  return os.str();
}

}  // namespace

double acosh1p(double x) {
  // sqrt(x) * sqrt(x + 2) stays finite where x * (x + 2) would overflow.
  return std::log1p(x + std::sqrt(x) * std::sqrt(x + 2.0));
}

double edge_margin(double a_i, double a_j, double eta) { return std::cos(a_i + a_j) + eta; }

double edge_length_alpha(double a_i, double a_j, double eta) {
  if (!(a_i > 0.0 && a_i < kHalfPi && a_j > 0.0 && a_j < kHalfPi)) {
    throw NotAdmissible("angle parameter outside (0, pi/2)", -1.0);
  }
  const double margin = edge_margin(a_i, a_j, eta);
  if (!(margin > tol::kAdmissibilityFloor)) throw NotAdmissible(describe_margin(margin), margin);
  // cosh l - 1 = (cos(a_i + a_j) + eta) / (sin a_i sin a_j)
  return acosh1p(margin / (std::sin(a_i) * std::sin(a_j)));
}

double edge_length_u(double u_i, double u_j, double eta) {
  const double sum = u_i + u_j;
  if (sum > 40.0 && std::min(u_i, u_j) > -300.0) {
    // cosh l ~ e^{u_i+u_j} (1 + eta sqrt((1+e^{-2u_i})(1+e^{-2u_j}))) with l = log(2 cosh l)
    // up to O(e^{-2l}), far below double resolution here.
    const double scale = 1.0 + eta * std::sqrt((1.0 + std::exp(-2.0 * u_i)) *
                                               (1.0 + std::exp(-2.0 * u_j)));
    if (!(scale > 0.0)) throw NotAdmissible("cosh argument is not above 1", scale);
    return sum + std::log(scale) + std::log(2.0);
  }
  // cosh l - 1 = expm1(u_i + u_j) + eta sqrt((1 + e^{2u_i})(1 + e^{2u_j}))
  const double x =
      std::expm1(sum) + eta * std::hypot(1.0, std::exp(u_i)) * std::hypot(1.0, std::exp(u_j));
  if (!std::isfinite(x)) throw DomainError("edge length overflow in the u chart");
  if (!(x > 0.0)) throw NotAdmissible("cosh argument is not above 1", x);
  return acosh1p(x);
}

double alpha_from_u(double u) { return std::atan(std::exp(-u)); }

double u_from_alpha(double alpha) { return -std::log(std::tan(alpha)); }

double HexagonMetric::area_factor(int t) const {
  return sinh_l[(t + 1) % 3] * sinh_l[(t + 2) % 3] * sinh_theta[t];
}

double HexagonMetric::cosine_law_residual() const {
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const int a = (t + 1) % 3, b = (t + 2) % 3;
    const double rhs = (cosh_l[a] * cosh_l[b] + cosh_l[t]) / (sinh_l[a] * sinh_l[b]);
    worst = std::max(worst, std::abs(cosh_theta[t] - rhs) / rhs);
  }
  return worst;
}

HexagonMetric hexagon_angles(const std::array<double, 3>& l) {
  HexagonMetric m;
  for (int t = 0; t < 3; ++t) {
    if (!(l[t] > 0.0) || !std::isfinite(l[t])) {
      std::ostringstream os;
      os << "hexagon side length " << l[t] << " is not positive and finite";
      throw DomainError(os.str());
    }
    m.l[t] = l[t];
    m.cosh_l[t] = std::cosh(l[t]);
    m.sinh_l[t] = std::sinh(l[t]);
  }
  for (int t = 0; t < 3; ++t) {
    const int a = (t + 1) % 3, b = (t + 2) % 3;
    // cosh theta - 1 = (cosh(l_a - l_b) + cosh l_t) / (sinh l_a sinh l_b) >= 2 / (...) > 0
    const double x = (std::cosh(l[a] - l[b]) + m.cosh_l[t]) / (m.sinh_l[a] * m.sinh_l[b]);
    if (!(x > 0.0)) throw DomainError("hexagon cosine law produced an argument below 1");
    m.theta[t] = acosh1p(x);
    m.cosh_theta[t] = 1.0 + x;
    m.sinh_theta[t] = std::sqrt(x) * std::sqrt(x + 2.0);
  }
  m.A = m.area_factor(0);
  return m;
}

HexagonMetric face_metric(const CornerAlpha& alpha, const FaceEta& eta) {
  std::array<double, 3> l{};
  for (int t = 0; t < 3; ++t) {
    l[t] = edge_length_alpha(alpha[(t + 1) % 3], alpha[(t + 2) % 3], eta[t]);
  }
  return hexagon_angles(l);
}

Mat3 angle_length_jacobian(const HexagonMetric& m) {
  Mat3 D;
  for (int t = 0; t < 3; ++t) {
    for (int e = 0; e < 3; ++e) {
      if (e == t) {
        D(t, e) = m.sinh_l[t] / m.A;
      } else {
        // adjacent edge e joins t and the third corner b
        const int b = 3 - t - e;
        D(t, e) = -m.sinh_l[t] * m.cosh_theta[b] / m.A;
      }
    }
  }
  return D;
}

Mat3 length_alpha_jacobian(const CornerAlpha& alpha, const FaceEta& eta, const HexagonMetric& m) {
  Mat3 L = Mat3::Zero();
  for (int e = 0; e < 3; ++e) {
    for (int c = 0; c < 3; ++c) {
      if (c == e) continue;  // edge e does not touch corner e
      const int other = 3 - e - c;
      const double sc = std::sin(alpha[c]);
      L(e, c) = -(std::cos(alpha[other]) + eta[e] * std::cos(alpha[c])) /
                (m.sinh_l[e] * std::sin(alpha[other]) * sc * sc);
    }
  }
  return L;
}

Mat3 face_jacobian_chain(const CornerAlpha& alpha, const FaceEta& eta, const HexagonMetric& m) {
  return angle_length_jacobian(m) * length_alpha_jacobian(alpha, eta, m);
}

Mat3 face_jacobian_closed(const CornerAlpha& alpha, const FaceEta& eta, const HexagonMetric& m) {
  std::array<double, 3> s{}, c{};
  for (int t = 0; t < 3; ++t) {
    s[t] = std::sin(alpha[t]);
    c[t] = std::cos(alpha[t]);
  }

  Mat3 J;
  for (int p = 0; p < 3; ++p) {
    for (int q = p + 1; q < 3; ++q) {
      const int r = 3 - p - q;  // edge pq is opposite r
      const double num =
          (1.0 - eta[r] * eta[r]) * c[r] + eta.gamma(p) * c[q] + eta.gamma(q) * c[p];
      const double den = m.A * m.sinh_l[r] * m.sinh_l[r] * s[p] * s[p] * s[q] * s[q] * s[r];
      J(p, q) = J(q, p) = num / den;
    }
  }
  for (int t = 0; t < 3; ++t) {
    const int a = (t + 1) % 3, b = (t + 2) % 3;
    // Edge a joins t and b, edge b joins t and a.
    const double via_a = m.cosh_theta[b] * (c[b] + eta[a] * c[t]) / (m.sinh_l[a] * s[b]);
    const double via_b = m.cosh_theta[a] * (c[a] + eta[b] * c[t]) / (m.sinh_l[b] * s[a]);
    J(t, t) = m.sinh_l[t] / m.A * (via_a + via_b) / (s[t] * s[t]);
  }
  return J;
}

Mat3 face_jacobian_fd(const CornerAlpha& alpha, const FaceEta& eta, double h) {
  Mat3 J;
  for (int c = 0; c < 3; ++c) {
    CornerAlpha plus = alpha, minus = alpha;
    plus[c] += h;
    minus[c] -= h;
    const HexagonMetric mp = face_metric(plus, eta);
    const HexagonMetric mm = face_metric(minus, eta);
    for (int t = 0; t < 3; ++t) J(t, c) = (mp.theta[t] - mm.theta[t]) / (2.0 * h);
  }
  return J;
}

Mat3 length_jacobian_fd(const CornerAlpha& alpha, const FaceEta& eta, double h) {
  auto lengths = [&](const CornerAlpha& a) {
    std::array<double, 3> l{};
    for (int e = 0; e < 3; ++e) l[e] = edge_length_alpha(a[(e + 1) % 3], a[(e + 2) % 3], eta[e]);
    return l;
  };
  Mat3 L;
  for (int c = 0; c < 3; ++c) {
    CornerAlpha plus = alpha, minus = alpha;
    plus[c] += h;
    minus[c] -= h;
    const auto lp = lengths(plus);
    const auto lm = lengths(minus);
    for (int e = 0; e < 3; ++e) L(e, c) = (lp[e] - lm[e]) / (2.0 * h);
  }
  return L;
}

namespace {

double det_denominator(const CornerAlpha& alpha, const HexagonMetric& m) {
  double den = m.sinh_l[0] * m.sinh_l[1] * m.sinh_l[2];
  for (int t = 0; t < 3; ++t) {
    const double s = std::sin(alpha[t]);
    den *= s * s * s;
  }
  return den;
}

}  // namespace

double det_dl_dalpha(const CornerAlpha& alpha, const FaceEta& eta, const HexagonMetric& m) {
  std::array<double, 3> c{};
  for (int t = 0; t < 3; ++t) c[t] = std::cos(alpha[t]);
  double num = 2.0 * (1.0 + eta[0] * eta[1] * eta[2]) * c[0] * c[1] * c[2];
  for (int t = 0; t < 3; ++t) {
    const int a = (t + 1) % 3, b = (t + 2) % 3;
    num += eta.gamma(t) * c[t] * (c[a] * c[a] + c[b] * c[b]);
  }
  return num / det_denominator(alpha, m);
}

double det_dl_dalpha_lower_bound(const CornerAlpha& alpha, const FaceEta& eta,
                                 const HexagonMetric& m) {
  const double num = 2.0 * std::cos(alpha[0]) * std::cos(alpha[1]) * std::cos(alpha[2]) *
                     (1.0 + eta[0]) * (1.0 + eta[1]) * (1.0 + eta[2]);
  return num / det_denominator(alpha, m);
}

std::array<double, 3> zero_weight_identity_residual(const Mat3& J, const HexagonMetric& m) {
  std::array<double, 3> out{};
  for (int t = 0; t < 3; ++t) {
    const int a = (t + 1) % 3, b = (t + 2) % 3;
    // the edge between t and a is opposite b
    out[t] = J(t, t) - J(t, a) * m.cosh_l[b] - J(t, b) * m.cosh_l[a];
  }
  return out;
}

}  // namespace hexconf
