#pragma once

// Per-face kernel for right-angled hyperbolic hexagons.
//
// Index convention: a face has corners at positions 0, 1, 2 (i, j, k). Every
// per-edge quantity is indexed by the corner it is opposite to, so l[0] is
// l_jk, l[1] is l_ik and l[2] is l_ij. The same holds for weights.

#include <Eigen/Core>

#include <array>

namespace hexconf {

using Mat3 = Eigen::Matrix3d;

/// acosh(1 + x) for x >= 0 without cancellation near x = 0.
double acosh1p(double x);

/// Angle parameters at the three corners, each in (0, pi/2).
struct CornerAlpha {
  std::array<double, 3> v{};

  double operator[](int t) const { return v[t]; }
  double& operator[](int t) { return v[t]; }
};

/// Edge weights of one face, indexed by opposite corner.
struct FaceEta {
  std::array<double, 3> opposite{};

  static FaceEta from_pairs(double e_ij, double e_ik, double e_jk) {
    return FaceEta{{e_jk, e_ik, e_ij}};
  }
  static FaceEta uniform(double e) { return FaceEta{{e, e, e}}; }

  double operator[](int t) const { return opposite[t]; }
  double e_ij() const { return opposite[2]; }
  double e_ik() const { return opposite[1]; }
  double e_jk() const { return opposite[0]; }

  /// gamma at corner t: weight of the opposite edge plus the product of the two
  /// adjacent weights.
  double gamma(int t) const {
    return opposite[t] + opposite[(t + 1) % 3] * opposite[(t + 2) % 3];
  }
  bool structure_condition() const { return gamma(0) >= 0 && gamma(1) >= 0 && gamma(2) >= 0; }
};

/// Lengths, generalized angles and the sine-law constant of one hexagon.
struct HexagonMetric {
  std::array<double, 3> l{};      // non-adjacent sides, opposite corner t
  std::array<double, 3> theta{};  // boundary-arc length at corner t
  std::array<double, 3> cosh_l{}, sinh_l{};
  std::array<double, 3> cosh_theta{}, sinh_theta{};
  double A = 0.0;  // sinh l_ij sinh l_ik sinh theta_i, the same at every corner

  /// sinh l_a sinh l_b sinh theta_t evaluated from corner t.
  double area_factor(int t) const;
  /// max_t |cosh theta_t - cosine-law value|.
  double cosine_law_residual() const;
};

/// cos(a_i + a_j) + eta: positive exactly when the edge has positive length.
double edge_margin(double a_i, double a_j, double eta);

/// Edge length from angle parameters. Throws NotAdmissible (carrying the
/// margin) when the margin is at or below tol::kAdmissibilityFloor.
double edge_length_alpha(double a_i, double a_j, double eta);

/// Edge length from conformal factors u. Throws NotAdmissible when the cosh
/// argument is at or below 1, DomainError on overflow.
double edge_length_u(double u_i, double u_j, double eta);

/// alpha = arctan(exp(-u)) and its inverse.
double alpha_from_u(double u);
double u_from_alpha(double alpha);

/// Generalized angles from the three side lengths via the hexagon cosine law.
/// Throws DomainError if a length is not positive.
HexagonMetric hexagon_angles(const std::array<double, 3>& l_opposite);
inline HexagonMetric hexagon_angles(double l_ij, double l_ik, double l_jk) {
  return hexagon_angles({l_jk, l_ik, l_ij});
}

/// Lengths then angles for a face; throws NotAdmissible like edge_length_alpha.
HexagonMetric face_metric(const CornerAlpha& alpha, const FaceEta& eta);

/// d(theta)/d(l): rows are corners, columns edges (by opposite corner).
Mat3 angle_length_jacobian(const HexagonMetric& m);

/// d(l)/d(alpha): rows edges (by opposite corner), columns corners.
Mat3 length_alpha_jacobian(const CornerAlpha& alpha, const FaceEta& eta, const HexagonMetric& m);

/// d(theta)/d(alpha) with closed-form off-diagonal entries and chain-rule
/// diagonal entries.
Mat3 face_jacobian_closed(const CornerAlpha& alpha, const FaceEta& eta, const HexagonMetric& m);

/// d(theta)/d(alpha) as the full product of the two chain-rule factors.
Mat3 face_jacobian_chain(const CornerAlpha& alpha, const FaceEta& eta, const HexagonMetric& m);

/// Central-difference d(theta)/d(alpha). Test oracle.
Mat3 face_jacobian_fd(const CornerAlpha& alpha, const FaceEta& eta, double h);

/// Central-difference d(l)/d(alpha). Test oracle.
Mat3 length_jacobian_fd(const CornerAlpha& alpha, const FaceEta& eta, double h);

/// Reorders rows indexed by opposite corner (l_jk, l_ik, l_ij) into pair order
/// (l_ij, l_ik, l_jk).
inline Mat3 pair_order(const Mat3& by_opposite) { return by_opposite.colwise().reverse(); }

/// Closed-form determinant of d(l_ij, l_ik, l_jk)/d(a_i, a_j, a_k). Rows are in
/// pair order here, the reverse of length_alpha_jacobian, so the two
/// determinants differ in sign; see pair_order().
double det_dl_dalpha(const CornerAlpha& alpha, const FaceEta& eta, const HexagonMetric& m);

/// 2 cos a_i cos a_j cos a_k (1+e_ij)(1+e_ik)(1+e_jk) over the same denominator
/// as det_dl_dalpha; a lower bound for it under the structure condition.
double det_dl_dalpha_lower_bound(const CornerAlpha& alpha, const FaceEta& eta,
                                 const HexagonMetric& m);

/// Per corner t: J_tt - J_ta cosh(l between t,a) - J_tb cosh(l between t,b).
/// Vanishes when all weights are zero; diagnostic only for other weights.
std::array<double, 3> zero_weight_identity_residual(const Mat3& J, const HexagonMetric& m);

}  // namespace hexconf
