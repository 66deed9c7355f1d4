#pragma once

// Numerical thresholds shared by the kernels, the checks and the tests.

namespace hexconf::tol {

// Edge margins cos(a_i + a_j) + eta at or below this are treated as outside
// the admissible polytope; keeps sinh(l) away from zero.
inline constexpr double kAdmissibilityFloor = 1e-12;

inline constexpr double kSymmetry = 1e-10;          // |J - J^T| / max(1, |J|_inf)
inline constexpr double kFdStep = 1e-6;             // central differences
inline constexpr double kFdAgreement = 1e-5;        // |fd - closed|_inf / |closed|_inf
inline constexpr double kDetAgreement = 1e-6;       // closed det vs det of FD Jacobian
inline constexpr double kDetLowerBoundSlack = 1e-9; // relative slack on the (1+eta) bound
inline constexpr double kZeroWeightIdentity = 1e-9; // J_ii - J_ij cosh l_ij - J_ik cosh l_ik
inline constexpr double kCosineLawResidual = 1e-12;
inline constexpr double kSineLaw = 1e-10;
inline constexpr double kChartAgreement = 1e-12;    // alpha form vs u form lengths
inline constexpr double kPathIndependence = 1e-8;
inline constexpr double kGradient = 1e-6;

// Adaptive Gauss-Legendre line integrals.
inline constexpr int kQuadratureStartNodes = 16;
inline constexpr int kQuadratureMaxNodes = 1024;
inline constexpr double kQuadratureRelative = 1e-10;

// Flow step-size control.
inline constexpr double kStepUnderflow = 1e-14;

}  // namespace hexconf::tol
