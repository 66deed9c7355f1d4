#pragma once

#include "hexconf/hexagon.hpp"
#include "hexconf/quadrature.hpp"
#include "hexconf/triangulation.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <vector>

namespace hexconf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Per-boundary-component factor, stored as alpha in (0, pi/2)^n.
class ConformalFactor {
public:
  /// Throws DomainError if a component is outside the open box.
  static ConformalFactor from_alpha(Vec alpha);
  static ConformalFactor from_u(const Vec& u);

  const Vec& alpha() const noexcept { return alpha_; }
  Vec u() const;
  Eigen::Index size() const noexcept { return alpha_.size(); }

private:
  Vec alpha_;
};

struct AdmissibilityReport {
  bool admissible = false;        // every margin above the floor and alpha in the box
  std::vector<double> margins;    // cos(a_i + a_j) + eta, in edge order
  int nearest_edge_id = -1;       // edge with the smallest margin
  double min_margin = 0.0;
  double distance_estimate = 0.0; // first-order distance to the nearest facet (box included)
};

AdmissibilityReport admissibility(const Surface& s, const Vec& alpha);

/// Throws NotAdmissible with the offending edge if `alpha` is not admissible.
void require_admissible(const Surface& s, const Vec& alpha);

struct CurvatureResult {
  Vec K;                                    // total boundary length per component
  std::vector<double> edge_lengths;         // in edge order
  std::vector<std::array<double, 3>> face_angles;  // theta per face corner position
};

CurvatureResult curvature(const Surface& s, const Vec& alpha);

/// Curvature with lengths evaluated in the u chart. Used to follow the
/// blow-up towards a facet further than the alpha-chart floor allows.
Vec curvature_from_u(const Surface& s, const Vec& u);

enum class JacobianRoute { Closed, ChainRule };

struct GlobalJacobian {
  SparseMat sparse;  // dK/dalpha
  Mat dense;

  /// max |J - J^T| / max(1, |J|_inf).
  double symmetry_residual() const;
  /// Smallest eigenvalue of the symmetric part; dense for n <= 512, power
  /// iteration above.
  double min_eigenvalue() const;
  double max_eigenvalue() const;
};

GlobalJacobian global_jacobian(const Surface& s, const Vec& alpha,
                               JacobianRoute route = JacobianRoute::Closed);

/// Central-difference dK/dalpha. Test oracle.
Mat global_jacobian_fd(const Surface& s, const Vec& alpha, double h);

/// All components equal to half the smallest per-edge bound
/// min(arccos(-min(eta, 1)) / 2, pi/4).
Vec default_base(const Surface& s);

/// E(a) - E(base): integral of K . dalpha along the straight segment.
LineIntegral energy(const Surface& s, const Vec& a, const Vec& base);

/// Same integral along a polyline through `waypoints`.
LineIntegral energy_path(const Surface& s, const std::vector<Vec>& waypoints);

/// E(a) - E(base) - Kbar . (a - base).
double potential(const Surface& s, const Vec& a, const Vec& base, const Vec& Kbar);

/// Integral of (K - Kbar) . dalpha along [from, to]; the change of the potential.
LineIntegral potential_increment(const Surface& s, const Vec& from, const Vec& to,
                                 const Vec& Kbar);

/// 1/2 |K - Kbar|^2. Throws LengthMismatch.
double calabi_energy(const Vec& K, const Vec& Kbar);

}  // namespace hexconf
