#pragma once

#include "hexconf/hexagon.hpp"
#include "hexconf/quadrature.hpp"

#include <vector>

namespace hexconf {

/// Pyramid over one right-angled hexagon with fixed weights. Volumes are
/// relative to the reference angles `base`, where the volume is zero.
class PyramidChart {
public:
  /// Throws NotAdmissible if `base` is not admissible for `eta`, and
  /// DomainError if a weight is <= -1.
  PyramidChart(const FaceEta& eta, const CornerAlpha& base);

  const FaceEta& eta() const noexcept { return eta_; }
  const CornerAlpha& base() const noexcept { return base_; }
  bool admissible(const CornerAlpha& a) const;

private:
  FaceEta eta_;
  CornerAlpha base_;
};

/// V(a) - V(base) = -1/2 * integral of theta . dalpha along the segment.
LineIntegral relative_volume(const PyramidChart& chart, const CornerAlpha& a);

/// Same integral along base -> waypoints... -> last waypoint.
LineIntegral relative_volume_path(const PyramidChart& chart,
                                  const std::vector<CornerAlpha>& waypoints);

/// Gradient of the relative volume, -theta / 2.
std::array<double, 3> volume_gradient(const PyramidChart& chart, const CornerAlpha& a);

/// Hessian of the relative volume, -1/2 dtheta/dalpha.
Mat3 volume_hessian(const PyramidChart& chart, const CornerAlpha& a);

}  // namespace hexconf
