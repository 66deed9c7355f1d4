#include "hexconf/volume.hpp"

#include "hexconf/errors.hpp"
#include "hexconf/tolerances.hpp"

#include <cmath>
#include <numbers>

namespace hexconf {

namespace {

std::vector<double> as_vector(const CornerAlpha& a) { return {a[0], a[1], a[2]}; }

CornerAlpha as_alpha(std::span<const double> x) { return CornerAlpha{{x[0], x[1], x[2]}}; }

}  // namespace

PyramidChart::PyramidChart(const FaceEta& eta, const CornerAlpha& base) : eta_(eta), base_(base) {
  for (int t = 0; t < 3; ++t) {
    if (!(eta[t] > -1.0) || !std::isfinite(eta[t])) {
      throw DomainError("pyramid weights must be finite and > -1");
    }
  }
  face_metric(base_, eta_);  // throws NotAdmissible
}

bool PyramidChart::admissible(const CornerAlpha& a) const {
  for (int t = 0; t < 3; ++t) {
    if (!(a[t] > 0.0 && a[t] < std::numbers::pi / 2.0)) return false;
    if (!(edge_margin(a[(t + 1) % 3], a[(t + 2) % 3], eta_[t]) > tol::kAdmissibilityFloor)) {
      return false;
    }
  }
  return true;
}

LineIntegral relative_volume(const PyramidChart& chart, const CornerAlpha& a) {
  return relative_volume_path(chart, {a});
}

LineIntegral relative_volume_path(const PyramidChart& chart,
                                  const std::vector<CornerAlpha>& waypoints) {
  std::vector<std::vector<double>> pts{as_vector(chart.base())};
  for (const CornerAlpha& w : waypoints) {
    face_metric(w, chart.eta());  // endpoints must be admissible
    pts.push_back(as_vector(w));
  }
  const CovectorField field = [&](std::span<const double> x) {
    const HexagonMetric m = face_metric(as_alpha(x), chart.eta());
    return std::vector<double>{-0.5 * m.theta[0], -0.5 * m.theta[1], -0.5 * m.theta[2]};
  };
  return integrate_one_form_path(field, pts);
}

std::array<double, 3> volume_gradient(const PyramidChart& chart, const CornerAlpha& a) {
  const HexagonMetric m = face_metric(a, chart.eta());
  return {-0.5 * m.theta[0], -0.5 * m.theta[1], -0.5 * m.theta[2]};
}

Mat3 volume_hessian(const PyramidChart& chart, const CornerAlpha& a) {
  const HexagonMetric m = face_metric(a, chart.eta());
  return -0.5 * face_jacobian_closed(a, chart.eta(), m);
}

}  // namespace hexconf
