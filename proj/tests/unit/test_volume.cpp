#include "fixtures.hpp"

#include "hexconf/errors.hpp"
#include "hexconf/sampling.hpp"
#include "hexconf/volume.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hexconf;
using std::numbers::pi;

namespace {

CornerAlpha uniform(double a) { return CornerAlpha{{a, a, a}}; }

CornerAlpha shifted(CornerAlpha a, int t, double h) {
  a[t] += h;
  return a;
}

const std::vector<FaceEta>& weight_profiles() {
  static const std::vector<FaceEta> list{FaceEta::uniform(0.0), FaceEta::uniform(1.5),
                                         FaceEta::from_pairs(-0.5, 1.0, 1.0),
                                         FaceEta::from_pairs(0.3, 0.9, 2.0)};
  return list;
}

}  // namespace

TEST_CASE("relative volume vanishes at the base point") {
  const PyramidChart chart(FaceEta::uniform(0.0), uniform(pi / 8));
  const LineIntegral v = relative_volume(chart, uniform(pi / 8));
  CHECK(v.value == 0.0);
}

TEST_CASE("shrinking the angles increases the volume") {
  const PyramidChart chart(FaceEta::uniform(0.0), uniform(pi / 6));
  const LineIntegral v = relative_volume(chart, uniform(pi / 8));
  CHECK(v.converged);
  CHECK(v.value > 0.0);

  // independent oracle: Simpson along the same segment
  const double oracle = fixtures::ref::simpson([](double t) {
    const double a = pi / 6 + t * (pi / 8 - pi / 6);
    const double l = fixtures::ref::length(a, a, 0.0);
    const double th = fixtures::ref::angles({l, l, l})[0];
    return -0.5 * 3 * th * (pi / 8 - pi / 6);
  });
  CHECK(v.value == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("volume is path independent") {
  Rng rng(61);
  for (const FaceEta& eta : weight_profiles()) {
    for (int k = 0; k < 10; ++k) {
      const CornerAlpha base = sample_face_alpha(eta, rng, 0.02);
      const CornerAlpha a = sample_face_alpha(eta, rng, 0.02);
      const PyramidChart chart(eta, base);
      CornerAlpha w;
      for (int t = 0; t < 3; ++t) w[t] = 0.5 * std::min(base[t], a[t]);
      const double direct = relative_volume(chart, a).value;
      const double dogleg = relative_volume_path(chart, {w, a}).value;
      CHECK(std::abs(direct - dogleg) < 1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("volume gradient is minus half the boundary angles") {
  Rng rng(67);
  const double h = 1e-5;
  for (const FaceEta& eta : weight_profiles()) {
    for (int k = 0; k < 10; ++k) {
      const CornerAlpha base = sample_face_alpha(eta, rng, 0.05);
      const CornerAlpha a = sample_face_alpha(eta, rng, 0.05);
      const PyramidChart chart(eta, base);
      const auto g = volume_gradient(chart, a);
      const HexagonMetric m = face_metric(a, eta);
      for (int t = 0; t < 3; ++t) {
        CHECK(g[t] == -0.5 * m.theta[t]);
        // the difference of the two volumes is itself a short line integral
        const double fd =
            relative_volume_path(PyramidChart(eta, shifted(a, t, -h)), {shifted(a, t, h)}).value /
            (2 * h);
        CHECK(std::abs(fd - g[t]) < 1e-8 * std::max(1.0, std::abs(g[t])));
      }
    }
  }
}

TEST_CASE("volume Hessian: finite differences, symmetry, negative definite") {
  Rng rng(71);
  const double h = 1e-4;
  for (const FaceEta& eta : weight_profiles()) {
    for (int k = 0; k < 20; ++k) {
      const CornerAlpha base = sample_face_alpha(eta, rng, 0.05);
      const CornerAlpha a = sample_face_alpha(eta, rng, 0.05);
      const PyramidChart chart(eta, base);
      const Mat3 H = volume_hessian(chart, a);
      Mat3 fd;
      for (int c = 0; c < 3; ++c) {
        const auto gp = volume_gradient(chart, shifted(a, c, h));
        const auto gm = volume_gradient(chart, shifted(a, c, -h));
        for (int r = 0; r < 3; ++r) fd(r, c) = (gp[r] - gm[r]) / (2 * h);
      }
      CHECK((fd - H).cwiseAbs().maxCoeff() < 1e-4 * std::max(1.0, H.cwiseAbs().maxCoeff()));
      CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12 * H.cwiseAbs().maxCoeff());
      const Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (H + H.transpose()));
      CHECK(es.eigenvalues().maxCoeff() < 0.0);
    }
  }
}

TEST_CASE("volume is concave along chords") {
  Rng rng(73);
  for (const FaceEta& eta : weight_profiles()) {
    const CornerAlpha base = sample_face_alpha(eta, rng, 0.05);
    const PyramidChart chart(eta, base);
    for (int k = 0; k < 20; ++k) {
      const CornerAlpha a = sample_face_alpha(eta, rng, 0.02);
      const CornerAlpha b = sample_face_alpha(eta, rng, 0.02);
      CornerAlpha mid;
      for (int t = 0; t < 3; ++t) mid[t] = 0.5 * (a[t] + b[t]);
      const double va = relative_volume(chart, a).value;
      const double vb = relative_volume(chart, b).value;
      const double vm = relative_volume(chart, mid).value;
      CHECK(vm >= 0.5 * (va + vb) - 1e-10);
    }
  }
}

TEST_CASE("chart validation") {
  CHECK_THROWS_AS(PyramidChart(FaceEta::uniform(0.0), uniform(pi / 4)), NotAdmissible);
  CHECK_THROWS_AS(PyramidChart(FaceEta::uniform(-1.0), uniform(0.1)), DomainError);
  const PyramidChart chart(FaceEta::uniform(0.0), uniform(pi / 8));
  CHECK(chart.admissible(uniform(pi / 5)));
  CHECK_FALSE(chart.admissible(uniform(pi / 4)));
  CHECK_THROWS_AS(relative_volume(chart, uniform(pi / 3)), NotAdmissible);
}
