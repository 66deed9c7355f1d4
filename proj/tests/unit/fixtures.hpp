#pragma once

// Shared fixtures and independent reference computations for the tests.

#include "hexconf/conformal.hpp"
#include "hexconf/sampling.hpp"
#include "hexconf/triangulation.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace fixtures {

using hexconf::Surface;
using hexconf::Vec;

inline std::string data_path(const std::string& name) {
  return std::string(HEXCONF_DATA_DIR) + "/" + name;
}

struct Fixture {
  std::string file;
  bool zero_weights;
};

// Pair of pants and the three-boundary torus, each with three weight profiles.
inline const std::vector<Fixture>& all() {
  static const std::vector<Fixture> list{
      {"pants_zero.json", true},   {"pants_wide.json", false},   {"pants_mixed.json", false},
      {"torus3_zero.json", true},  {"torus3_wide.json", false},  {"torus3_mixed.json", false},
  };
  return list;
}

inline Surface load(const std::string& name) { return hexconf::load_surface(data_path(name)); }

// One hexagon on three boundary components; weights by pair.
inline Surface single_face(double e_ij, double e_ik, double e_jk) {
  std::vector<hexconf::Edge> edges{{0, {1, 2}, e_jk}, {1, {0, 2}, e_ik}, {2, {0, 1}, e_ij}};
  std::vector<hexconf::Face> faces{{0, {0, 1, 2}, {0, 1, 2}}};
  return Surface::create(3, edges, faces);
}

inline Vec constant(int n, double a) { return Vec::Constant(n, a); }

// --- reference formulas, written directly from the definitions --------------

namespace ref {

inline double length(double a_i, double a_j, double eta) {
  return std::acosh((std::cos(a_i) * std::cos(a_j) + eta) / (std::sin(a_i) * std::sin(a_j)));
}

inline double length_u(double u_i, double u_j, double eta) {
  return std::acosh(std::exp(u_i + u_j) +
                    eta * std::sqrt((1 + std::exp(2 * u_i)) * (1 + std::exp(2 * u_j))));
}

// theta at corner t from side lengths indexed by opposite corner. Extended
// precision keeps acosh near 1 accurate when the angles are small.
inline std::array<double, 3> angles(const std::array<double, 3>& l) {
  std::array<double, 3> th{};
  for (int t = 0; t < 3; ++t) {
    const long double a = l[(t + 1) % 3], b = l[(t + 2) % 3], c = l[t];
    th[t] = static_cast<double>(
        std::acosh((std::cosh(a) * std::cosh(b) + std::cosh(c)) / (std::sinh(a) * std::sinh(b))));
  }
  return th;
}

inline Vec curvature(const Surface& s, const Vec& alpha) {
  Vec K = Vec::Zero(s.n_boundary());
  for (const hexconf::Face& f : s.faces()) {
    std::array<double, 3> l{};
    for (int t = 0; t < 3; ++t) {
      const hexconf::Edge& e = s.edges()[s.edge_index(f.edges[t])];
      l[t] = length(alpha[f.corners[(t + 1) % 3]], alpha[f.corners[(t + 2) % 3]], e.eta);
    }
    const auto th = angles(l);
    for (int t = 0; t < 3; ++t) K[f.corners[t]] += th[t];
  }
  return K;
}

// Composite Simpson rule on a fine grid; slow but independent of the library quadrature.
template <typename F>
double simpson(F f, int panels = 2000) {
  const double h = 1.0 / panels;
  double sum = f(0.0) + f(1.0);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return sum * h / 3.0;
}

}  // namespace ref

}  // namespace fixtures
