#include "hexconf/sampling.hpp"

#include "hexconf/errors.hpp"

#include <numbers>

namespace hexconf {

namespace {

[[noreturn]] void give_up(long tries) {
  throw Error("no admissible point found after " + std::to_string(tries) +
              " samples; pass an explicit factor file instead");
}

std::uniform_real_distribution<double> box(double margin) {
  if (!(margin >= 0.0 && margin < std::numbers::pi / 4.0)) {
    throw DomainError("sampling margin must lie in [0, pi/4)");
  }
  return std::uniform_real_distribution<double>(margin, std::numbers::pi / 2.0 - margin);
}

}  // namespace

Vec sample_admissible(const Surface& s, Rng& rng, double margin, long max_tries) {
  auto dist = box(margin);
  Vec a(s.n_boundary());
  for (long tries = 0; tries < max_tries; ++tries) {
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = dist(rng);
    const AdmissibilityReport r = admissibility(s, a);
    if (r.admissible && r.min_margin > margin) return a;
  }
  give_up(max_tries);
}

CornerAlpha sample_face_alpha(const FaceEta& eta, Rng& rng, double margin, long max_tries) {
  auto dist = box(margin);
  CornerAlpha a;
  for (long tries = 0; tries < max_tries; ++tries) {
    for (int t = 0; t < 3; ++t) a[t] = dist(rng);
    bool ok = true;
    for (int t = 0; t < 3 && ok; ++t) {
      ok = edge_margin(a[(t + 1) % 3], a[(t + 2) % 3], eta[t]) > margin;
    }
    if (ok) return a;
  }
  give_up(max_tries);
}

}  // namespace hexconf
