#pragma once

#include "hexconf/conformal.hpp"

#include <random>

namespace hexconf {

using Rng = std::mt19937_64;

/// Rejection sampling: uniform in (margin, pi/2 - margin)^n, kept when every
/// edge margin exceeds `margin`. Throws Error after `max_tries` rejections.
Vec sample_admissible(const Surface& s, Rng& rng, double margin = 1e-3, long max_tries = 100000);

/// Same for the three corners of a single face.
CornerAlpha sample_face_alpha(const FaceEta& eta, Rng& rng, double margin = 1e-3,
                              long max_tries = 100000);

}  // namespace hexconf
