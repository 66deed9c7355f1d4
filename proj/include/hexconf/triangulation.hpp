#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace hexconf {

/// Dense index of a boundary component, in [0, n_boundary).
using BoundaryId = int;

struct Edge {
  int id = 0;
  std::array<BoundaryId, 2> ends{};  // may coincide (self-edge)
  double eta = 0.0;                  // weight, strictly > -1
};

/// A hexagonal face. `edges[t]` is the edge opposite `corners[t]`, i.e. it
/// joins corners (t+1)%3 and (t+2)%3.
struct Face {
  int id = 0;
  std::array<BoundaryId, 3> corners{};
  std::array<int, 3> edges{};  // edge ids
};

/// One negative entry of the structure condition for a face.
struct StructureViolation {
  int face_id;
  int corner;         // position 0..2 of the corner the gamma belongs to
  std::string label;  // "gamma_i", "gamma_j" or "gamma_k"
  double value;
};

/// Immutable, validated ideal triangulation of a surface with boundary.
///
/// Edges are addressed by id, so parallel edges and self-edges are allowed.
/// In strict mode the three corners of every face must be distinct.
class Surface {
public:
  /// Validates and builds a surface. Throws ValidationError (or
  /// EtaOutOfRange) on the first violated invariant.
  static Surface create(int n_boundary, std::vector<Edge> edges, std::vector<Face> faces,
                        bool strict = true);

  int n_boundary() const noexcept { return n_boundary_; }
  bool strict() const noexcept { return strict_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<Face>& faces() const noexcept { return faces_; }

  /// Position of edge `id` in edges().
  int edge_index(int id) const;

  /// Per face, the positions in edges() of its three edges (same order as Face::edges).
  const std::vector<std::array<int, 3>>& face_edge_indices() const noexcept {
    return face_edge_index_;
  }

  /// Non-fatal findings from validation (edges used by no face, etc.).
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Weights of a face as seen from its corners: eta[t] is the weight of the edge
  /// opposite corner t.
  std::array<double, 3> face_eta(std::size_t face) const;

private:
  Surface() = default;

  int n_boundary_ = 0;
  bool strict_ = true;
  std::vector<Edge> edges_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> face_edge_index_;
  std::unordered_map<int, int> edge_lookup_;
  std::vector<std::string> warnings_;
};

Surface parse_surface(const std::string& json_text, bool strict = true);
Surface load_surface(const std::filesystem::path& path, bool strict = true);
std::string surface_to_json(const Surface& s);
void save_surface(const Surface& s, const std::filesystem::path& path);

/// Evaluates gamma_t = eta_t + eta_a * eta_b on every face and returns the
/// strictly negative ones. Empty result means the structure condition holds.
std::vector<StructureViolation> check_structure_condition(const Surface& s);

inline bool structure_condition_holds(const Surface& s) {
  return check_structure_condition(s).empty();
}

}  // namespace hexconf
