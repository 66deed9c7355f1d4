#include "hexconf/triangulation.hpp"

#include "hexconf/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hexconf {

using json = nlohmann::json;

namespace {

std::string fmt_ids(const char* what, int id) {
  std::ostringstream os;
  os << what << " " << id;
  return os.str();
}

void check_boundary(BoundaryId b, int n, const std::string& where) {
  if (b < 0 || b >= n) {
    throw ValidationError(where + " references boundary component " + std::to_string(b) +
                          " outside [0, " + std::to_string(n) + ")");
  }
}

}  // namespace

Surface Surface::create(int n_boundary, std::vector<Edge> edges, std::vector<Face> faces,
                        bool strict) {
  if (n_boundary < 1) {
    throw ValidationError("n_boundary must be at least 1, got " + std::to_string(n_boundary));
  }

  Surface s;
  s.n_boundary_ = n_boundary;
  s.strict_ = strict;

  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& edge = edges[e];
    const std::string where = fmt_ids("edge", edge.id);
    if (!s.edge_lookup_.emplace(edge.id, static_cast<int>(e)).second) {
      throw ValidationError("duplicate " + where);
    }
    check_boundary(edge.ends[0], n_boundary, where);
    check_boundary(edge.ends[1], n_boundary, where);
    if (!std::isfinite(edge.eta)) {
      throw ValidationError(where + " has a non-finite weight");
    }
    if (edge.eta <= -1.0) {
      std::ostringstream os;
      os.precision(17);
      os << where << " has weight " << edge.eta << " <= -1";
      throw EtaOutOfRange(os.str(), edge.id, edge.eta);
    }
  }

  std::vector<int> use_count(edges.size(), 0);
  std::unordered_map<int, int> face_ids;
  s.face_edge_index_.reserve(faces.size());
  for (const Face& f : faces) {
    const std::string where = fmt_ids("face", f.id);
    if (!face_ids.emplace(f.id, 0).second) {
      throw ValidationError("duplicate " + where);
    }
    for (BoundaryId c : f.corners) check_boundary(c, n_boundary, where);
    if (strict && (f.corners[0] == f.corners[1] || f.corners[0] == f.corners[2] ||
                   f.corners[1] == f.corners[2])) {
      throw ValidationError(where + " has repeated corners (strict mode)");
    }
    if (f.edges[0] == f.edges[1] || f.edges[0] == f.edges[2] || f.edges[1] == f.edges[2]) {
      throw ValidationError(where + " references the same edge twice");
    }
    std::array<int, 3> idx{};
    for (int t = 0; t < 3; ++t) {
      auto it = s.edge_lookup_.find(f.edges[t]);
      if (it == s.edge_lookup_.end()) {
        throw ValidationError(where + " references missing edge " + std::to_string(f.edges[t]));
      }
      idx[t] = it->second;
      const Edge& edge = edges[it->second];
      std::array<BoundaryId, 2> want{f.corners[(t + 1) % 3], f.corners[(t + 2) % 3]};
      std::array<BoundaryId, 2> have = edge.ends;
      std::sort(want.begin(), want.end());
      std::sort(have.begin(), have.end());
      if (want != have) {
        throw ValidationError(where + ": edge " + std::to_string(edge.id) + " at position " +
                              std::to_string(t) + " does not join the opposite corners");
      }
      ++use_count[it->second];
    }
    s.face_edge_index_.push_back(idx);
  }

  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (use_count[e] == 0) {
      s.warnings_.push_back(fmt_ids("edge", edges[e].id) + " is not used by any face");
    } else if (use_count[e] > 2) {
      s.warnings_.push_back(fmt_ids("edge", edges[e].id) + " is used by " +
                            std::to_string(use_count[e]) + " faces");
    }
  }

  s.edges_ = std::move(edges);
  s.faces_ = std::move(faces);
  return s;
}

int Surface::edge_index(int id) const {
  auto it = edge_lookup_.find(id);
  if (it == edge_lookup_.end()) throw ValidationError(fmt_ids("unknown edge", id));
  return it->second;
}

std::array<double, 3> Surface::face_eta(std::size_t face) const {
  const auto& idx = face_edge_index_[face];
  return {edges_[idx[0]].eta, edges_[idx[1]].eta, edges_[idx[2]].eta};
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <typename T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(where + ": missing key \"" + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": bad value for \"" + key + "\": " + e.what());
  }
}

int get_int(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number_integer()) {
    throw ParseError(where + ": \"" + key + "\" must be an integer");
  }
  return j.at(key).get<int>();
}

}  // namespace

Surface parse_surface(const std::string& json_text, bool strict) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("surface file is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("surface file must hold a JSON object");

  const int n = get_int(root, "n_boundary", "surface");
  if (!root.contains("edges") || !root["edges"].is_array()) {
    throw ParseError("surface: \"edges\" must be an array");
  }
  if (!root.contains("faces") || !root["faces"].is_array()) {
    throw ParseError("surface: \"faces\" must be an array");
  }

  std::vector<Edge> edges;
  for (const json& je : root["edges"]) {
    Edge e;
    e.id = get_int(je, "id", "edge");
    const std::string where = fmt_ids("edge", e.id);
    e.ends = get_field<std::array<int, 2>>(je, "ends", where);
    if (!je["eta"].is_number()) throw ParseError(where + ": \"eta\" must be a number");
    e.eta = je["eta"].get<double>();
    edges.push_back(e);
  }

  std::vector<Face> faces;
  for (const json& jf : root["faces"]) {
    Face f;
    f.id = get_int(jf, "id", "face");
    const std::string where = fmt_ids("face", f.id);
    f.corners = get_field<std::array<int, 3>>(jf, "corners", where);
    f.edges = get_field<std::array<int, 3>>(jf, "edges", where);
    faces.push_back(f);
  }

  return Surface::create(n, std::move(edges), std::move(faces), strict);
}

Surface load_surface(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open surface file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_surface(buf.str(), strict);
}

std::string surface_to_json(const Surface& s) {
  json root;
  root["n_boundary"] = s.n_boundary();
  json edges = json::array();
  for (const Edge& e : s.edges()) {
    edges.push_back({{"id", e.id}, {"ends", e.ends}, {"eta", e.eta}});
  }
  json faces = json::array();
  for (const Face& f : s.faces()) {
    faces.push_back({{"id", f.id}, {"corners", f.corners}, {"edges", f.edges}});
  }
  root["edges"] = std::move(edges);
  root["faces"] = std::move(faces);
  return root.dump(2) + "\n";
}

void save_surface(const Surface& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write surface file " + path.string());
  out << surface_to_json(s);
}

std::vector<StructureViolation> check_structure_condition(const Surface& s) {
  static const char* kLabels[3] = {"gamma_i", "gamma_j", "gamma_k"};
  std::vector<StructureViolation> out;
  for (std::size_t f = 0; f < s.faces().size(); ++f) {
    const auto eta = s.face_eta(f);
    for (int t = 0; t < 3; ++t) {
      const double gamma = eta[t] + eta[(t + 1) % 3] * eta[(t + 2) % 3];
      if (gamma < 0.0) out.push_back({s.faces()[f].id, t, kLabels[t], gamma});
    }
  }
  return out;
}

}  // namespace hexconf
