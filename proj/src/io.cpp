#include "hexconf/io.hpp"

#include "hexconf/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace hexconf {

using json = nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

json parse_object(const std::string& text, const char* what) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + " is not valid JSON: " + e.what());
  }
  if (!root.is_object()) throw ParseError(std::string(what) + " must hold a JSON object");
  return root;
}

Vec number_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + " must be an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(where + " must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

FactorFile factor_from(const json& root) {
  const bool has_alpha = root.contains("alpha"), has_u = root.contains("u");
  if (has_alpha == has_u) {
    throw ParseError("factor file needs exactly one of \"alpha\" and \"u\"");
  }
  try {
    if (has_alpha) return {ConformalFactor::from_alpha(number_array(root["alpha"], "alpha")), false};
    return {ConformalFactor::from_u(number_array(root["u"], "u")), true};
  } catch (const DomainError& e) {
    throw ValidationError(std::string("factor file: ") + e.what());
  }
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

}  // namespace

FactorFile parse_factor(const std::string& json_text) {
  return factor_from(parse_object(json_text, "factor file"));
}

FactorFile load_factor(const std::filesystem::path& path) {
  return parse_factor(read_text_file(path));
}

std::string factor_to_json(const Vec& alpha, bool as_u) {
  json root;
  if (as_u) {
    root["u"] = to_std(ConformalFactor::from_alpha(alpha).u());
  } else {
    root["alpha"] = to_std(alpha);
  }
  return root.dump(2) + "\n";
}

void save_factor(const Vec& alpha, const std::filesystem::path& path, bool as_u) {
  write_text_file(path, factor_to_json(alpha, as_u));
}

Vec parse_target(const std::string& json_text, const Surface& s) {
  const json root = parse_object(json_text, "target file");
  Vec K;
  if (root.contains("K")) {
    K = number_array(root["K"], "K");
  } else {
    const FactorFile f = factor_from(root);
    if (f.factor.size() != s.n_boundary()) {
      throw LengthMismatch("target factor has " + std::to_string(f.factor.size()) +
                           " components, surface has " + std::to_string(s.n_boundary()));
    }
    K = curvature(s, f.factor.alpha()).K;
  }
  if (K.size() != s.n_boundary()) {
    throw LengthMismatch("target has " + std::to_string(K.size()) + " components, surface has " +
                         std::to_string(s.n_boundary()));
  }
  return K;
}

Vec load_target(const std::filesystem::path& path, const Surface& s) {
  return parse_target(read_text_file(path), s);
}

namespace {

json margins_json(const Surface& s, const AdmissibilityReport& report) {
  json margins = json::array();
  for (std::size_t e = 0; e < s.edges().size(); ++e) {
    margins.push_back({{"edge", s.edges()[e].id}, {"margin", report.margins[e]}});
  }
  return margins;
}

}  // namespace

std::string curvature_to_json(const Surface& s, const CurvatureResult& c,
                              const AdmissibilityReport& report, const GlobalJacobian* J) {
  json root;
  root["K"] = to_std(c.K);
  root["margins"] = margins_json(s, report);
  if (J) {
    json rows = json::array(), cols = json::array(), vals = json::array();
    for (int r = 0; r < J->sparse.outerSize(); ++r) {
      for (SparseMat::InnerIterator it(J->sparse, r); it; ++it) {
        rows.push_back(it.row());
        cols.push_back(it.col());
        vals.push_back(it.value());
      }
    }
    root["jacobian"] = {{"rows", rows}, {"cols", cols}, {"vals", vals}};
  }
  return root.dump(2) + "\n";
}

std::string margins_to_json(const Surface& s, const AdmissibilityReport& report) {
  json root;
  root["admissible"] = report.admissible;
  root["nearest_edge"] = report.nearest_edge_id;
  root["margins"] = margins_json(s, report);
  return root.dump(2) + "\n";
}

void write_trace_csv(std::ostream& out, const FlowTrace& trace) {
  out << "step,t,dt,resid_inf,calabi_energy,potential,min_margin\n";
  for (const FlowRow& r : trace.rows) {
    out << r.step << ',' << format_double(r.t) << ',' << format_double(r.dt) << ','
        << format_double(r.resid_inf) << ',' << format_double(r.calabi_energy) << ','
        << format_double(r.potential) << ',' << format_double(r.min_margin) << '\n';
  }
  out << "# structure_condition=" << (trace.structure_condition ? "true" : "false") << '\n';
  out << "# status=" << to_string(trace.status) << '\n';
}

void write_newton_log_csv(std::ostream& out, const NewtonResult& result) {
  out << "iter,resid_inf,step,potential_change,min_margin,gradient_fallback\n";
  for (const NewtonIterate& r : result.log) {
    out << r.iter << ',' << format_double(r.resid_inf) << ',' << format_double(r.step) << ','
        << format_double(r.potential_change) << ',' << format_double(r.min_margin) << ','
        << (r.gradient_fallback ? 1 : 0) << '\n';
  }
  out << "# status=" << to_string(result.status) << '\n';
}

}  // namespace hexconf
