#pragma once

#include "hexconf/conformal.hpp"
#include "hexconf/solve.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace hexconf {

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

/// Factor file: {"alpha": [...]} or {"u": [...]}, exactly one key.
struct FactorFile {
  ConformalFactor factor;
  bool given_as_u = false;
};

FactorFile parse_factor(const std::string& json_text);
FactorFile load_factor(const std::filesystem::path& path);
std::string factor_to_json(const Vec& alpha, bool as_u = false);
void save_factor(const Vec& alpha, const std::filesystem::path& path, bool as_u = false);

/// Target curvature: {"K": [...]}, or a factor file whose curvature is the target.
Vec parse_target(const std::string& json_text, const Surface& s);
Vec load_target(const std::filesystem::path& path, const Surface& s);

/// {"K": [...], "margins": [...], "jacobian": {"rows", "cols", "vals"}}.
std::string curvature_to_json(const Surface& s, const CurvatureResult& c,
                              const AdmissibilityReport& report, const GlobalJacobian* J);

/// Margins only; used when the factor is not admissible.
std::string margins_to_json(const Surface& s, const AdmissibilityReport& report);

/// Header `step,t,dt,resid_inf,calabi_energy,potential,min_margin`, one line
/// per row, then `# structure_condition=...` and `# status=...`.
void write_trace_csv(std::ostream& out, const FlowTrace& trace);

void write_newton_log_csv(std::ostream& out, const NewtonResult& result);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace hexconf
