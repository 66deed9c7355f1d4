#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>

namespace hexconf::cli {

inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kInputError = 2;
inline constexpr int kNotAdmissible = 3;
inline constexpr int kNotConverged = 4;
inline constexpr int kNotPD = 5;
inline constexpr int kNotAttained = 6;

std::string version();

struct ValidateOptions {
  std::string surface;
  bool allow_repeated = false;
};

struct CurvatureOptions {
  std::string surface;
  std::string factors;
  std::string out;  // empty: stdout
  bool allow_repeated = false;
  bool jacobian = true;
};

struct FlowOptions {
  std::string surface;
  std::string factors;
  std::string target;
  std::string method = "ricci";
  double s = 0.5;
  double dt = 0.1;
  double tol = 1e-10;
  long max_steps = 100000;
  double shrink = 0.5;
  double margin = 1e-9;
  std::string trace;  // empty: stdout
  std::string out;    // final factor, optional
  bool allow_repeated = false;
};

struct SolveOptions {
  std::string surface;
  std::string factors;
  std::string target;
  double tol = 1e-10;
  int max_iters = 100;
  double armijo = 1e-4;
  double backtrack = 0.5;
  double margin = 1e-9;
  int starts = 0;  // extra seeded random starts
  unsigned long long seed = 0;
  std::string out;  // empty: stdout
  std::string log;
  bool allow_repeated = false;
};

struct JacobianCheckOptions {
  std::string surface;
  int samples = 100;
  unsigned long long seed = 0;
  double margin = 1e-3;
  bool allow_repeated = false;
};

struct VolumeOptions {
  std::array<double, 3> eta{};  // e_ij, e_ik, e_jk
  std::optional<std::array<double, 3>> base;
  double grid = 0.0;  // <= 0: pi/60
  std::string out;
  bool dogleg = false;
};

struct SampleOptions {
  std::string surface;
  unsigned long long seed = 0;
  double margin = 1e-3;
  std::string out;
  bool as_u = false;
  bool allow_repeated = false;
};

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err);
int cmd_curvature(const CurvatureOptions& o, std::ostream& out, std::ostream& err);
int cmd_flow(const FlowOptions& o, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err);
int cmd_jacobian_check(const JacobianCheckOptions& o, std::ostream& out, std::ostream& err);
int cmd_volume(const VolumeOptions& o, std::ostream& out, std::ostream& err);
int cmd_sample(const SampleOptions& o, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hexconf::cli
