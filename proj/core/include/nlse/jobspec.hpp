#pragma once

// Job specifications for `nlse evolve`: an INI-style file with [lagrangian],
// [constants], [dimensionless], [potential], [initial], [grid], [run],
// [output] and [check] sections.

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "nlse/compile.hpp"
#include "nlse/solver.hpp"

namespace nlse {

/// Invalid or inconsistent job specification (exit code 2 territory).
class JobSpecError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses "re+imi" forms such as "0.5+0i", "-1e-3-2i", "3", "2i".
cdouble parse_complex(const std::string& text);
std::string format_complex(cdouble v);

struct PotentialSpec {
  enum class Kind { Zero, Harmonic, File } kind = Kind::Zero;
  double omega = 1.0;
  std::filesystem::path path;
};

struct InitialSpec {
  enum class Kind { Gaussian, Sech, Gausson, File } kind = Kind::Gaussian;
  double sigma = 1.0;      // Gaussian: standard deviation of |psi|^2
  double k = 0.0;          // Gaussian: carrier wavenumber along x
  double center = 0.0;     // along x
  double center_y = 0.0;
  double amplitude = 1.0;  // Sech, Gausson
  double velocity = 0.0;   // Sech
  double b = 1.0;          // Gausson: logarithmic coupling
  std::filesystem::path path;
};

struct JobSpec {
  std::filesystem::path source;
  std::filesystem::path lagrangian_path;
  ConstantBindings constant_bindings;
  std::map<std::string, double> dimensionless;  // coupling -> g, expanded in hbar, m, c
  PotentialSpec potential;
  InitialSpec initial;
  int dimension = 1;
  int points = 256;
  double box = 40.0;
  RunConfig run;
  std::filesystem::path output_dir = "out";
  std::optional<double> check_tolerance;
};

/// Reads and validates a job file; relative paths resolve against its directory.
JobSpec load_jobspec(const std::filesystem::path& path);

/// hbar and m for the unit system plus explicit and dimensionless couplings.
ConstantBindings resolve_bindings(const JobSpec& job, const EvolutionEquation& eq);

FieldGrid initial_field(const JobSpec& job, const ConstantBindings& bindings);
ComplexField potential_field(const JobSpec& job, const FieldGrid& grid, const ConstantBindings& bindings);

/// Fully resolved configuration, one "key = value" per line, deterministic.
std::string manifest_text(const JobSpec& job, const EvolutionEquation& eq, const ConstantBindings& bindings,
                          Method resolved);

/// A closed-form comparison applicable to a job.
struct AnalyticCheck {
  std::string name;
  std::string description;
  std::function<double(const FieldGrid& final_field, double t)> error;
};

/// Soliton, Gausson or free-Gaussian width law, when the job matches one.
std::optional<AnalyticCheck> analytic_check(const JobSpec& job, const EvolutionEquation& eq,
                                            const ConstantBindings& bindings, Warnings* warnings = nullptr);

}  // namespace nlse
