#include "nlse/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nlse/dimension.hpp"
#include "nlse/dsl.hpp"
#include "nlse/io.hpp"
#include "nlse/jobspec.hpp"
#include "nlse/reproduction.hpp"

namespace nlse::cli {
namespace fs = std::filesystem;

namespace {

std::optional<Expr> load_lagrangian(const fs::path& file, std::ostream& err) {
  if (!fs::is_regular_file(file)) {
    err << "error: no such file '" << file.string() << "'\n";
    return std::nullopt;
  }
  const ParseResult r = parse_file(file.string());
  if (!r.ok()) {
    err << r.format_diagnostics(file.string());
    return std::nullopt;
  }
  for (const auto& d : r.diagnostics)
    if (d.severity == Severity::Warning)
      err << fmt::format("{}:{}:{}: warning: {}\n", file.string(), d.span.line, d.span.column, d.message);
  return r.expr;
}

void print_warnings(const Warnings& w, std::ostream& err) {
  for (const auto& s : w) err << "warning: " << s << "\n";
}

}  // namespace

fs::path default_corpus() {
  if (const char* env = std::getenv("NLSE_CORPUS"); env != nullptr && *env != '\0') return env;
  return NLSE_DEFAULT_CORPUS;
}

int cmd_derive(const fs::path& file, int dimension, std::ostream& out, std::ostream& err) {
  const auto lagrangian = load_lagrangian(file, err);
  if (!lagrangian) return UsageError;
  EvolutionEquation eq;
  try {
    eq = derive_equation(*lagrangian, dimension);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return UsageError;
  }
  print_warnings(eq.warnings, err);
  out << "lagrangian: " << pretty_print(eq.lagrangian) << "\n";
  out << "equation:   i*hbar*dpsi/dt = " << pretty_print(eq.raw_form) << "\n";
  out << "nonlinearity: " << (eq.is_linear() ? std::string("0") : pretty_print(eq.nonlinearity)) << "\n\n";
  out << unicode_equation(eq) << "\n";
  if (eq.is_linear())
    out << "linear (N = 0)\n";
  else
    out << "N = " << unicode_print(eq.nonlinearity) << "\n";
  if (eq.residual)
    out << fmt::format("note: Hessian terms remain in dimension {}; the Laplacian form is exact only in one dimension\n",
                       eq.dimension);
  return Ok;
}

int cmd_dimension(const fs::path& file, const std::string& coupling, double mass_kg, double length_m,
                  int spatial_dim, std::ostream& out, std::ostream& err) {
  const auto lagrangian = load_lagrangian(file, err);
  if (!lagrangian) return UsageError;
  try {
    const EvolutionEquation eq = derive_equation(*lagrangian, spatial_dim);
    const auto names = coupling_names(eq.added_term);
    if (std::find(names.begin(), names.end(), coupling) == names.end()) {
      err << fmt::format("error: unknown coupling '{}'", coupling);
      if (!names.empty()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        err << " (the added term has " << list << ")";
      }
      err << "\n";
      return UsageError;
    }
    Warnings warnings;
    const DimensionVector d = coupling_dimension(eq.added_term, coupling, spatial_dim, &warnings);
    print_warnings(warnings, err);
    const HbarMcExpansion x = express_in_hbar_m_c(d);
    out << "coupling " << coupling << " in the term " << unicode_print(eq.added_term) << "\n";
    if (!x.dimensionless_residual) {
      out << d.str() << " has no expansion in hbar, m, c\n";
      return Ok;
    }
    out << d.str() << " = " << x.str() << " × dimensionless g\n";
    out << fmt::format("exponents: hbar {}, m {}, c {}\n", x.hbar_exp.str(), x.mass_exp.str(), x.c_exp.str());
    const WeaknessReport w = weakness_report(x, mass_kg, length_m);
    out << fmt::format("mass {:.6e} kg, length {:.6e} m, g = 1\n", mass_kg, length_m);
    out << w.text << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return UsageError;
  }
  return Ok;
}

int cmd_evolve(const fs::path& jobspec, std::ostream& out, std::ostream& err) {
  JobSpec job;
  EvolutionEquation eq;
  ConstantBindings bindings;
  FieldGrid initial;
  ComplexField potential;
  std::optional<CompiledRHS> rhs;
  std::optional<AnalyticCheck> check;
  Warnings setup_warnings;
  try {
    job = load_jobspec(jobspec);
    const auto lagrangian = load_lagrangian(job.lagrangian_path, err);
    if (!lagrangian) return UsageError;
    eq = derive_equation(*lagrangian, job.dimension);
    bindings = resolve_bindings(job, eq);
    initial = initial_field(job, bindings);
    potential = potential_field(job, initial, bindings);
    rhs = CompiledRHS::compile(eq, bindings, job.dimension, job.run.epsilon);
    check = analytic_check(job, eq, bindings, job.check_tolerance ? &setup_warnings : nullptr);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return UsageError;
  }
  print_warnings(eq.warnings, err);
  print_warnings(setup_warnings, err);

  bool complex_couplings = false;
  for (const auto& [k, v] : bindings) complex_couplings = complex_couplings || v.imag() != 0.0;
  const Method resolved = Stepper(*rhs, potential, initial, job.run.method).method();

  RunSummary summary;
  try {
    fs::create_directories(job.output_dir);
    std::ofstream(job.output_dir / "manifest.txt") << manifest_text(job, eq, bindings, resolved);
    DirectorySink sink(job.output_dir, job.dimension, complex_couplings);
    summary = run(initial, *rhs, potential, job.run, {&sink});
  } catch (const SolverAbort& e) {
    err << "error: run aborted: " << e.what() << "\n";
    return RuntimeAbort;
  } catch (const EvaluationError& e) {
    err << "error: run aborted: " << e.what() << "\n";
    return RuntimeAbort;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return RuntimeAbort;
  }
  print_warnings(summary.warnings, err);

  out << fmt::format("method        {}\n", to_string(summary.method));
  out << fmt::format("steps         {}\n", summary.steps);
  out << fmt::format("final time    {:.10g}\n", summary.final_time);
  out << fmt::format("wall time     {:.3f} s\n", summary.wall_seconds);
  out << fmt::format("norm          {:.15g} (max relative drift {:.3e})\n", summary.final.norm,
                     summary.max_norm_drift);
  out << fmt::format("energy        {:.15g}", summary.final.energy.real());
  if (complex_couplings) out << fmt::format(" {:+.6e}i", summary.final.energy.imag());
  out << fmt::format(" (max relative drift {:.3e})\n", summary.max_energy_drift);
  out << fmt::format("momentum      max drift {:.3e}\n", summary.max_momentum_drift);
  out << fmt::format("peak          {:.10g}\n", summary.final.peak);
  if (summary.branch_cut_crossings > 0)
    out << fmt::format("branch-cut crossings {}\n", summary.branch_cut_crossings);
  if (summary.regularization_hits > 0)
    out << fmt::format("regularized evaluations {}\n", summary.regularization_hits);
  out << "output        " << job.output_dir.string() << "\n";

  if (!check) return Ok;
  const double error = check->error(summary.final_field, summary.final_time);
  out << fmt::format("check {}: {} = {:.3e}", check->name, check->description, error);
  if (job.check_tolerance) {
    const bool pass = error <= *job.check_tolerance;
    out << fmt::format(" (tolerance {:.1e}) {}\n", *job.check_tolerance, pass ? "PASS" : "FAIL");
    return pass ? Ok : VerifyFailure;
  }
  out << "\n";
  return Ok;
}

int cmd_verify(const fs::path& corpus, std::ostream& out, std::ostream& err) {
  try {
    const ReproductionTable table = run_reproduction(corpus);
    out << table.format();
    return table.ok() ? Ok : VerifyFailure;
  } catch (const CorpusMissing& e) {
    err << "error: " << e.what() << "\n";
    return UsageError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonlinear Schroedinger equations from Lagrangian densities", "nlse"};
  app.require_subcommand(1);

  std::string derive_file;
  int derive_dim = 3;
  auto* derive = app.add_subcommand("derive", "derive the evolution equation of a .lag file");
  derive->add_option("file", derive_file, "Lagrangian density")->required();
  derive->add_option("--dimension", derive_dim, "spatial dimensions")->check(CLI::Range(1, 3));

  std::string dim_file, coupling;
  double mass = si::electron_mass, length = 1e-9;
  int spatial = 3;
  auto* dimension = app.add_subcommand("dimension", "dimension of a coupling and its hbar-m-c expansion");
  dimension->add_option("file", dim_file, "Lagrangian density")->required();
  dimension->add_option("coupling", coupling, "coupling name")->required();
  dimension->add_option("--mass", mass, "mass in kg (default: electron)")->check(CLI::PositiveNumber);
  dimension->add_option("--length", length, "length scale in m (default: 1 nm)")->check(CLI::PositiveNumber);
  dimension->add_option("--spatial-dim", spatial, "spatial dimensions")->check(CLI::Range(1, 3));

  std::string jobspec;
  auto* evolve = app.add_subcommand("evolve", "integrate a job specification");
  evolve->add_option("jobspec", jobspec, "job file")->required();

  std::string corpus;
  auto* verify = app.add_subcommand("verify", "re-derive the reference corpus and compare");
  verify->add_option("--corpus", corpus, "corpus directory (default: $NLSE_CORPUS or the source corpus)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : UsageError;
  }

  if (*derive) return cmd_derive(derive_file, derive_dim, out, err);
  if (*dimension) return cmd_dimension(dim_file, coupling, mass, length, spatial, out, err);
  if (*evolve) return cmd_evolve(jobspec, out, err);
  return cmd_verify(corpus.empty() ? default_corpus() : fs::path(corpus), out, err);
}

}  // namespace nlse::cli
