#pragma once

// Time integration on periodic grids: Strang split-step Fourier for local
// nonlinearities, classical RK4 with spectral derivatives otherwise.

#include <stdexcept>
#include <string>
#include <vector>

#include "nlse/compile.hpp"
#include "nlse/observables.hpp"

namespace nlse {

enum class Method { Auto, Strang, RK4 };
enum class Units { Natural, SI };

std::string to_string(Method m);
std::string to_string(Units u);

struct RunConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  Method method = Method::Auto;
  int snapshot_stride = 1000;
  int observable_stride = 100;
  Units units = Units::Natural;
  double epsilon = 1e-30;

  /// Throws std::invalid_argument.
  void validate() const;
};

class SolverAbort : public std::runtime_error {
public:
  SolverAbort(const std::string& what, std::size_t step) : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

private:
  std::size_t step_;
};

class RunSink {
public:
  virtual ~RunSink() = default;
  virtual void on_observables(const ObservableRecord& /*record*/) {}
  virtual void on_snapshot(std::size_t /*index*/, const FieldGrid& /*field*/, double /*t*/) {}
};

/// Advances a field with a fixed compiled right-hand side and potential.
class Stepper {
public:
  Stepper(const CompiledRHS& rhs, ComplexField potential, const FieldGrid& shape, Method requested,
          Warnings* warnings = nullptr);

  Method method() const { return method_; }
  void step(FieldGrid& field, double dt, std::size_t step_index = 0);
  void step_strang(FieldGrid& field, double dt);
  void step_rk4(FieldGrid& field, double dt, std::size_t step_index = 0);

  const Spectral& spectral() const { return spectral_; }
  const ComplexField& potential() const { return potential_; }
  std::size_t regularization_hits() const { return stats_.regularization_hits; }

private:
  void local_phase(FieldGrid& field, double dt);
  ComplexField time_derivative(const FieldGrid& field, std::size_t step_index);

  const CompiledRHS& rhs_;
  ComplexField potential_;
  Spectral spectral_;
  Method method_ = Method::RK4;
  std::shared_ptr<CompiledExpr> local_potential_;
  double hbar_ = 1;
  cdouble kinetic_ = -0.5;
  EvalStats stats_;
};

struct RunSummary {
  FieldGrid final_field;
  double final_time = 0;
  std::size_t steps = 0;
  double wall_seconds = 0;
  Method method = Method::RK4;
  double max_norm_drift = 0;      // relative to the initial norm
  double max_energy_drift = 0;    // relative to |initial energy|
  double max_momentum_drift = 0;  // absolute, largest axis
  std::size_t branch_cut_crossings = 0;
  std::size_t regularization_hits = 0;
  ObservableRecord initial;
  ObservableRecord final;
  Warnings warnings;
};

RunSummary run(const FieldGrid& initial, const CompiledRHS& rhs, const ComplexField& potential,
               const RunConfig& config, const std::vector<RunSink*>& sinks = {});

}  // namespace nlse
