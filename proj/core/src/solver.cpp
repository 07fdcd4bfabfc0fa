#include "nlse/solver.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace nlse {
namespace {

bool finite(const ComplexField& f, std::size_t* bad) {
  for (std::size_t j = 0; j < f.size(); ++j) {
    if (!std::isfinite(f[j].real()) || !std::isfinite(f[j].imag())) {
      *bad = j;
      return false;
    }
  }
  return true;
}

bool has_phase_log(const Expr& e) {
  const Expr ratio = canonicalize(Expr::psi() / Expr::psi_star());
  const Expr inverse = canonicalize(Expr::psi_star() / Expr::psi());
  return contains_if(e, [&](const Expr& x) {
    return x.kind() == NodeKind::Log && (x.arg() == ratio || x.arg() == inverse);
  });
}

bool real_coefficients(const Expr& e, const ConstantBindings& bindings) {
  bool real = true;
  for (const auto& t : terms_of(e))
    if (!t.coefficient.is_real()) real = false;
  for (const auto& name : coupling_names(e)) {
    auto it = bindings.find(name);
    if (it != bindings.end() && it->second.imag() != 0) real = false;
  }
  return real;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Strang: return "strang";
    case Method::RK4: return "rk4";
  }
  return "?";
}

std::string to_string(Units u) { return u == Units::Natural ? "natural" : "si"; }

void RunConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_final > 0) || !std::isfinite(t_final)) throw std::invalid_argument("t_final must be positive");
  if (dt > t_final) throw std::invalid_argument(fmt::format("dt = {} exceeds t_final = {}", dt, t_final));
  if (snapshot_stride < 1) throw std::invalid_argument("snapshot_stride must be at least 1");
  if (observable_stride < 1) throw std::invalid_argument("observable_stride must be at least 1");
  if (!(epsilon >= 0)) throw std::invalid_argument("epsilon must be nonnegative");
}

Stepper::Stepper(const CompiledRHS& rhs, ComplexField potential, const FieldGrid& shape, Method requested,
                 Warnings* warnings)
    : rhs_(rhs), potential_(std::move(potential)), spectral_(shape) {
  if (potential_.empty()) potential_.assign(shape.size(), cdouble{});
  if (potential_.size() != shape.size()) throw std::invalid_argument("potential is not sampled on the grid");
  hbar_ = rhs.hbar().real();
  kinetic_ = rhs.kinetic_coefficient();
  auto warn = [&](const std::string& w) {
    if (warnings != nullptr) warnings->push_back(w);
  };

  method_ = Method::RK4;
  if (requested == Method::RK4) return;
  const EvolutionEquation& eq = rhs.source_equation();
  std::string reason;
  bool potential_real = true;
  for (const auto& v : potential_)
    if (v.imag() != 0) potential_real = false;
  if (rhs.locality() != Locality::PointwiseLocal) {
    reason = "the nonlinearity involves spatial derivatives";
  } else if (!potential_real) {
    reason = "the potential is complex";
  } else {
    const Expr npot = canonicalize(eq.nonlinearity * Expr::pow(Expr::psi(), -1));
    if (!depends_only_on_density(npot)) {
      reason = "the nonlinearity is not a density-dependent potential times psi";
    } else if (!real_coefficients(npot, rhs.bound_constants())) {
      reason = "the local potential is complex-valued, so the split step would not be unitary";
    } else {
      local_potential_ = std::make_shared<CompiledExpr>(npot, rhs.bound_constants(), rhs.dimension(), rhs.epsilon());
      method_ = Method::Strang;
      return;
    }
  }
  if (requested == Method::Strang || reason.find("complex") != std::string::npos ||
      reason.find("density-dependent") != std::string::npos)
    warn("falling back to RK4: " + reason + "; norm is no longer conserved by construction");
}

void Stepper::local_phase(FieldGrid& field, double dt) {
  const ComplexField npot = local_potential_->evaluate(field, potential_, spectral_, &stats_);
  const double scale = dt / hbar_;
  for (std::size_t j = 0; j < field.samples.size(); ++j) {
    const double phase = -(potential_[j].real() + npot[j].real()) * scale;
    field.samples[j] *= cdouble(std::cos(phase), std::sin(phase));
  }
}

void Stepper::step_strang(FieldGrid& field, double dt) {
  if (!local_potential_) throw std::logic_error("split step unavailable for this equation");
  if (dt == 0) return;
  local_phase(field, 0.5 * dt);
  spectral_.apply_k2_exponential(field.samples, cdouble(0, 1) * kinetic_ * dt / hbar_);
  local_phase(field, 0.5 * dt);
}

ComplexField Stepper::time_derivative(const FieldGrid& field, std::size_t step_index) {
  ComplexField r;
  try {
    r = rhs_.evaluate(field, potential_, spectral_, &stats_);
  } catch (const EvaluationError& e) {
    throw SolverAbort(fmt::format("step {}: {}", step_index, e.what()), step_index);
  }
  const cdouble factor = cdouble(0, -1) / hbar_;
  for (auto& v : r) v *= factor;
  return r;
}

void Stepper::step_rk4(FieldGrid& field, double dt, std::size_t step_index) {
  if (dt == 0) return;
  const std::size_t n = field.samples.size();
  FieldGrid stage = field;
  const ComplexField k1 = time_derivative(field, step_index);
  for (std::size_t j = 0; j < n; ++j) stage.samples[j] = field.samples[j] + 0.5 * dt * k1[j];
  const ComplexField k2 = time_derivative(stage, step_index);
  for (std::size_t j = 0; j < n; ++j) stage.samples[j] = field.samples[j] + 0.5 * dt * k2[j];
  const ComplexField k3 = time_derivative(stage, step_index);
  for (std::size_t j = 0; j < n; ++j) stage.samples[j] = field.samples[j] + dt * k3[j];
  const ComplexField k4 = time_derivative(stage, step_index);
  for (std::size_t j = 0; j < n; ++j)
    field.samples[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  std::size_t bad = 0;
  if (!finite(field.samples, &bad))
    throw SolverAbort(fmt::format("step {}: non-finite field at node {}", step_index, bad), step_index);
}

void Stepper::step(FieldGrid& field, double dt, std::size_t step_index) {
  if (method_ == Method::Strang) {
    step_strang(field, dt);
    std::size_t bad = 0;
    if (!finite(field.samples, &bad))
      throw SolverAbort(fmt::format("step {}: non-finite field at node {}", step_index, bad), step_index);
  } else {
    step_rk4(field, dt, step_index);
  }
}

RunSummary run(const FieldGrid& initial, const CompiledRHS& rhs, const ComplexField& potential,
               const RunConfig& config, const std::vector<RunSink*>& sinks) {
  config.validate();
  initial.validate();
  if (initial.dimension != rhs.dimension())
    throw std::invalid_argument("initial field dimension does not match the compiled equation");
  const auto start = std::chrono::steady_clock::now();

  RunSummary summary;
  Stepper stepper(rhs, potential, initial, config.method, &summary.warnings);
  summary.method = stepper.method();
  const EnergyFunctional energy(rhs.source_equation(), rhs.bound_constants(), rhs.dimension(), rhs.epsilon());
  const double hbar = rhs.hbar().real();
  const bool track_branch = has_phase_log(rhs.source_equation().nonlinearity);

  FieldGrid field = initial;
  auto observe_at = [&](double t, std::size_t step) {
    try {
      return observe(t, field, stepper.potential(), stepper.spectral(), energy, hbar);
    } catch (const EvaluationError& e) {
      throw SolverAbort(fmt::format("step {}: energy: {}", step, e.what()), step);
    }
  };
  summary.initial = observe_at(0.0, 0);
  const double n0 = summary.initial.norm;
  const cdouble e0 = summary.initial.energy;
  bool complex_energy_warned = false;
  auto record = [&](const ObservableRecord& r) {
    if (n0 > 0) summary.max_norm_drift = std::max(summary.max_norm_drift, std::abs(r.norm / n0 - 1.0));
    const double escale = std::abs(e0) > 0 ? std::abs(e0) : 1.0;
    summary.max_energy_drift = std::max(summary.max_energy_drift, std::abs(r.energy - e0) / escale);
    for (std::size_t a = 0; a < r.momentum.size(); ++a)
      summary.max_momentum_drift =
          std::max(summary.max_momentum_drift, std::abs(r.momentum[a] - summary.initial.momentum[a]));
    if (!complex_energy_warned && std::abs(r.energy.imag()) > 1e-12 * std::max(1.0, std::abs(r.energy))) {
      summary.warnings.push_back("energy is complex-valued (complex couplings); imaginary part reported");
      complex_energy_warned = true;
    }
    for (RunSink* s : sinks) s->on_observables(r);
  };
  record(summary.initial);
  std::size_t snapshot_index = 0;
  for (RunSink* s : sinks) s->on_snapshot(snapshot_index, field, 0.0);
  ++snapshot_index;

  const auto nsteps = static_cast<std::size_t>(std::ceil(config.t_final / config.dt - 1e-9));
  std::vector<double> previous_arg;
  if (track_branch)
    for (const auto& v : field.samples) previous_arg.push_back(std::arg(v));
  double t = 0;
  for (std::size_t s = 1; s <= nsteps; ++s) {
    const double target = s == nsteps ? config.t_final : static_cast<double>(s) * config.dt;
    stepper.step(field, target - t, s);
    t = target;
    const double nrm = norm(field);
    if (n0 > 0 && nrm > 10.0 * n0)
      throw SolverAbort(fmt::format("instability at step {} (t = {}): norm grew from {} to {}", s, t, n0, nrm), s);
    if (track_branch) {
      for (std::size_t j = 0; j < field.samples.size(); ++j) {
        const double a = std::arg(field.samples[j]);
        if (std::abs(a - previous_arg[j]) > std::numbers::pi) ++summary.branch_cut_crossings;
        previous_arg[j] = a;
      }
    }
    const bool last = s == nsteps;
    if (last || s % static_cast<std::size_t>(config.observable_stride) == 0)
      record(observe_at(t, s));
    if (last || s % static_cast<std::size_t>(config.snapshot_stride) == 0) {
      for (RunSink* sink : sinks) sink->on_snapshot(snapshot_index, field, t);
      ++snapshot_index;
    }
    summary.steps = s;
  }
  summary.final_field = field;
  summary.final_time = t;
  summary.final = observe_at(t, nsteps);
  summary.regularization_hits = stepper.regularization_hits();
  summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

}  // namespace nlse
