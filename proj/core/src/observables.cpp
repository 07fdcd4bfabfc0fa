#include "nlse/observables.hpp"

#include <algorithm>
#include <cmath>

namespace nlse {

double norm(const FieldGrid& field) {
  double s = 0;
  for (const auto& v : field.samples) s += std::norm(v);
  return s * field.cell_volume();
}

std::vector<double> momentum(const FieldGrid& field, const Spectral& spectral, double hbar) {
  std::vector<double> p;
  for (int axis = 0; axis < field.dimension; ++axis) {
    const ComplexField d = spectral.derivative(field.samples, axis);
    double s = 0;
    for (std::size_t j = 0; j < d.size(); ++j) s += (std::conj(field.samples[j]) * d[j]).imag();
    p.push_back(hbar * s * field.cell_volume());
  }
  return p;
}

std::vector<double> width(const FieldGrid& field) {
  std::vector<double> w;
  double total = 0;
  for (const auto& v : field.samples) total += std::norm(v);
  for (int axis = 0; axis < field.dimension; ++axis) {
    const double floor = 0.5 * field.spacing(axis);
    if (total == 0) {
      w.push_back(floor);
      continue;
    }
    double mean = 0;
    for (std::size_t j = 0; j < field.samples.size(); ++j)
      mean += std::norm(field.samples[j]) * field.coordinate_of(j, axis);
    mean /= total;
    double var = 0;
    for (std::size_t j = 0; j < field.samples.size(); ++j) {
      const double x = field.coordinate_of(j, axis) - mean;
      var += std::norm(field.samples[j]) * x * x;
    }
    w.push_back(std::max(floor, std::sqrt(var / total)));
  }
  return w;
}

double peak(const FieldGrid& field) {
  double m = 0;
  for (const auto& v : field.samples) m = std::max(m, std::abs(v));
  return m;
}

Expr hamiltonian_density(const EvolutionEquation& eq) {
  std::vector<Term> kept;
  for (const auto& t : terms_of(eq.lagrangian))
    if (!has_time_derivatives(t.shape)) kept.push_back({-t.coefficient, t.shape});
  return from_terms(kept);
}

EnergyFunctional::EnergyFunctional(const EvolutionEquation& eq, const ConstantBindings& bindings, int dimension,
                                   double epsilon)
    : density_(hamiltonian_density(eq)),
      compiled_(std::make_shared<CompiledExpr>(density_, bindings, dimension, epsilon)) {}

cdouble EnergyFunctional::operator()(const FieldGrid& field, const ComplexField& potential,
                                     const Spectral& spectral) const {
  const ComplexField h = compiled_->evaluate(field, potential, spectral);
  cdouble s{};
  for (const auto& v : h) s += v;
  return s * field.cell_volume();
}

ObservableRecord observe(double t, const FieldGrid& field, const ComplexField& potential, const Spectral& spectral,
                         const EnergyFunctional& energy, double hbar) {
  ObservableRecord r;
  r.t = t;
  r.norm = norm(field);
  r.energy = energy(field, potential, spectral);
  r.momentum = momentum(field, spectral, hbar);
  r.width = width(field);
  r.peak = peak(field);
  return r;
}

}  // namespace nlse
