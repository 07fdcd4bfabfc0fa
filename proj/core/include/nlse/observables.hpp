#pragma once

// Conserved and diagnostic functionals of a field on a periodic grid.

#include <memory>
#include <vector>

#include "nlse/compile.hpp"
#include "nlse/grid.hpp"

namespace nlse {

struct ObservableRecord {
  double t = 0;
  double norm = 0;
  cdouble energy{};
  std::vector<double> momentum;  // per axis
  std::vector<double> width;     // per axis
  double peak = 0;
};

/// sum |psi_j|^2 dx^D.
double norm(const FieldGrid& field);
/// hbar Im sum psi* d_i psi dx^D per axis, spectral derivative.
std::vector<double> momentum(const FieldGrid& field, const Spectral& spectral, double hbar = 1.0);
/// Standard deviation of |psi|^2 along each axis, never below dx/2.
std::vector<double> width(const FieldGrid& field);
double peak(const FieldGrid& field);

/// Energy density: the negated Lagrangian with its time-derivative terms
/// removed, hbar^2/2m |grad psi|^2 + V |psi|^2 - L_added.
Expr hamiltonian_density(const EvolutionEquation& eq);

class EnergyFunctional {
public:
  EnergyFunctional(const EvolutionEquation& eq, const ConstantBindings& bindings, int dimension,
                   double epsilon = 1e-30);
  cdouble operator()(const FieldGrid& field, const ComplexField& potential, const Spectral& spectral) const;
  const Expr& density() const { return density_; }

private:
  Expr density_;
  std::shared_ptr<CompiledExpr> compiled_;
};

ObservableRecord observe(double t, const FieldGrid& field, const ComplexField& potential, const Spectral& spectral,
                         const EnergyFunctional& energy, double hbar = 1.0);

}  // namespace nlse
