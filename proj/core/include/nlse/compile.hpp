#pragma once

// Compilation of symbolic right-hand sides into straight-line programs over
// grid buffers, with spectral evaluation of gradients and Laplacians.

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "nlse/expr.hpp"
#include "nlse/grid.hpp"
#include "nlse/variational.hpp"

namespace nlse {

using ConstantBindings = std::map<std::string, cdouble>;

enum class Locality { PointwiseLocal, DerivativeCoupled };

class CompileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised while evaluating on a concrete field.
class EvaluationError : public std::runtime_error {
public:
  EvaluationError(const std::string& what, std::size_t node) : std::runtime_error(what), node_(node) {}
  std::size_t node() const { return node_; }

private:
  std::size_t node_;
};

struct EvalStats {
  std::size_t regularization_hits = 0;  // nodes where the epsilon shift changed a value
};

/// One expression compiled for a given grid dimension.
class CompiledExpr {
public:
  /// epsilon: |psi|^2 -> |psi|^2 + epsilon in inverse powers and log(|psi|^2).
  CompiledExpr(const Expr& e, const ConstantBindings& bindings, int dimension, double epsilon);
  ~CompiledExpr();
  CompiledExpr(CompiledExpr&&) noexcept;
  CompiledExpr& operator=(CompiledExpr&&) noexcept;

  /// potential may be empty when the expression does not use V.
  ComplexField evaluate(const FieldGrid& field, const ComplexField& potential, const Spectral& spectral,
                        EvalStats* stats = nullptr) const;

  bool needs_gradients() const;
  bool needs_laplacians() const;
  bool uses_potential() const;
  const Expr& source() const;
  std::size_t instruction_count() const;

  struct Program;

private:
  std::unique_ptr<Program> program_;
};

class CompiledRHS {
public:
  static CompiledRHS compile(const EvolutionEquation& eq, const ConstantBindings& bindings, int dimension,
                             double epsilon = 1e-30);

  /// -(hbar^2/2m) lap(psi) + V psi + N[psi] on the grid.
  ComplexField evaluate(const FieldGrid& field, const ComplexField& potential, const Spectral& spectral,
                        EvalStats* stats = nullptr) const;
  /// N[psi] alone.
  ComplexField nonlinearity(const FieldGrid& field, const ComplexField& potential, const Spectral& spectral,
                            EvalStats* stats = nullptr) const;

  const EvolutionEquation& source_equation() const { return eq_; }
  bool needs_gradients() const { return full_->needs_gradients(); }
  bool needs_laplacians() const { return full_->needs_laplacians(); }
  const ConstantBindings& bound_constants() const { return bindings_; }
  Locality locality() const { return locality_; }
  int dimension() const { return dimension_; }
  double epsilon() const { return epsilon_; }
  cdouble hbar() const { return bindings_.at("hbar"); }
  cdouble mass() const { return bindings_.at("m"); }
  /// Numeric value of the kinetic coefficient -hbar^2/(2m).
  cdouble kinetic_coefficient() const;

private:
  EvolutionEquation eq_;
  ConstantBindings bindings_;
  Locality locality_ = Locality::PointwiseLocal;
  int dimension_ = 1;
  double epsilon_ = 1e-30;
  std::shared_ptr<CompiledExpr> full_;
  std::shared_ptr<CompiledExpr> nonlinear_;
};

/// True when e depends on psi only through |psi|^2 (ln|psi|^2, powers of psi*psi).
bool depends_only_on_density(const Expr& e);

}  // namespace nlse
