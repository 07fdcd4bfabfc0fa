#pragma once

// Euler-Lagrange derivation of the evolution equation
//   i hbar dpsi/dt = -(hbar^2/2m) lap(psi) + V psi + N
// from a Lagrangian density.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlse/expr.hpp"

namespace nlse {

class DerivationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EvolutionEquation {
  Expr lagrangian;            // canonical input
  Expr added_term;            // lagrangian minus the linear Schroedinger density
  Expr kinetic_coefficient;   // -hbar^2/(2m)
  bool potential_present = false;
  Expr nonlinearity;          // N
  Expr raw_form;              // full right-hand side
  Field derived_for = Field::Psi;
  int dimension = 3;
  bool residual = false;      // Hessian terms left over in dimension > 1
  Warnings warnings;

  bool is_linear() const { return nonlinearity.is_zero(); }
};

/// The linear Schroedinger density
/// i hbar psi* dpsi/dt - (hbar^2/2m) grad psi* . grad psi - V psi* psi.
Expr linear_lagrangian();

/// Varies L with respect to `vary` and returns the right-hand side R of the
/// conjugate field's equation: -i hbar dpsi*/dt = R for vary = Psi,
/// i hbar dpsi/dt = R for vary = PsiStar.
Expr euler_lagrange(const Expr& lagrangian, Field vary, int dimension = 3,
                    Warnings* warnings = nullptr);

/// Varies psi, conjugates, and splits off the kinetic and potential parts.
EvolutionEquation derive_equation(const Expr& lagrangian, int dimension = 3);

struct TermDiscrepancy {
  Expr shape;
  ComplexRational derived;
  ComplexRational reference;
  std::optional<std::string> erratum;  // id of the registry entry explaining it
};

struct VerificationReport {
  std::vector<Expr> matched;
  std::vector<Expr> missing;  // in the reference only
  std::vector<Expr> extra;    // in the derivation only
  std::vector<TermDiscrepancy> discrepancies;

  bool exact() const { return missing.empty() && extra.empty() && discrepancies.empty(); }
  /// Exact once every discrepancy explained by a registered erratum is accepted.
  bool matches_with_errata() const;
  std::string summary() const;
};

struct Erratum {
  std::string id;
  std::string equation;     // label such as "Eq46"
  std::string description;
  std::string shape;        // DSL text of the affected term shape; empty if not term-level
  ComplexRational ratio;    // reference coefficient / derived coefficient
};

const std::vector<Erratum>& errata_registry();

/// Compares the derived right-hand side against a hand-entered one term by term.
VerificationReport verify_against_reference(const EvolutionEquation& eq, const Expr& reference,
                                            const std::string& equation_label = "");

/// Human-readable rendering with Unicode symbols, e.g. "-2e*|ψ|²ψ".
std::string unicode_print(const Expr& e);
/// "iħ ∂ψ/∂t = ..." over several aligned lines.
std::string unicode_equation(const EvolutionEquation& eq);

}  // namespace nlse
