#include "nlse/variational.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "nlse/dsl.hpp"

namespace nlse {
namespace {

Expr expected_kinetic() {
  return canonicalize(Expr::number(Rational(-1, 2)) * Expr::pow(Expr::hbar(), 2) * Expr::pow(Expr::mass(), -1));
}

bool has_second_derivatives(const Expr& e) {
  return contains_if(e, [](const Expr& x) {
    if (x.kind() == NodeKind::HessForm) return true;
    if (x.kind() != NodeKind::Symbol) return false;
    const auto k = x.symbol_value().kind;
    return k == SymbolKind::LaplacianPsi || k == SymbolKind::LaplacianPsiStar;
  });
}

bool has_gradient_components(const Expr& e) {
  return contains_if(e, [](const Expr& x) {
    return x.kind() == NodeKind::Symbol && x.symbol_value().is_gradient();
  });
}

std::string field_label(Field f) { return f == Field::Psi ? "psi" : "psi^*"; }

}  // namespace

Expr linear_lagrangian() {
  const Expr psi = Expr::psi();
  const Expr ps = Expr::psi_star();
  return canonicalize(Expr::i() * Expr::hbar() * ps * Expr::symbol(FieldSymbol::psi_dot()) +
                      expected_kinetic() * Expr::dot_grad(Field::PsiStar, Field::Psi) -
                      Expr::potential() * ps * psi);
}

Expr euler_lagrange(const Expr& lagrangian, Field vary, int dimension, Warnings* warnings) {
  const Expr L = canonicalize(lagrangian);
  if (has_second_derivatives(L))
    throw DerivationError("the Lagrangian may depend on the fields and their first derivatives only");
  if (has_gradient_components(L))
    throw DerivationError("explicit gradient components are not rotation invariant; use dot(grad(.),grad(.))");
  if (!has_time_derivatives(L)) throw DerivationError("no canonical time term");

  const FieldSymbol s = FieldSymbol::value(vary);
  const FieldSymbol sdot = FieldSymbol::time_derivative(vary);
  const Expr dL = partial_wrt(L, s, warnings);
  const Expr p = partial_wrt(L, sdot);
  if (has_time_derivatives(p) || has_spatial_derivatives(p))
    throw DerivationError(fmt::format("nonstandard symplectic structure: dL/d(d{}/dt) = {} depends on derivatives",
                                      field_label(vary), pretty_print(p)));
  if (!p.is_zero() &&
      has_field_dependence(canonicalize(p * Expr::pow(Expr::symbol(FieldSymbol::value(conj(vary))), -1))))
    throw DerivationError(fmt::format("nonstandard symplectic structure: dL/d(d{}/dt) = {} is not proportional to {}",
                                      field_label(vary), pretty_print(p), field_label(conj(vary))));
  std::vector<Expr> dtp_parts;
  for (Field q : {Field::Psi, Field::PsiStar}) {
    const Expr dp = partial_wrt(p, FieldSymbol::value(q));
    if (!dp.is_zero()) dtp_parts.push_back(dp * Expr::symbol(FieldSymbol::time_derivative(q)));
  }
  const Expr dtp = Expr::sum(std::move(dtp_parts));

  DivergenceResult div;
  try {
    div = spatial_divergence_of_momenta(L, vary, dimension);
  } catch (const UnsupportedExpression& e) {
    throw DerivationError(e.what());
  }
  if (div.residual && warnings != nullptr)
    warnings->push_back(fmt::format(
        "Hessian terms remain in dimension {}; the gradient-product form is exact only in one dimension", dimension));

  const Expr E = canonicalize(dL - dtp - div.value);
  const Field target = conj(vary);
  const Expr T = Expr::symbol(FieldSymbol::time_derivative(target));
  const Expr expected = canonicalize((vary == Field::Psi ? Expr::number(-1) : Expr::number(1)) * Expr::i() * Expr::hbar());
  const Expr kappa = partial_wrt(E, T.symbol_value());
  if (kappa.is_zero() && !has_time_derivatives(E)) throw DerivationError("no canonical time term");
  if (kappa != expected)
    throw DerivationError(fmt::format("nonstandard symplectic structure: coefficient of d{}/dt is {}, expected {}",
                                      field_label(target), pretty_print(kappa), pretty_print(expected)));
  const Expr R = canonicalize(E - kappa * T);
  if (has_time_derivatives(R))
    throw DerivationError("nonstandard symplectic structure: time derivatives remain after isolating d" +
                          field_label(target) + "/dt");
  return canonicalize(-R);
}

EvolutionEquation derive_equation(const Expr& lagrangian, int dimension) {
  EvolutionEquation eq;
  eq.lagrangian = canonicalize(lagrangian);
  eq.dimension = dimension;
  eq.derived_for = Field::Psi;
  const Expr rhs_star = euler_lagrange(eq.lagrangian, Field::Psi, dimension, &eq.warnings);
  eq.raw_form = conjugate(rhs_star);

  const Expr lap = Expr::symbol(FieldSymbol::laplacian(Field::Psi));
  std::vector<Term> kinetic_terms;
  for (auto& t : terms_of(partial_wrt(eq.raw_form, lap.symbol_value())))
    if (!has_field_dependence(t.shape)) kinetic_terms.push_back(t);
  eq.kinetic_coefficient = from_terms(kinetic_terms);
  if (eq.kinetic_coefficient != expected_kinetic())
    throw DerivationError(fmt::format("kinetic coefficient is {}, expected -(hbar^2/(2*m))",
                                      pretty_print(eq.kinetic_coefficient)));

  const Expr vpsi = canonicalize(Expr::potential() * Expr::psi());
  for (const auto& t : terms_of(eq.raw_form))
    if (t.shape == vpsi && t.coefficient.is_one()) eq.potential_present = true;

  eq.nonlinearity = canonicalize(eq.raw_form - eq.kinetic_coefficient * lap -
                                 (eq.potential_present ? vpsi : Expr::number(0)));
  eq.added_term = canonicalize(eq.lagrangian - linear_lagrangian());
  eq.residual = has_residual(eq.raw_form);
  return eq;
}

// ---------------------------------------------------------------------------

const std::vector<Erratum>& errata_registry() {
  static const std::vector<Erratum> registry = {
      {"log-constant-sign", "Eq46",
       "the constant term of the logarithmic nonlinearity is printed as +f*psi; the derivation gives -f*psi",
       "f^* * psi", ComplexRational(-1)},
      {"gradient-quartic-dimension", "Eq23",
       "the printed form uses lap(psi) * grad(psi).grad(psi^*) in place of the Hessian contraction; exact only in one dimension",
       "", ComplexRational(1)},
      {"trailing-equals-zero", "Eq55 Eq58 Eq59 Eq62",
       "a spurious '= 0' follows the equation; it is dropped from the hand-entered reference", "", ComplexRational(1)},
  };
  return registry;
}

bool VerificationReport::matches_with_errata() const {
  return missing.empty() && extra.empty() &&
         std::all_of(discrepancies.begin(), discrepancies.end(),
                     [](const TermDiscrepancy& d) { return d.erratum.has_value(); });
}

std::string VerificationReport::summary() const {
  if (exact()) return fmt::format("exact ({} terms)", matched.size());
  std::vector<std::string> parts;
  parts.push_back(fmt::format("{} matched", matched.size()));
  for (const auto& m : missing) parts.push_back("missing " + pretty_print(m));
  for (const auto& x : extra) parts.push_back("extra " + pretty_print(x));
  for (const auto& d : discrepancies) {
    const Expr dc = canonicalize(Expr::number(d.derived) * d.shape);
    const Expr rc = canonicalize(Expr::number(d.reference) * d.shape);
    parts.push_back(fmt::format("coefficient of {}: derived {}, reference {}{}", pretty_print(d.shape),
                                pretty_print(dc), pretty_print(rc),
                                d.erratum ? " [erratum " + *d.erratum + "]" : ""));
  }
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

VerificationReport verify_against_reference(const EvolutionEquation& eq, const Expr& reference,
                                            const std::string& equation_label) {
  VerificationReport report;
  const auto derived = terms_of(canonicalize(eq.raw_form));
  const auto ref = terms_of(canonicalize(reference));
  std::vector<bool> used(ref.size(), false);
  for (const auto& d : derived) {
    auto it = std::find_if(ref.begin(), ref.end(), [&](const Term& r) { return r.shape == d.shape; });
    if (it == ref.end()) {
      report.extra.push_back(canonicalize(Expr::number(d.coefficient) * d.shape));
      continue;
    }
    used[static_cast<std::size_t>(it - ref.begin())] = true;
    if (it->coefficient == d.coefficient) {
      report.matched.push_back(d.shape);
      continue;
    }
    TermDiscrepancy disc{d.shape, d.coefficient, it->coefficient, std::nullopt};
    if (!equation_label.empty()) {
      for (const auto& e : errata_registry()) {
        if (e.shape.empty() || e.equation.find(equation_label) == std::string::npos) continue;
        const auto shape = parse(e.shape);
        if (shape.ok() && *shape.expr == d.shape && d.coefficient * e.ratio == it->coefficient) disc.erratum = e.id;
      }
    }
    report.discrepancies.push_back(disc);
  }
  for (std::size_t k = 0; k < ref.size(); ++k)
    if (!used[k]) report.missing.push_back(canonicalize(Expr::number(ref[k].coefficient) * ref[k].shape));
  return report;
}

}  // namespace nlse
