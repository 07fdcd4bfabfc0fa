#include "nlse/dimension.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nlse/dsl.hpp"

namespace nlse {
namespace {

std::string power_str(const std::string& sym, const Rational& r) {
  if (r.is_zero()) return "";
  if (r == Rational(1)) return sym;
  if (r.is_integer() && !r.is_negative()) return sym + "^" + r.str();
  return sym + "^(" + r.str() + ")";
}

std::string superscript(const Rational& r) {
  if (!r.is_integer()) return "^(" + r.str() + ")";
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴",
                                 "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string out = r.is_negative() ? "⁻" : "";
  for (char ch : std::to_string(r.is_negative() ? -r.num() : r.num())) out += digits[ch - '0'];
  return out;
}

DimensionVector symbol_dimension(const FieldSymbol& s, const DimensionVector& psi) {
  const DimensionVector inv_length{0, -1, 0};
  switch (s.kind) {
    case SymbolKind::Psi:
    case SymbolKind::PsiStar:
      return psi;
    case SymbolKind::PsiDot:
    case SymbolKind::PsiStarDot:
      return psi + DimensionVector{0, 0, -1};
    case SymbolKind::GradPsi:
    case SymbolKind::GradPsiStar:
      return psi + inv_length;
    case SymbolKind::LaplacianPsi:
    case SymbolKind::LaplacianPsiStar:
      return psi + Rational(2) * inv_length;
  }
  return psi;
}

}  // namespace

std::string DimensionVector::str() const {
  std::string out = power_str("[E]", energy) + power_str("[L]", length) + power_str("[T]", time);
  return out.empty() ? "1" : out;
}

DimensionVector dimension_of(const Expr& e, const DimensionVector& dim_psi, const CouplingDimensions& couplings,
                             Warnings* warnings) {
  auto rec = [&](const Expr& x) { return dimension_of(x, dim_psi, couplings, warnings); };
  switch (e.kind()) {
    case NodeKind::Number:
      return {};
    case NodeKind::Constant: {
      const std::string& n = e.constant_name();
      if (n == "hbar") return {1, 0, 1};
      if (n == "m") return {1, -2, 2};
      if (n == "V") return {1, 0, 0};
      auto it = couplings.find(n);
      if (it == couplings.end()) throw DimensionError(fmt::format("dimension of coupling '{}' is unknown", n));
      return it->second;
    }
    case NodeKind::Symbol:
      return symbol_dimension(e.symbol_value(), dim_psi);
    case NodeKind::DotGrad:
      return Rational(2) * dim_psi + DimensionVector{0, -2, 0};
    case NodeKind::HessForm:
      return Rational(3) * dim_psi + DimensionVector{0, -4, 0};
    case NodeKind::Log: {
      const DimensionVector a = rec(e.arg());
      if (!a.is_dimensionless() && warnings != nullptr)
        warnings->push_back(fmt::format("logarithm of a dimensioned quantity ({}) in {}", a.str(),
                                        pretty_print(e)));
      return {};
    }
    case NodeKind::Pow:
      return e.exponent() * rec(e.base());
    case NodeKind::Product: {
      DimensionVector d;
      for (const auto& c : e.children()) d = d + rec(c);
      return d;
    }
    case NodeKind::Sum: {
      const auto& terms = e.children();
      const DimensionVector first = rec(terms.front());
      for (std::size_t k = 1; k < terms.size(); ++k) {
        const DimensionVector dk = rec(terms[k]);
        if (dk != first)
          throw DimensionError(fmt::format("inhomogeneous sum: {} has dimension {} but {} has dimension {}",
                                           pretty_print(terms.front()), first.str(), pretty_print(terms[k]),
                                           dk.str()));
      }
      return first;
    }
  }
  return {};
}

DimensionVector dimension_of(const Expr& e, int spatial_dim, const CouplingDimensions& couplings,
                             Warnings* warnings) {
  return dimension_of(e, DimensionVector::wave_function(spatial_dim), couplings, warnings);
}

DimensionVector coupling_dimension(const Expr& lagrangian_term, const std::string& coupling, int spatial_dim,
                                   Warnings* warnings) {
  const Expr ce = canonicalize(lagrangian_term);
  std::optional<DimensionVector> result;
  std::string first_term;
  for (const auto& t : terms_of(ce)) {
    std::vector<Expr> factors =
        t.shape.kind() == NodeKind::Product ? t.shape.children() : std::vector<Expr>{t.shape};
    Rational power;
    std::vector<Expr> rest;
    for (const auto& f : factors) {
      const Expr& key = f.kind() == NodeKind::Pow ? f.base() : f;
      if (key.kind() == NodeKind::Constant && key.constant_name() == coupling) {
        power += f.kind() == NodeKind::Pow ? f.exponent() : Rational(1);
      } else {
        rest.push_back(f);
      }
    }
    if (power.is_zero()) {
      if (contains_if(t.shape, [&](const Expr& x) {
            return x.kind() == NodeKind::Constant && x.constant_name() == coupling;
          }))
        throw DimensionError(fmt::format("coupling '{}' appears inside a composite factor", coupling));
      continue;
    }
    const Expr monomial = Expr::product(rest);
    DimensionVector d;
    try {
      d = dimension_of(monomial, spatial_dim, {}, warnings);
    } catch (const DimensionError& e) {
      throw DimensionError(fmt::format("cannot isolate '{}': {}", coupling, e.what()));
    }
    const DimensionVector c = (Rational(1) / power) * (DimensionVector::energy_density(spatial_dim) - d);
    const std::string label = pretty_print(t.shape);
    if (result && *result != c)
      throw DimensionError(fmt::format("terms {} and {} assign '{}' different dimensions ({} vs {})", first_term,
                                       label, coupling, result->str(), c.str()));
    if (!result) {
      result = c;
      first_term = label;
    }
  }
  if (!result) throw DimensionError(fmt::format("coupling '{}' does not appear", coupling));
  return *result;
}

DimensionVector HbarMcExpansion::dimension() const {
  // hbar = [E][T], m = [E][T]^2[L]^-2, c = [L][T]^-1
  return {hbar_exp + mass_exp, Rational(-2) * mass_exp + c_exp, hbar_exp + Rational(2) * mass_exp - c_exp};
}

std::string HbarMcExpansion::str() const {
  std::vector<std::string> parts;
  if (!hbar_exp.is_zero()) parts.push_back("ħ" + (hbar_exp == Rational(1) ? "" : superscript(hbar_exp)));
  if (!mass_exp.is_zero()) parts.push_back("m" + (mass_exp == Rational(1) ? "" : superscript(mass_exp)));
  if (!c_exp.is_zero()) parts.push_back("c" + (c_exp == Rational(1) ? "" : superscript(c_exp)));
  if (parts.empty()) return "1";
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
  return out;
}

HbarMcExpansion express_in_hbar_m_c(const DimensionVector& d) {
  HbarMcExpansion x;
  x.mass_exp = d.energy - d.time - d.length;
  x.hbar_exp = d.energy - x.mass_exp;
  x.c_exp = d.length + Rational(2) * x.mass_exp;
  x.dimensionless_residual = x.dimension() == d;
  return x;
}

WeaknessReport weakness_report(const HbarMcExpansion& expansion, double mass_kg, double length_m,
                               double dimensionless_g) {
  if (!(mass_kg > 0) || !(length_m > 0)) throw std::invalid_argument("mass and length scale must be positive");
  WeaknessReport r;
  r.coupling_magnitude = dimensionless_g * std::pow(si::hbar, expansion.hbar_exp.to_double()) *
                         std::pow(mass_kg, expansion.mass_exp.to_double()) *
                         std::pow(si::c, expansion.c_exp.to_double());
  const DimensionVector d = expansion.dimension();
  r.nonlinear_energy = r.coupling_magnitude * std::pow(length_m, -d.length.to_double());
  r.kinetic_energy = si::hbar * si::hbar / (2.0 * mass_kg * length_m * length_m);
  r.nonlinear_to_kinetic = r.nonlinear_energy / r.kinetic_energy;
  r.kinetic_to_nonlinear = r.kinetic_energy / r.nonlinear_energy;
  r.text = fmt::format(
      "coupling magnitude {:.6e} (SI), nonlinear energy scale {:.6e} J, kinetic scale {:.6e} J, "
      "nonlinear/kinetic = {:.6e}, kinetic/nonlinear = {:.6e}",
      r.coupling_magnitude, r.nonlinear_energy, r.kinetic_energy, r.nonlinear_to_kinetic, r.kinetic_to_nonlinear);
  return r;
}

}  // namespace nlse
