#include <fmt/format.h>

#include "nlse/variational.hpp"

namespace nlse {
namespace {

constexpr const char* kMinus = "−";

std::string superscript(const Rational& r) {
  if (!r.is_integer()) return "^(" + r.str() + ")";
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴",
                                 "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string out = r.is_negative() ? "⁻" : "";
  for (char c : std::to_string(r.is_negative() ? -r.num() : r.num())) out += digits[c - '0'];
  return out;
}

std::string power(const std::string& base, const Rational& e) {
  return e == Rational(1) ? base : base + superscript(e);
}

std::string field_str(Field f) { return f == Field::Psi ? "ψ" : "ψ*"; }

bool is_density(const Expr& e) {
  return e.kind() == NodeKind::Product && e.children().size() == 2 && e.children()[0] == Expr::psi() &&
         e.children()[1] == Expr::psi_star();
}

std::string sum_str(const Expr& e);

std::string atom_str(const Expr& key) {
  switch (key.kind()) {
    case NodeKind::Number: {
      const auto& c = key.number_value();
      return c.is_real() ? c.re.str() : "(" + c.re.str() + "+" + c.im.str() + "i)";
    }
    case NodeKind::Constant:
      if (key.constant_name() == "hbar") return "ħ";
      return key.constant_name() + (key.constant_conjugated() ? "*" : "");
    case NodeKind::Symbol: {
      const auto& s = key.symbol_value();
      switch (s.kind) {
        case SymbolKind::Psi: return "ψ";
        case SymbolKind::PsiStar: return "ψ*";
        case SymbolKind::PsiDot: return "∂ψ/∂t";
        case SymbolKind::PsiStarDot: return "∂ψ*/∂t";
        case SymbolKind::LaplacianPsi: return "∇²ψ";
        case SymbolKind::LaplacianPsiStar: return "∇²ψ*";
        case SymbolKind::GradPsi: return fmt::format("∂{}ψ", s.axis);
        case SymbolKind::GradPsiStar: return fmt::format("∂{}ψ*", s.axis);
      }
      return "?";
    }
    case NodeKind::DotGrad:
      return "(∇" + field_str(key.fields()[0]) + "·∇" + field_str(key.fields()[1]) + ")";
    case NodeKind::HessForm:
      return "(∇" + field_str(key.fields()[1]) + "·H[" + field_str(key.fields()[0]) + "]·∇" +
             field_str(key.fields()[2]) + ")";
    case NodeKind::Log:
      if (is_density(key.arg())) return "ln|ψ|²";
      return "ln(" + sum_str(key.arg()) + ")";
    case NodeKind::Product:
      if (is_density(key)) return "|ψ|²";
      return "(" + sum_str(key) + ")";
    case NodeKind::Sum:
      return "(" + sum_str(key) + ")";
    case NodeKind::Pow:
      return power(atom_str(key.base()), key.exponent());
  }
  return "?";
}

std::string monomial_str(const Expr& shape) {
  std::vector<Expr> factors =
      shape.kind() == NodeKind::Product ? shape.children() : std::vector<Expr>{shape};
  std::string consts, fields, rest;
  Rational a, b;
  for (const auto& f : factors) {
    const Expr& key = f.kind() == NodeKind::Pow ? f.base() : f;
    const Rational e = f.kind() == NodeKind::Pow ? f.exponent() : Rational(1);
    if (key.is_one()) continue;
    if (key == Expr::psi()) {
      a = e;
    } else if (key == Expr::psi_star()) {
      b = e;
    } else if (is_density(key)) {
      rest += e == Rational(1) ? "|ψ|²" : "|ψ|^(" + (e * Rational(2)).str() + ")";
    } else if (key.kind() == NodeKind::Constant || key.kind() == NodeKind::Number) {
      consts += power(atom_str(key), e);
    } else {
      rest += power(atom_str(key), e);
    }
  }
  if (!a.is_negative() && !b.is_negative() && !a.is_zero() && !b.is_zero()) {
    const Rational k = a < b ? a : b;
    fields += k == Rational(1) ? "|ψ|²" : "|ψ|" + superscript(k * Rational(2));
    a -= k;
    b -= k;
  }
  if (!a.is_zero()) fields += power("ψ", a);
  if (!b.is_zero()) fields += power("ψ*", b);
  return consts + fields + rest;
}

std::string coefficient_str(const ComplexRational& c, bool& negative, bool bare) {
  negative = false;
  if (c.is_real()) {
    Rational r = c.re;
    if (r.is_negative()) {
      negative = true;
      r = -r;
    }
    if (r == Rational(1)) return bare ? "1" : "";
    return r.is_integer() ? r.str() : "(" + r.str() + ")";
  }
  if (c.re.is_zero()) {
    Rational r = c.im;
    if (r.is_negative()) {
      negative = true;
      r = -r;
    }
    return r == Rational(1) ? "i" : (r.is_integer() ? r.str() : "(" + r.str() + ")") + "i";
  }
  return "(" + c.re.str() + (c.im.is_negative() ? kMinus + (-c.im).str() : "+" + c.im.str()) + "i)";
}

std::string sum_str(const Expr& e) {
  const auto terms = terms_of(canonicalize(e));
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& t : terms) {
    const bool bare = t.shape.is_one();
    bool negative = false;
    const std::string coeff = coefficient_str(t.coefficient, negative, bare);
    const std::string body = coeff + (bare ? "" : monomial_str(t.shape));
    if (out.empty()) {
      out = (negative ? kMinus : "") + body;
    } else {
      out += (negative ? std::string(" ") + kMinus + " " : " + ") + body;
    }
  }
  return out;
}

}  // namespace

std::string unicode_print(const Expr& e) { return sum_str(e); }

std::string unicode_equation(const EvolutionEquation& eq) {
  const std::string lhs = "iħ ∂ψ/∂t = ";
  const std::string pad(11, ' ');
  std::string out = lhs + kMinus + "(ħ²/2m)∇²ψ";
  if (eq.potential_present) out += "\n" + pad + "+ Vψ";
  for (const auto& t : terms_of(eq.nonlinearity)) {
    std::string s = sum_str(Expr::number(t.coefficient) * t.shape);
    if (s.rfind(kMinus, 0) == 0) {
      s = std::string(kMinus) + " " + s.substr(std::string(kMinus).size());
    } else {
      s = "+ " + s;
    }
    out += "\n" + pad + s;
  }
  return out;
}

}  // namespace nlse
