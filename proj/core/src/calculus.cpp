#include <algorithm>

#include "nlse/expr.hpp"

namespace nlse {
namespace {

Expr density() { return Expr::psi() * Expr::psi_star(); }

/// Log arguments that are positive (or unimodular) for every nonzero psi.
bool log_argument_safe(const Expr& u) {
  const Expr d = canonicalize(density());
  if (u == d) return true;
  if (u.kind() == NodeKind::Pow && u.base() == d) return true;
  const Expr ratio = canonicalize(Expr::psi() / Expr::psi_star());
  const Expr inverse_ratio = canonicalize(Expr::psi_star() / Expr::psi());
  return u == ratio || u == inverse_ratio;
}

std::string describe_atom(const Expr& atom) {
  switch (atom.kind()) {
    case NodeKind::DotGrad: return "a gradient product";
    case NodeKind::HessForm: return "a Hessian form";
    default: return "a symbol";
  }
}

Expr d(const Expr& e, const Expr& target, Warnings* warnings) {
  switch (e.kind()) {
    case NodeKind::Number:
    case NodeKind::Constant:
      return Expr::number(0);
    case NodeKind::Symbol:
      return Expr::number(e == target ? 1 : 0);
    case NodeKind::DotGrad: {
      if (e == target) return Expr::number(1);
      if (target.kind() == NodeKind::Symbol && target.symbol_value().is_gradient()) {
        const FieldSymbol s = target.symbol_value();
        const Field a = e.fields()[0];
        const Field b = e.fields()[1];
        std::vector<Expr> parts;
        if (a == s.field()) parts.push_back(Expr::symbol(FieldSymbol::grad(b, s.axis)));
        if (b == s.field()) parts.push_back(Expr::symbol(FieldSymbol::grad(a, s.axis)));
        return Expr::sum(std::move(parts));
      }
      return Expr::number(0);
    }
    case NodeKind::HessForm: {
      if (e == target) return Expr::number(1);
      if (target.kind() == NodeKind::Symbol && target.symbol_value().is_gradient()) {
        const Field f = target.symbol_value().field();
        if (e.fields()[1] == f || e.fields()[2] == f)
          throw UnsupportedExpression("derivative of a Hessian form by a gradient component");
      }
      return Expr::number(0);
    }
    case NodeKind::Log: {
      Expr du = d(e.arg(), target, warnings);
      if (du.is_zero()) return du;
      if (warnings != nullptr && !log_argument_safe(e.arg()))
        warnings->push_back("log argument may vanish or change sign; derivative valid only where it is nonzero");
      return du * Expr::pow(e.arg(), -1);
    }
    case NodeKind::Pow: {
      Expr db = d(e.base(), target, warnings);
      if (db.is_zero()) return db;
      return Expr::number(e.exponent()) * Expr::pow(e.base(), e.exponent() - Rational(1)) * db;
    }
    case NodeKind::Product: {
      const auto& f = e.children();
      std::vector<Expr> parts;
      for (std::size_t k = 0; k < f.size(); ++k) {
        Expr dk = d(f[k], target, warnings);
        if (dk.is_zero()) continue;
        std::vector<Expr> factors;
        factors.reserve(f.size());
        for (std::size_t j = 0; j < f.size(); ++j) factors.push_back(j == k ? dk : f[j]);
        parts.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(parts));
    }
    case NodeKind::Sum: {
      std::vector<Expr> parts;
      for (const auto& c : e.children()) {
        Expr dc = d(c, target, warnings);
        if (!dc.is_zero()) parts.push_back(std::move(dc));
      }
      return Expr::sum(std::move(parts));
    }
  }
  return Expr::number(0);
}

void collect_atoms(const Expr& e, std::vector<Expr>& out) {
  switch (e.kind()) {
    case NodeKind::Symbol:
    case NodeKind::Constant:
    case NodeKind::DotGrad:
    case NodeKind::HessForm:
      if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
      return;
    case NodeKind::Log:
      collect_atoms(e.arg(), out);
      return;
    case NodeKind::Pow:
      collect_atoms(e.base(), out);
      return;
    case NodeKind::Product:
    case NodeKind::Sum:
      for (const auto& c : e.children()) collect_atoms(c, out);
      return;
    case NodeKind::Number:
      return;
  }
}

VectorExpr simplify(const VectorExpr& v) {
  VectorExpr out;
  for (const auto& g : v.grads) {
    auto it = std::find_if(out.grads.begin(), out.grads.end(),
                           [&](const VectorExpr::GradTerm& t) { return t.field == g.field; });
    if (it == out.grads.end()) {
      out.grads.push_back(g);
    } else {
      it->coeff = it->coeff + g.coeff;
    }
  }
  for (const auto& h : v.hess) {
    auto it = std::find_if(out.hess.begin(), out.hess.end(), [&](const VectorExpr::HessTerm& t) {
      return t.hess_of == h.hess_of && t.applied_to == h.applied_to;
    });
    if (it == out.hess.end()) {
      out.hess.push_back(h);
    } else {
      it->coeff = it->coeff + h.coeff;
    }
  }
  for (auto& g : out.grads) g.coeff = canonicalize(g.coeff);
  for (auto& h : out.hess) h.coeff = canonicalize(h.coeff);
  std::erase_if(out.grads, [](const VectorExpr::GradTerm& t) { return t.coeff.is_zero(); });
  std::erase_if(out.hess, [](const VectorExpr::HessTerm& t) { return t.coeff.is_zero(); });
  return out;
}

}  // namespace

Expr partial_wrt_atom(const Expr& e, const Expr& atom, Warnings* warnings) {
  return canonicalize(d(canonicalize(e), atom, warnings));
}

Expr partial_wrt(const Expr& e, FieldSymbol s, Warnings* warnings) {
  return partial_wrt_atom(e, Expr::symbol(s), warnings);
}

VectorExpr operator+(const VectorExpr& a, const VectorExpr& b) {
  VectorExpr out = a;
  out.grads.insert(out.grads.end(), b.grads.begin(), b.grads.end());
  out.hess.insert(out.hess.end(), b.hess.begin(), b.hess.end());
  return simplify(out);
}

VectorExpr operator*(const Expr& s, const VectorExpr& v) {
  VectorExpr out = v;
  for (auto& g : out.grads) g.coeff = s * g.coeff;
  for (auto& h : out.hess) h.coeff = s * h.coeff;
  return simplify(out);
}

VectorExpr operator-(const VectorExpr& v) { return Expr::number(-1) * v; }

VectorExpr gradient(const Expr& e) {
  const Expr ce = canonicalize(e);
  std::vector<Expr> atoms;
  collect_atoms(ce, atoms);
  VectorExpr out;
  for (const auto& atom : atoms) {
    if (atom.kind() == NodeKind::Constant) {
      if (atom.constant_name() == "V")
        throw UnsupportedExpression("gradient of the potential V is not representable");
      continue;
    }
    if (atom.kind() == NodeKind::HessForm)
      throw UnsupportedExpression("gradient of " + describe_atom(atom) + " needs third derivatives");
    const Expr c = partial_wrt_atom(ce, atom);
    if (c.is_zero()) continue;
    if (atom.kind() == NodeKind::DotGrad) {
      const Field a = atom.fields()[0];
      const Field b = atom.fields()[1];
      out.hess.push_back({c, a, b});
      out.hess.push_back({c, b, a});
      continue;
    }
    const FieldSymbol s = atom.symbol_value();
    if (s.kind != SymbolKind::Psi && s.kind != SymbolKind::PsiStar)
      throw UnsupportedExpression("gradient of a derivative symbol is outside the supported vocabulary");
    out.grads.push_back({c, s.field()});
  }
  return simplify(out);
}

Expr dot(const VectorExpr& a, const VectorExpr& b) {
  std::vector<Expr> parts;
  for (const auto& g : a.grads) {
    for (const auto& h : b.grads) parts.push_back(g.coeff * h.coeff * Expr::dot_grad(g.field, h.field));
    for (const auto& h : b.hess)
      parts.push_back(g.coeff * h.coeff * Expr::hess_form(h.hess_of, g.field, h.applied_to));
  }
  for (const auto& g : a.hess) {
    for (const auto& h : b.grads)
      parts.push_back(g.coeff * h.coeff * Expr::hess_form(g.hess_of, h.field, g.applied_to));
    if (!b.hess.empty())
      throw UnsupportedExpression("product of two Hessian terms is outside the supported vocabulary");
  }
  return canonicalize(Expr::sum(std::move(parts)));
}

Expr divergence(const VectorExpr& v) {
  if (!v.hess.empty())
    throw UnsupportedExpression("divergence of a Hessian term needs third derivatives");
  std::vector<Expr> parts;
  for (const auto& g : v.grads) {
    parts.push_back(dot(gradient(g.coeff), VectorExpr::grad_of(g.field)));
    parts.push_back(g.coeff * Expr::symbol(FieldSymbol::laplacian(g.field)));
  }
  return canonicalize(Expr::sum(std::move(parts)));
}

VectorExpr momentum(const Expr& e, Field f) {
  const Expr ce = canonicalize(e);
  std::vector<Expr> atoms;
  collect_atoms(ce, atoms);
  VectorExpr out;
  for (const auto& atom : atoms) {
    if (atom.kind() == NodeKind::Symbol && atom.symbol_value().is_gradient() &&
        atom.symbol_value().field() == f)
      throw UnsupportedExpression("explicit gradient components break rotation covariance");
    if (atom.kind() == NodeKind::HessForm && (atom.fields()[1] == f || atom.fields()[2] == f))
      throw UnsupportedExpression("Hessian forms are not allowed in a Lagrangian");
    if (atom.kind() != NodeKind::DotGrad) continue;
    const Field a = atom.fields()[0];
    const Field b = atom.fields()[1];
    if (a != f && b != f) continue;
    const Expr c = partial_wrt_atom(ce, atom);
    if (a == f) out.grads.push_back({c, b});
    if (b == f) out.grads.push_back({c, a});
  }
  return simplify(out);
}

DivergenceResult spatial_divergence_of_momenta(const Expr& e, Field f, int dimension) {
  Expr value = divergence(momentum(e, f));
  if (dimension == 1) value = collapse_to_1d(value);
  return {value, has_residual(value)};
}

}  // namespace nlse
