#include "nlse/expr.hpp"

#include <algorithm>
#include <cmath>

namespace nlse {

struct Expr::Node {
  NodeKind kind = NodeKind::Number;
  ComplexRational number;
  FieldSymbol symbol;
  std::string name;
  bool conjugated = false;
  std::vector<Field> fields;
  Rational exponent;
  std::vector<Expr> children;  // Pow: {base}; Log: {arg}; Sum/Product: terms
};

namespace {

const std::vector<Expr> kNoChildren;

std::shared_ptr<Expr::Node> make(NodeKind kind) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  return n;
}

int field_rank(Field f) { return f == Field::Psi ? 0 : 1; }

}  // namespace

FieldSymbol FieldSymbol::grad(Field f, int axis) {
  if (axis < 1) throw std::invalid_argument("gradient axis must be >= 1");
  return {f == Field::Psi ? SymbolKind::GradPsi : SymbolKind::GradPsiStar, axis};
}

Field FieldSymbol::field() const {
  switch (kind) {
    case SymbolKind::Psi:
    case SymbolKind::PsiDot:
    case SymbolKind::GradPsi:
    case SymbolKind::LaplacianPsi:
      return Field::Psi;
    default:
      return Field::PsiStar;
  }
}

FieldSymbol FieldSymbol::conjugate() const {
  switch (kind) {
    case SymbolKind::Psi: return {SymbolKind::PsiStar, axis};
    case SymbolKind::PsiStar: return {SymbolKind::Psi, axis};
    case SymbolKind::PsiDot: return {SymbolKind::PsiStarDot, axis};
    case SymbolKind::PsiStarDot: return {SymbolKind::PsiDot, axis};
    case SymbolKind::GradPsi: return {SymbolKind::GradPsiStar, axis};
    case SymbolKind::GradPsiStar: return {SymbolKind::GradPsi, axis};
    case SymbolKind::LaplacianPsi: return {SymbolKind::LaplacianPsiStar, axis};
    case SymbolKind::LaplacianPsiStar: return {SymbolKind::LaplacianPsi, axis};
  }
  return *this;
}

bool is_real_constant(const std::string& name) {
  return name == "hbar" || name == "m" || name == "V";
}

Expr::Expr() : Expr(number(0)) {}

Expr Expr::number(ComplexRational value) {
  auto n = make(NodeKind::Number);
  n->number = value;
  return Expr(std::move(n));
}

Expr Expr::symbol(FieldSymbol s) {
  auto n = make(NodeKind::Symbol);
  n->symbol = s;
  return Expr(std::move(n));
}

Expr Expr::constant(std::string name, bool conjugated) {
  auto n = make(NodeKind::Constant);
  n->conjugated = conjugated && !is_real_constant(name);
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::dot_grad(Field a, Field b) {
  auto n = make(NodeKind::DotGrad);
  if (field_rank(b) < field_rank(a)) std::swap(a, b);
  n->fields = {a, b};
  return Expr(std::move(n));
}

Expr Expr::hess_form(Field of, Field u, Field v) {
  auto n = make(NodeKind::HessForm);
  if (field_rank(v) < field_rank(u)) std::swap(u, v);
  n->fields = {of, u, v};
  return Expr(std::move(n));
}

Expr Expr::log(Expr arg) {
  auto n = make(NodeKind::Log);
  n->children = {std::move(arg)};
  return Expr(std::move(n));
}

Expr Expr::pow(Expr base, Rational exponent) {
  auto n = make(NodeKind::Pow);
  n->children = {std::move(base)};
  n->exponent = exponent;
  return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return number(1);
  if (factors.size() == 1) return factors.front();
  auto n = make(NodeKind::Product);
  n->children = std::move(factors);
  return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return number(0);
  if (terms.size() == 1) return terms.front();
  auto n = make(NodeKind::Sum);
  n->children = std::move(terms);
  return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_->kind; }
const ComplexRational& Expr::number_value() const { return node_->number; }
const FieldSymbol& Expr::symbol_value() const { return node_->symbol; }
const std::string& Expr::constant_name() const { return node_->name; }
bool Expr::constant_conjugated() const { return node_->conjugated; }
const std::vector<Field>& Expr::fields() const { return node_->fields; }
const Expr& Expr::base() const { return node_->children.front(); }
const Rational& Expr::exponent() const { return node_->exponent; }
const Expr& Expr::arg() const { return node_->children.front(); }
const std::vector<Expr>& Expr::children() const {
  if (node_->kind == NodeKind::Sum || node_->kind == NodeKind::Product) return node_->children;
  return kNoChildren;
}

Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::number(-1) * b}); }
Expr Expr::operator-() const { return Expr::number(-1) * *this; }
Expr operator*(const ComplexRational& c, const Expr& e) { return Expr::number(c) * e; }

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  switch (x.kind) {
    case NodeKind::Number:
      return x.number <=> y.number;
    case NodeKind::Symbol:
      return x.symbol <=> y.symbol;
    case NodeKind::Constant:
      if (auto c = x.name <=> y.name; c != 0) return c;
      return x.conjugated <=> y.conjugated;
    case NodeKind::DotGrad:
    case NodeKind::HessForm:
      return x.fields <=> y.fields;
    case NodeKind::Pow:
      if (auto c = x.children.front() <=> y.children.front(); c != 0) return c;
      return x.exponent <=> y.exponent;
    case NodeKind::Log:
    case NodeKind::Product:
    case NodeKind::Sum:
      return std::lexicographical_compare_three_way(x.children.begin(), x.children.end(),
                                                    y.children.begin(), y.children.end());
  }
  return std::strong_ordering::equal;
}

bool operator==(const Expr& a, const Expr& b) { return (a <=> b) == 0; }

// ---------------------------------------------------------------------------

std::vector<Term> terms_of(const Expr& canonical) {
  std::vector<Term> out;
  auto split = [&](const Expr& t) {
    if (t.is_number()) {
      out.push_back({t.number_value(), Expr::number(1)});
      return;
    }
    if (t.kind() == NodeKind::Product && t.children().front().is_number()) {
      std::vector<Expr> rest(t.children().begin() + 1, t.children().end());
      out.push_back({t.children().front().number_value(), Expr::product(std::move(rest))});
      return;
    }
    out.push_back({ComplexRational(1), t});
  };
  if (canonical.is_zero()) return out;
  if (canonical.kind() == NodeKind::Sum) {
    for (const auto& t : canonical.children()) split(t);
  } else {
    split(canonical);
  }
  return out;
}

Expr from_terms(const std::vector<Term>& terms) {
  std::vector<Expr> parts;
  parts.reserve(terms.size());
  for (const auto& t : terms) parts.push_back(Expr::number(t.coefficient) * t.shape);
  return canonicalize(Expr::sum(std::move(parts)));
}

bool contains_if(const Expr& e, const std::function<bool(const Expr&)>& pred) {
  if (pred(e)) return true;
  switch (e.kind()) {
    case NodeKind::Pow:
      return contains_if(e.base(), pred);
    case NodeKind::Log:
      return contains_if(e.arg(), pred);
    case NodeKind::Sum:
    case NodeKind::Product:
      return std::any_of(e.children().begin(), e.children().end(),
                         [&](const Expr& c) { return contains_if(c, pred); });
    default:
      return false;
  }
}

bool depends_on(const Expr& e, FieldSymbol s) {
  return contains_if(e, [&](const Expr& x) {
    if (x.kind() == NodeKind::Symbol) return x.symbol_value() == s;
    if (s.is_gradient() && x.kind() == NodeKind::DotGrad) {
      const auto& f = x.fields();
      return f[0] == s.field() || f[1] == s.field();
    }
    if (s.is_gradient() && x.kind() == NodeKind::HessForm) {
      const auto& f = x.fields();
      return f[1] == s.field() || f[2] == s.field();
    }
    return false;
  });
}

bool has_field_dependence(const Expr& e) {
  return contains_if(e, [](const Expr& x) {
    return x.kind() == NodeKind::Symbol || x.kind() == NodeKind::DotGrad ||
           x.kind() == NodeKind::HessForm;
  });
}

bool has_spatial_derivatives(const Expr& e) {
  return contains_if(e, [](const Expr& x) {
    if (x.kind() == NodeKind::DotGrad || x.kind() == NodeKind::HessForm) return true;
    if (x.kind() != NodeKind::Symbol) return false;
    const auto k = x.symbol_value().kind;
    return x.symbol_value().is_gradient() || k == SymbolKind::LaplacianPsi ||
           k == SymbolKind::LaplacianPsiStar;
  });
}

bool has_time_derivatives(const Expr& e) {
  return contains_if(e, [](const Expr& x) {
    return x.kind() == NodeKind::Symbol && x.symbol_value().is_time_derivative();
  });
}

bool has_residual(const Expr& e) {
  return contains_if(e, [](const Expr& x) { return x.kind() == NodeKind::HessForm; });
}

std::vector<std::string> coupling_names(const Expr& e) {
  std::vector<std::string> names;
  contains_if(e, [&](const Expr& x) {
    if (x.kind() == NodeKind::Constant && !is_real_constant(x.constant_name()) &&
        std::find(names.begin(), names.end(), x.constant_name()) == names.end()) {
      names.push_back(x.constant_name());
    }
    return false;
  });
  return names;
}

// ---------------------------------------------------------------------------

Expr conjugate(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Number:
      return Expr::number(e.number_value().conj());
    case NodeKind::Symbol:
      return Expr::symbol(e.symbol_value().conjugate());
    case NodeKind::Constant:
      return Expr::constant(e.constant_name(), !e.constant_conjugated());
    case NodeKind::DotGrad:
      return Expr::dot_grad(conj(e.fields()[0]), conj(e.fields()[1]));
    case NodeKind::HessForm:
      return Expr::hess_form(conj(e.fields()[0]), conj(e.fields()[1]), conj(e.fields()[2]));
    case NodeKind::Log:
      return canonicalize(Expr::log(conjugate(e.arg())));
    case NodeKind::Pow:
      return canonicalize(Expr::pow(conjugate(e.base()), e.exponent()));
    case NodeKind::Product:
    case NodeKind::Sum: {
      std::vector<Expr> parts;
      parts.reserve(e.children().size());
      for (const auto& c : e.children()) parts.push_back(conjugate(c));
      return canonicalize(e.kind() == NodeKind::Sum ? Expr::sum(std::move(parts))
                                                    : Expr::product(std::move(parts)));
    }
  }
  return e;
}

Expr collapse_to_1d(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::HessForm: {
      const auto& f = e.fields();
      return Expr::symbol(FieldSymbol::laplacian(f[0])) * Expr::dot_grad(f[1], f[2]);
    }
    case NodeKind::Log:
      return canonicalize(Expr::log(collapse_to_1d(e.arg())));
    case NodeKind::Pow:
      return canonicalize(Expr::pow(collapse_to_1d(e.base()), e.exponent()));
    case NodeKind::Product:
    case NodeKind::Sum: {
      std::vector<Expr> parts;
      for (const auto& c : e.children()) parts.push_back(collapse_to_1d(c));
      return canonicalize(e.kind() == NodeKind::Sum ? Expr::sum(std::move(parts))
                                                    : Expr::product(std::move(parts)));
    }
    default:
      return e;
  }
}

// ---------------------------------------------------------------------------

std::complex<double>& PointValues::value(FieldSymbol s) {
  switch (s.kind) {
    case SymbolKind::Psi: return psi;
    case SymbolKind::PsiStar: return psi_star;
    case SymbolKind::PsiDot: return psi_dot;
    case SymbolKind::PsiStarDot: return psi_star_dot;
    case SymbolKind::LaplacianPsi: return lap_psi;
    case SymbolKind::LaplacianPsiStar: return lap_psi_star;
    case SymbolKind::GradPsi: return grad_psi.at(static_cast<std::size_t>(s.axis - 1));
    case SymbolKind::GradPsiStar: return grad_psi_star.at(static_cast<std::size_t>(s.axis - 1));
  }
  return psi;
}

std::complex<double> PointValues::value(FieldSymbol s) const {
  return const_cast<PointValues*>(this)->value(s);
}

namespace {

const std::vector<std::complex<double>>& grad_of(const PointValues& at, Field f) {
  return f == Field::Psi ? at.grad_psi : at.grad_psi_star;
}

}  // namespace

std::complex<double> evaluate(const Expr& e, const PointValues& at) {
  switch (e.kind()) {
    case NodeKind::Number:
      return e.number_value().to_complex();
    case NodeKind::Symbol:
      return at.value(e.symbol_value());
    case NodeKind::Constant: {
      auto it = at.constants.find(e.constant_name());
      if (it == at.constants.end())
        throw std::out_of_range("unbound constant '" + e.constant_name() + "'");
      return e.constant_conjugated() ? std::conj(it->second) : it->second;
    }
    case NodeKind::DotGrad: {
      const auto& a = grad_of(at, e.fields()[0]);
      const auto& b = grad_of(at, e.fields()[1]);
      if (a.size() != b.size()) throw std::invalid_argument("gradient size mismatch");
      std::complex<double> s{};
      for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
      return s;
    }
    case NodeKind::HessForm: {
      const auto& h = e.fields()[0] == Field::Psi ? at.hess_psi : at.hess_psi_star;
      const auto& u = grad_of(at, e.fields()[1]);
      const auto& v = grad_of(at, e.fields()[2]);
      const std::size_t d = u.size();
      if (h.size() != d * d) throw std::invalid_argument("hessian size mismatch");
      std::complex<double> s{};
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) s += u[i] * h[i * d + j] * v[j];
      return s;
    }
    case NodeKind::Log:
      return std::log(evaluate(e.arg(), at));
    case NodeKind::Pow: {
      const auto b = evaluate(e.base(), at);
      const Rational& r = e.exponent();
      if (r.is_integer()) {
        const std::int64_t n = r.num();
        std::complex<double> acc = 1.0;
        for (std::int64_t k = 0; k < (n < 0 ? -n : n); ++k) acc *= b;
        return n < 0 ? 1.0 / acc : acc;
      }
      return std::pow(b, r.to_double());
    }
    case NodeKind::Product: {
      std::complex<double> p = 1.0;
      for (const auto& c : e.children()) p *= evaluate(c, at);
      return p;
    }
    case NodeKind::Sum: {
      std::complex<double> s{};
      for (const auto& c : e.children()) s += evaluate(c, at);
      return s;
    }
  }
  return {};
}

}  // namespace nlse
