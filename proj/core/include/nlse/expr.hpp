#pragma once

// Immutable symbolic expressions over a complex scalar field psi and its
// conjugate, treated as independent variation variables.

#include <complex>
#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlse/rational.hpp"

namespace nlse {

enum class Field : std::uint8_t { Psi, PsiStar };

constexpr Field conj(Field f) { return f == Field::Psi ? Field::PsiStar : Field::Psi; }

enum class SymbolKind : std::uint8_t {
  Psi,
  PsiStar,
  PsiDot,
  PsiStarDot,
  GradPsi,       // component d_axis psi
  GradPsiStar,   // component d_axis psi*
  LaplacianPsi,
  LaplacianPsiStar,
};

struct FieldSymbol {
  SymbolKind kind = SymbolKind::Psi;
  int axis = 0;  // 1-based, only meaningful for the gradient kinds

  static FieldSymbol psi() { return {SymbolKind::Psi, 0}; }
  static FieldSymbol psi_star() { return {SymbolKind::PsiStar, 0}; }
  static FieldSymbol psi_dot() { return {SymbolKind::PsiDot, 0}; }
  static FieldSymbol psi_star_dot() { return {SymbolKind::PsiStarDot, 0}; }
  static FieldSymbol laplacian(Field f) {
    return {f == Field::Psi ? SymbolKind::LaplacianPsi : SymbolKind::LaplacianPsiStar, 0};
  }
  static FieldSymbol grad(Field f, int axis);
  static FieldSymbol value(Field f) { return f == Field::Psi ? psi() : psi_star(); }
  static FieldSymbol time_derivative(Field f) { return f == Field::Psi ? psi_dot() : psi_star_dot(); }

  bool is_gradient() const {
    return kind == SymbolKind::GradPsi || kind == SymbolKind::GradPsiStar;
  }
  bool is_time_derivative() const {
    return kind == SymbolKind::PsiDot || kind == SymbolKind::PsiStarDot;
  }
  /// Field this symbol is a (derivative of a) component of.
  Field field() const;
  FieldSymbol conjugate() const;

  friend bool operator==(const FieldSymbol&, const FieldSymbol&) = default;
  friend auto operator<=>(const FieldSymbol&, const FieldSymbol&) = default;
};

enum class NodeKind : std::uint8_t {
  Number,
  Constant,
  Symbol,
  DotGrad,   // sum_i d_i a * d_i b
  HessForm,  // sum_ij d_i u * d_i d_j a * d_j v; the D>1 residual vocabulary
  Log,
  Pow,
  Product,
  Sum,
};

/// Thrown when an operation leaves the supported gradient/Laplacian vocabulary.
class UnsupportedExpression : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Warnings = std::vector<std::string>;

/// Names that denote real-valued constants (self-conjugate).
bool is_real_constant(const std::string& name);

class Expr {
public:
  Expr();  // the number zero

  static Expr number(ComplexRational value);
  static Expr symbol(FieldSymbol s);
  static Expr constant(std::string name, bool conjugated = false);
  static Expr dot_grad(Field a, Field b);
  static Expr hess_form(Field of, Field u, Field v);
  static Expr log(Expr arg);
  static Expr pow(Expr base, Rational exponent);
  static Expr product(std::vector<Expr> factors);
  static Expr sum(std::vector<Expr> terms);

  static Expr psi() { return symbol(FieldSymbol::psi()); }
  static Expr psi_star() { return symbol(FieldSymbol::psi_star()); }
  static Expr i() { return number(ComplexRational::i()); }
  static Expr hbar() { return constant("hbar"); }
  static Expr mass() { return constant("m"); }
  static Expr potential() { return constant("V"); }

  NodeKind kind() const;

  const ComplexRational& number_value() const;
  const FieldSymbol& symbol_value() const;
  const std::string& constant_name() const;
  bool constant_conjugated() const;
  /// DotGrad: (a, b); HessForm: (of, u, v).
  const std::vector<Field>& fields() const;
  const Expr& base() const;
  const Rational& exponent() const;
  const Expr& arg() const;
  const std::vector<Expr>& children() const;

  bool is_number() const { return kind() == NodeKind::Number; }
  bool is_zero() const { return is_number() && number_value().is_zero(); }
  bool is_one() const { return is_number() && number_value().is_one(); }

  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b);

  friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
  friend Expr operator/(const Expr& a, const Expr& b) { return product({a, pow(b, -1)}); }
  Expr operator-() const;

  struct Node;

private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator*(const ComplexRational& c, const Expr& e);

// ---------------------------------------------------------------------------
// Canonical form

/// Expands products over sums, merges numeric coefficients and like terms,
/// distributes integer powers over products, sorts by a fixed total order,
/// collapses power chains and rewrites x/y as x*y^(-1). Idempotent.
Expr canonicalize(const Expr& e);

/// True iff canonicalize(a) and canonicalize(b) are identical trees.
bool structural_equal(const Expr& a, const Expr& b);

/// One canonical summand split as coefficient * shape (shape has unit
/// coefficient; the constant term has shape = 1).
struct Term {
  ComplexRational coefficient;
  Expr shape;
};
std::vector<Term> terms_of(const Expr& canonical);
Expr from_terms(const std::vector<Term>& terms);

// ---------------------------------------------------------------------------
// Queries

bool contains_if(const Expr& e, const std::function<bool(const Expr&)>& pred);
bool depends_on(const Expr& e, FieldSymbol s);
/// Any field symbol, DotGrad or HessForm appears.
bool has_field_dependence(const Expr& e);
/// Any gradient, Laplacian, DotGrad or HessForm appears.
bool has_spatial_derivatives(const Expr& e);
bool has_time_derivatives(const Expr& e);
bool has_residual(const Expr& e);
/// Named constants (excluding hbar, m, V) in order of first appearance.
std::vector<std::string> coupling_names(const Expr& e);

// ---------------------------------------------------------------------------
// Calculus

/// d e / d s with every other symbol, DotGrad and HessForm held fixed
/// (psi and psi* independent). The result is canonical. Log arguments that
/// are not positive definite by construction add a domain warning.
Expr partial_wrt(const Expr& e, FieldSymbol s, Warnings* warnings = nullptr);

/// Derivative with respect to an atom (Symbol, DotGrad or HessForm node).
Expr partial_wrt_atom(const Expr& e, const Expr& atom, Warnings* warnings = nullptr);

/// Complex conjugation: constants c -> c*, psi <-> psi*, i -> -i. Involution.
Expr conjugate(const Expr& e);

/// Rewrites every HessForm(a; u, v) as lap(a) * dot(grad u, grad v), exact
/// only in one spatial dimension.
Expr collapse_to_1d(const Expr& e);

/// A rotation-covariant vector field: sum of c * grad(f) and c * H(a) grad(u).
struct VectorExpr {
  struct GradTerm {
    Expr coeff;
    Field field;
  };
  struct HessTerm {
    Expr coeff;
    Field hess_of;
    Field applied_to;
  };
  std::vector<GradTerm> grads;
  std::vector<HessTerm> hess;

  static VectorExpr grad_of(Field f) { return {{{Expr::number(1), f}}, {}}; }
  bool empty() const { return grads.empty() && hess.empty(); }
};

VectorExpr operator+(const VectorExpr& a, const VectorExpr& b);
VectorExpr operator*(const Expr& s, const VectorExpr& v);
VectorExpr operator-(const VectorExpr& v);

/// grad e by the chain rule; throws UnsupportedExpression for third
/// derivatives (Laplacians, HessForms) or gradients of the potential.
VectorExpr gradient(const Expr& e);
Expr dot(const VectorExpr& a, const VectorExpr& b);
/// div v; the Laplacian of each field appears as a LaplacianPsi symbol.
Expr divergence(const VectorExpr& v);
/// d e / d(grad f) as a vector field.
VectorExpr momentum(const Expr& e, Field f);

struct DivergenceResult {
  Expr value;          // canonical
  bool residual = false;  // HessForm terms survive (dimension > 1)
};

/// sum_i d_i [ d e / d(d_i f) ], expanded with the product and chain rules.
DivergenceResult spatial_divergence_of_momenta(const Expr& e, Field f, int dimension);

// ---------------------------------------------------------------------------
// Numeric evaluation at a single point

struct PointValues {
  std::complex<double> psi{}, psi_star{}, psi_dot{}, psi_star_dot{};
  std::complex<double> lap_psi{}, lap_psi_star{};
  std::vector<std::complex<double>> grad_psi, grad_psi_star;  // size D
  std::vector<std::complex<double>> hess_psi, hess_psi_star;  // D*D row-major
  std::map<std::string, std::complex<double>> constants;      // unconjugated values

  std::complex<double>& value(FieldSymbol s);
  std::complex<double> value(FieldSymbol s) const;
};

/// Tree-walking interpreter (principal branches for log and fractional powers).
std::complex<double> evaluate(const Expr& e, const PointValues& at);

}  // namespace nlse
