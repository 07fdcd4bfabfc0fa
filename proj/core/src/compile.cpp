#include "nlse/compile.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nlse/dsl.hpp"

namespace nlse {
namespace {

enum class Op {
  Const,
  Psi,
  PsiStar,
  LapPsi,
  LapPsiStar,
  Grad,
  Potential,
  DotGrad,
  Hess1D,
  Density,
  InvPow,      // psi^(-k) = conj(psi)^k / (|psi|^2 + eps)^k
  LogDensity,  // log(|psi|^2 + eps)
  LogPhase,    // sign * 2i arg(psi)
  Add,
  Mul,
  PowInt,
  PowReal,
  Log,
};

struct Instr {
  Op op = Op::Const;
  int a = -1;
  int b = -1;
  Field f1 = Field::Psi, f2 = Field::Psi, f3 = Field::Psi;
  int axis = 0;
  std::int64_t k = 0;
  double r = 0;
  cdouble c{};
};

Expr density_expr() { return canonicalize(Expr::psi() * Expr::psi_star()); }

}  // namespace

struct CompiledExpr::Program {
  Expr source;
  std::vector<Instr> code;
  int result = -1;
  int dimension = 1;
  double epsilon = 0;
  bool gradients = false;
  bool laplacians = false;
  bool potential = false;
};

namespace {

class Emitter {
public:
  Emitter(CompiledExpr::Program& p, const ConstantBindings& b) : p_(p), bindings_(b) {}

  int emit(const Expr& e) {
    if (auto it = memo_.find(e); it != memo_.end()) return it->second;
    const int id = build(e);
    memo_.emplace(e, id);
    return id;
  }

private:
  int push(Instr in) {
    p_.code.push_back(in);
    return static_cast<int>(p_.code.size()) - 1;
  }

  int constant(cdouble c) {
    Instr in;
    in.op = Op::Const;
    in.c = c;
    return push(in);
  }

  int binary(Op op, int a, int b) {
    Instr in;
    in.op = op;
    in.a = a;
    in.b = b;
    return push(in);
  }

  int build(const Expr& e) {
    Instr in;
    switch (e.kind()) {
      case NodeKind::Number:
        return constant(e.number_value().to_complex());
      case NodeKind::Constant: {
        if (e.constant_name() == "V") {
          p_.potential = true;
          in.op = Op::Potential;
          return push(in);
        }
        auto it = bindings_.find(e.constant_name());
        if (it == bindings_.end()) throw CompileError(fmt::format("unbound constant '{}'", e.constant_name()));
        return constant(e.constant_conjugated() ? std::conj(it->second) : it->second);
      }
      case NodeKind::Symbol: {
        const FieldSymbol s = e.symbol_value();
        switch (s.kind) {
          case SymbolKind::Psi: in.op = Op::Psi; break;
          case SymbolKind::PsiStar: in.op = Op::PsiStar; break;
          case SymbolKind::LaplacianPsi:
            in.op = Op::LapPsi;
            p_.laplacians = true;
            break;
          case SymbolKind::LaplacianPsiStar:
            in.op = Op::LapPsiStar;
            p_.laplacians = true;
            break;
          case SymbolKind::GradPsi:
          case SymbolKind::GradPsiStar:
            if (s.axis > p_.dimension)
              throw CompileError(fmt::format("gradient component {} exceeds grid dimension {}", s.axis, p_.dimension));
            in.op = Op::Grad;
            in.f1 = s.field();
            in.axis = s.axis - 1;
            p_.gradients = true;
            break;
          default:
            throw CompileError("time derivatives cannot appear in a right-hand side");
        }
        return push(in);
      }
      case NodeKind::DotGrad:
        in.op = Op::DotGrad;
        in.f1 = e.fields()[0];
        in.f2 = e.fields()[1];
        p_.gradients = true;
        return push(in);
      case NodeKind::HessForm:
        if (p_.dimension != 1)
          throw CompileError(fmt::format(
              "Hessian terms cannot be evaluated in dimension {}; the derived form is exact only in one dimension",
              p_.dimension));
        in.op = Op::Hess1D;
        in.f1 = e.fields()[0];
        in.f2 = e.fields()[1];
        in.f3 = e.fields()[2];
        p_.gradients = true;
        p_.laplacians = true;
        return push(in);
      case NodeKind::Log: {
        const Expr& arg = e.arg();
        if (arg == density_expr()) {
          in.op = Op::LogDensity;
          return push(in);
        }
        if (arg == canonicalize(Expr::psi() / Expr::psi_star()) ||
            arg == canonicalize(Expr::psi_star() / Expr::psi())) {
          in.op = Op::LogPhase;
          in.k = arg == canonicalize(Expr::psi() / Expr::psi_star()) ? 1 : -1;
          return push(in);
        }
        in.op = Op::Log;
        in.a = emit(arg);
        return push(in);
      }
      case NodeKind::Pow: {
        const Expr& base = e.base();
        const Rational& r = e.exponent();
        if (base.kind() == NodeKind::Symbol && r.is_integer() && r.is_negative() &&
            (base == Expr::psi() || base == Expr::psi_star())) {
          in.op = Op::InvPow;
          in.f1 = base.symbol_value().field();
          in.k = -r.num();
          return push(in);
        }
        in.a = emit(base);
        if (r.is_integer()) {
          in.op = Op::PowInt;
          in.k = r.num();
        } else {
          in.op = Op::PowReal;
          in.r = r.to_double();
        }
        return push(in);
      }
      case NodeKind::Product: {
        if (e == density_expr()) {
          in.op = Op::Density;
          return push(in);
        }
        int acc = emit(e.children().front());
        for (std::size_t j = 1; j < e.children().size(); ++j) acc = binary(Op::Mul, acc, emit(e.children()[j]));
        return acc;
      }
      case NodeKind::Sum: {
        int acc = emit(e.children().front());
        for (std::size_t j = 1; j < e.children().size(); ++j) acc = binary(Op::Add, acc, emit(e.children()[j]));
        return acc;
      }
    }
    throw CompileError("unsupported expression node");
  }

  CompiledExpr::Program& p_;
  const ConstantBindings& bindings_;
  std::map<Expr, int> memo_;
};

const char* kSingular = "nonlinearity singular at zero amplitude";

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, const ConstantBindings& bindings, int dimension, double epsilon)
    : program_(std::make_unique<Program>()) {
  if (!(epsilon >= 0)) throw CompileError("regularization epsilon must be nonnegative");
  program_->source = canonicalize(e);
  program_->dimension = dimension;
  program_->epsilon = epsilon;
  Emitter emitter(*program_, bindings);
  program_->result = emitter.emit(program_->source);
}

CompiledExpr::~CompiledExpr() = default;
CompiledExpr::CompiledExpr(CompiledExpr&&) noexcept = default;
CompiledExpr& CompiledExpr::operator=(CompiledExpr&&) noexcept = default;

bool CompiledExpr::needs_gradients() const { return program_->gradients; }
bool CompiledExpr::needs_laplacians() const { return program_->laplacians; }
bool CompiledExpr::uses_potential() const { return program_->potential; }
const Expr& CompiledExpr::source() const { return program_->source; }
std::size_t CompiledExpr::instruction_count() const { return program_->code.size(); }

ComplexField CompiledExpr::evaluate(const FieldGrid& field, const ComplexField& potential, const Spectral& spectral,
                                    EvalStats* stats) const {
  const Program& p = *program_;
  if (field.dimension != p.dimension)
    throw std::invalid_argument(
        fmt::format("grid dimension {} does not match compiled dimension {}", field.dimension, p.dimension));
  const std::size_t n = field.size();
  const ComplexField& psi = field.samples;
  if (p.potential && potential.size() != n) throw std::invalid_argument("potential is not sampled on the grid");

  std::vector<ComplexField> grad;  // grad psi per axis
  ComplexField lap;
  if (p.gradients)
    for (int axis = 0; axis < p.dimension; ++axis) grad.push_back(spectral.derivative(psi, axis));
  if (p.laplacians) lap = spectral.laplacian(psi);

  auto grad_value = [&](Field f, int axis, std::size_t j) {
    const cdouble g = grad[static_cast<std::size_t>(axis)][j];
    return f == Field::Psi ? g : std::conj(g);
  };
  auto lap_value = [&](Field f, std::size_t j) { return f == Field::Psi ? lap[j] : std::conj(lap[j]); };
  auto value = [&](Field f, std::size_t j) { return f == Field::Psi ? psi[j] : std::conj(psi[j]); };

  std::vector<ComplexField> buf(p.code.size());
  for (std::size_t idx = 0; idx < p.code.size(); ++idx) {
    const Instr& in = p.code[idx];
    ComplexField& out = buf[idx];
    out.resize(n);
    const ComplexField* A = in.a >= 0 ? &buf[static_cast<std::size_t>(in.a)] : nullptr;
    const ComplexField* B = in.b >= 0 ? &buf[static_cast<std::size_t>(in.b)] : nullptr;
    for (std::size_t j = 0; j < n; ++j) {
      cdouble v;
      switch (in.op) {
        case Op::Const: v = in.c; break;
        case Op::Psi: v = psi[j]; break;
        case Op::PsiStar: v = std::conj(psi[j]); break;
        case Op::LapPsi: v = lap[j]; break;
        case Op::LapPsiStar: v = std::conj(lap[j]); break;
        case Op::Grad: v = grad_value(in.f1, in.axis, j); break;
        case Op::Potential: v = potential[j]; break;
        case Op::DotGrad:
          v = 0;
          for (int axis = 0; axis < p.dimension; ++axis) v += grad_value(in.f1, axis, j) * grad_value(in.f2, axis, j);
          break;
        case Op::Hess1D:
          v = lap_value(in.f1, j) * grad_value(in.f2, 0, j) * grad_value(in.f3, 0, j);
          break;
        case Op::Density: v = std::norm(psi[j]); break;
        case Op::InvPow: {
          const double d = std::norm(psi[j]);
          if (d == 0 && p.epsilon == 0) throw EvaluationError(kSingular, j);
          const double shifted = d + p.epsilon;
          if (stats != nullptr && shifted != d) ++stats->regularization_hits;
          const cdouble num = value(conj(in.f1), j);
          cdouble acc = 1;
          for (std::int64_t q = 0; q < in.k; ++q) acc *= num / shifted;
          v = acc;
          break;
        }
        case Op::LogDensity: {
          const double d = std::norm(psi[j]);
          if (d == 0 && p.epsilon == 0) throw EvaluationError(kSingular, j);
          const double shifted = d + p.epsilon;
          if (stats != nullptr && shifted != d) ++stats->regularization_hits;
          v = std::log(shifted);
          break;
        }
        case Op::LogPhase:
          if (psi[j] == cdouble{}) throw EvaluationError(kSingular, j);
          v = cdouble(0, 2.0 * static_cast<double>(in.k) * std::arg(psi[j]));
          break;
        case Op::Add: v = (*A)[j] + (*B)[j]; break;
        case Op::Mul: v = (*A)[j] * (*B)[j]; break;
        case Op::PowInt: {
          cdouble acc = 1;
          const std::int64_t m = in.k < 0 ? -in.k : in.k;
          for (std::int64_t q = 0; q < m; ++q) acc *= (*A)[j];
          v = in.k < 0 ? 1.0 / acc : acc;
          break;
        }
        case Op::PowReal: {
          const cdouble x = (*A)[j];
          v = x.imag() == 0 && x.real() >= 0 ? cdouble(std::pow(x.real(), in.r)) : std::pow(x, in.r);
          break;
        }
        case Op::Log: v = std::log((*A)[j]); break;
      }
      out[j] = v;
    }
  }
  ComplexField result = std::move(buf[static_cast<std::size_t>(p.result)]);
  for (std::size_t j = 0; j < n; ++j)
    if (!std::isfinite(result[j].real()) || !std::isfinite(result[j].imag()))
      throw EvaluationError(fmt::format("non-finite right-hand side at node {}", j), j);
  return result;
}

// ---------------------------------------------------------------------------

CompiledRHS CompiledRHS::compile(const EvolutionEquation& eq, const ConstantBindings& bindings, int dimension,
                                 double epsilon) {
  if (dimension != 1 && dimension != 2) throw CompileError("grid dimension must be 1 or 2");
  for (const char* name : {"hbar", "m"})
    if (bindings.find(name) == bindings.end()) throw CompileError(fmt::format("unbound constant '{}'", name));
  CompiledRHS rhs;
  rhs.eq_ = eq.dimension == dimension ? eq : derive_equation(eq.lagrangian, dimension);
  if (rhs.eq_.residual && dimension > 1)
    throw CompileError(fmt::format(
        "Hessian terms cannot be evaluated in dimension {}; the derived form is exact only in one dimension",
        dimension));
  rhs.bindings_ = bindings;
  rhs.dimension_ = dimension;
  rhs.epsilon_ = epsilon;
  rhs.locality_ = has_spatial_derivatives(rhs.eq_.nonlinearity) ? Locality::DerivativeCoupled
                                                                 : Locality::PointwiseLocal;
  rhs.full_ = std::make_shared<CompiledExpr>(rhs.eq_.raw_form, bindings, dimension, epsilon);
  rhs.nonlinear_ = std::make_shared<CompiledExpr>(rhs.eq_.nonlinearity, bindings, dimension, epsilon);
  return rhs;
}

ComplexField CompiledRHS::evaluate(const FieldGrid& field, const ComplexField& potential, const Spectral& spectral,
                                   EvalStats* stats) const {
  return full_->evaluate(field, potential, spectral, stats);
}

ComplexField CompiledRHS::nonlinearity(const FieldGrid& field, const ComplexField& potential,
                                       const Spectral& spectral, EvalStats* stats) const {
  return nonlinear_->evaluate(field, potential, spectral, stats);
}

cdouble CompiledRHS::kinetic_coefficient() const {
  const cdouble h = hbar();
  return -h * h / (2.0 * mass());
}

bool depends_only_on_density(const Expr& e) {
  const Expr density = density_expr();
  for (const auto& t : terms_of(canonicalize(e))) {
    std::vector<Expr> factors =
        t.shape.kind() == NodeKind::Product ? t.shape.children() : std::vector<Expr>{t.shape};
    Rational a, b;
    for (const auto& f : factors) {
      const Expr& key = f.kind() == NodeKind::Pow ? f.base() : f;
      const Rational r = f.kind() == NodeKind::Pow ? f.exponent() : Rational(1);
      if (key == Expr::psi()) {
        a += r;
      } else if (key == Expr::psi_star()) {
        b += r;
      } else if (key == density) {
      } else if (key.kind() == NodeKind::Log && key.arg() == density) {
      } else if (has_field_dependence(key) || has_time_derivatives(key)) {
        return false;
      }
    }
    if (a != b) return false;
  }
  return true;
}

}  // namespace nlse
