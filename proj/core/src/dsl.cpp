#include "nlse/dsl.hpp"

#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include <fmt/format.h>

namespace nlse {
namespace {

enum class Tok {
  Number,
  Ident,
  TimeDeriv,
  LParen,
  RParen,
  Comma,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  Conj,      // ^*
  PostStar,  // psi* / a* postfix conjugation
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
  Field field = Field::Psi;  // TimeDeriv only
};

struct ParseError {
  SourceSpan span;
  std::string message;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.span = here(1);
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        if (!out.empty()) t.span = {out.back().span.line, out.back().span.column + out.back().span.length - 1, 1};
        out.push_back(t);
        return out;
      }
      const char c = text_[pos_];
      if (c == 'd' && lex_time_derivative(t)) {
        out.push_back(t);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.') {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '.'))
          advance();
        t.kind = Tok::Number;
        t.text = std::string(text_.substr(start, pos_ - start));
        t.span.length = static_cast<int>(pos_ - start);
        out.push_back(t);
        continue;
      }
      if (ident_start(c)) {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(start, pos_ - start));
        t.span.length = static_cast<int>(pos_ - start);
        out.push_back(t);
        continue;
      }
      switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case ',': t.kind = Tok::Comma; break;
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '/': t.kind = Tok::Slash; break;
        case '^':
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
            t.kind = Tok::Conj;
            t.span.length = 2;
            advance();
          } else {
            t.kind = Tok::Caret;
          }
          break;
        case '*':
          t.kind = postfix_star_allowed(out) ? Tok::PostStar : Tok::Star;
          break;
        default:
          throw ParseError{t.span, fmt::format("unexpected character '{}'", c)};
      }
      advance();
      out.push_back(t);
    }
  }

private:
  SourceSpan here(int length) const { return {line_, col_, length}; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) advance();
  }

  bool lex_time_derivative(Token& t) {
    static const std::pair<std::string_view, Field> forms[] = {
        {"dpsi^*/dt", Field::PsiStar}, {"dpsi*/dt", Field::PsiStar}, {"dpsi/dt", Field::Psi}};
    for (const auto& [form, field] : forms) {
      if (text_.substr(pos_, form.size()) != form) continue;
      const std::size_t end = pos_ + form.size();
      if (end < text_.size() && ident_char(text_[end])) continue;
      t.kind = Tok::TimeDeriv;
      t.field = field;
      t.text = std::string(form);
      t.span.length = static_cast<int>(form.size());
      for (std::size_t k = 0; k < form.size(); ++k) advance();
      return true;
    }
    return false;
  }

  bool postfix_star_allowed(const std::vector<Token>& out) const {
    if (out.empty()) return false;
    const Tok prev = out.back().kind;
    if (prev != Tok::Ident && prev != Tok::RParen && prev != Tok::Conj) return false;
    std::size_t k = pos_ + 1;
    while (k < text_.size() && std::isspace(static_cast<unsigned char>(text_[k])) != 0) ++k;
    if (k >= text_.size()) return true;
    const char n = text_[k];
    return !(std::isalnum(static_cast<unsigned char>(n)) != 0 || n == '_' || n == '.' || n == '(');
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

/// Scalar or vector-valued intermediate.
struct Value {
  std::optional<Expr> scalar;
  std::optional<VectorExpr> vec;

  static Value of(Expr e) { return {std::move(e), std::nullopt}; }
  static Value of(VectorExpr v) { return {std::nullopt, std::move(v)}; }
  bool is_vector() const { return vec.has_value(); }
};

VectorExpr conjugate(const VectorExpr& v) {
  VectorExpr out;
  for (const auto& g : v.grads) out.grads.push_back({nlse::conjugate(g.coeff), conj(g.field)});
  for (const auto& h : v.hess)
    out.hess.push_back({nlse::conjugate(h.coeff), conj(h.hess_of), conj(h.applied_to)});
  return out;
}

SourceSpan cover(const SourceSpan& a, const SourceSpan& b) {
  if (a.line != b.line) return a;
  return {a.line, a.column, std::max(1, b.column + b.length - a.column)};
}

Rational parse_decimal(const Token& t) {
  const std::string& s = t.text;
  const auto dot = s.find('.');
  if (s.find('.', dot == std::string::npos ? s.size() : dot + 1) != std::string::npos || s == ".")
    throw ParseError{t.span, fmt::format("malformed number '{}'", s)};
  std::string digits = s;
  std::int64_t den = 1;
  if (dot != std::string::npos) {
    const std::size_t frac = s.size() - dot - 1;
    if (frac > 15) throw ParseError{t.span, "too many decimal digits"};
    digits.erase(dot, 1);
    for (std::size_t k = 0; k < frac; ++k) den *= 10;
  }
  if (digits.size() > 18) throw ParseError{t.span, "number too large"};
  return {std::stoll(digits.empty() ? "0" : digits), den};
}

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Expr parse_all() {
    if (peek().kind == Tok::End) throw ParseError{peek().span, "empty expression"};
    const SourceSpan start = peek().span;
    Value v = expr();
    if (peek().kind == Tok::RParen) throw ParseError{peek().span, "unbalanced parentheses: unexpected ')'"};
    if (peek().kind != Tok::End)
      throw ParseError{peek().span, fmt::format("unexpected '{}'", describe(peek()))};
    if (v.is_vector())
      throw ParseError{cover(start, toks_[pos_ > 0 ? pos_ - 1 : 0].span),
                       "expression is a vector; a Lagrangian density must be scalar"};
    return canonicalize(*v.scalar);
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::Conj: return "^*";
      case Tok::PostStar:
      case Tok::Star: return "*";
      case Tok::LParen: return "(";
      case Tok::RParen: return ")";
      case Tok::Comma: return ",";
      case Tok::Plus: return "+";
      case Tok::Minus: return "-";
      case Tok::Slash: return "/";
      case Tok::Caret: return "^";
      default: return t.text;
    }
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) {
      if (kind == Tok::RParen)
        throw ParseError{peek().span, fmt::format("unbalanced parentheses: expected ')' before {}",
                                                  peek().kind == Tok::End ? "end of input"
                                                                          : "'" + describe(peek()) + "'")};
      throw ParseError{peek().span, fmt::format("expected {} but found '{}'", what, describe(peek()))};
    }
    return take();
  }

  static Value add(const Value& a, const Value& b, bool subtract, const SourceSpan& at) {
    if (a.is_vector() != b.is_vector()) throw ParseError{at, "cannot add a scalar and a vector"};
    if (a.is_vector()) return Value::of(*a.vec + (subtract ? -*b.vec : *b.vec));
    return Value::of(subtract ? *a.scalar - *b.scalar : *a.scalar + *b.scalar);
  }

  static Value multiply(const Value& a, const Value& b) {
    if (a.is_vector() && b.is_vector()) return Value::of(dot(*a.vec, *b.vec));
    if (a.is_vector()) return Value::of(*b.scalar * *a.vec);
    if (b.is_vector()) return Value::of(*a.scalar * *b.vec);
    return Value::of(*a.scalar * *b.scalar);
  }

  Value expr() {
    Value acc = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Token op = take();
      acc = add(acc, term(), op.kind == Tok::Minus, op.span);
    }
    return acc;
  }

  Value term() {
    bool negate = false;
    while (peek().kind == Tok::Minus || peek().kind == Tok::Plus) {
      if (take().kind == Tok::Minus) negate = !negate;
    }
    Value acc = power();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token op = take();
      Value rhs = power();
      if (op.kind == Tok::Star) {
        acc = multiply(acc, rhs);
      } else {
        if (rhs.is_vector()) throw ParseError{op.span, "cannot divide by a vector"};
        acc = multiply(acc, Value::of(Expr::pow(*rhs.scalar, -1)));
      }
    }
    if (negate) acc = multiply(Value::of(Expr::number(-1)), acc);
    return acc;
  }

  Value power() {
    Value v = primary();
    while (true) {
      if (peek().kind == Tok::Conj || peek().kind == Tok::PostStar) {
        take();
        v = v.is_vector() ? Value::of(conjugate(*v.vec)) : Value::of(conjugate_scalar(*v.scalar));
        continue;
      }
      if (peek().kind == Tok::Caret) {
        const Token caret = take();
        const Rational r = exponent(caret);
        if (v.is_vector()) {
          if (!r.is_integer() || r.num() <= 0 || r.num() % 2 != 0)
            throw ParseError{caret.span, "a vector can only be raised to an even positive power"};
          const Expr sq = dot(*v.vec, *v.vec);
          v = Value::of(Expr::pow(sq, Rational(r.num() / 2)));
        } else {
          v = Value::of(Expr::pow(*v.scalar, r));
        }
        continue;
      }
      return v;
    }
  }

  static Expr conjugate_scalar(const Expr& e) {
    if (e.kind() == NodeKind::Constant) return Expr::constant(e.constant_name(), !e.constant_conjugated());
    return nlse::conjugate(e);
  }

  Rational exponent(const Token& caret) {
    const Token& t = peek();
    auto non_rational = [&](const SourceSpan& span) {
      return ParseError{span, "non-rational exponent"};
    };
    auto integer = [&](const Token& tok) -> std::int64_t {
      if (tok.kind != Tok::Number) throw non_rational(tok.span);
      if (tok.text.find('.') != std::string::npos) throw non_rational(tok.span);
      if (tok.text.size() > 18) throw ParseError{tok.span, "exponent too large"};
      return std::stoll(tok.text);
    };
    if (t.kind == Tok::Caret) throw ParseError{cover(caret.span, t.span), "unexpected '^' in exponent"};
    if (t.kind == Tok::Number) return integer(take());
    if (t.kind == Tok::Minus) {
      take();
      return -integer(take());
    }
    if (t.kind == Tok::LParen) {
      take();
      bool neg = false;
      while (peek().kind == Tok::Minus || peek().kind == Tok::Plus)
        if (take().kind == Tok::Minus) neg = !neg;
      std::int64_t num = integer(take());
      std::int64_t den = 1;
      if (peek().kind == Tok::Slash) {
        take();
        den = integer(take());
        if (den == 0) throw ParseError{caret.span, "zero denominator in exponent"};
      }
      if (peek().kind != Tok::RParen) {
        if (peek().kind == Tok::End) throw ParseError{peek().span, "unbalanced parentheses: expected ')'"};
        throw non_rational(peek().span);
      }
      take();
      return {neg ? -num : num, den};
    }
    if (t.kind == Tok::End) throw ParseError{caret.span, "missing exponent after '^'"};
    throw non_rational(t.span);
  }

  Value primary() {
    const Token t = take();
    switch (t.kind) {
      case Tok::Number:
        return Value::of(Expr::number(parse_decimal(t)));
      case Tok::TimeDeriv:
        return Value::of(Expr::symbol(FieldSymbol::time_derivative(t.field)));
      case Tok::LParen: {
        if (peek().kind == Tok::RParen) throw ParseError{peek().span, "empty parentheses"};
        Value v = expr();
        expect(Tok::RParen, "')'");
        return v;
      }
      case Tok::Ident:
        return identifier(t);
      case Tok::RParen:
        throw ParseError{t.span, "unbalanced parentheses: unexpected ')'"};
      case Tok::End:
        throw ParseError{t.span, "unexpected end of input"};
      default:
        throw ParseError{t.span, fmt::format("unexpected '{}'", describe(t))};
    }
  }

  std::vector<Value> call_args(const Token& name, std::size_t count) {
    if (peek().kind != Tok::LParen)
      throw ParseError{name.span, fmt::format("'{}' must be followed by '('", name.text)};
    take();
    std::vector<Value> args;
    args.push_back(expr());
    while (peek().kind == Tok::Comma) {
      take();
      args.push_back(expr());
    }
    expect(Tok::RParen, "')'");
    if (args.size() != count)
      throw ParseError{name.span, fmt::format("'{}' takes {} argument{}", name.text, count, count == 1 ? "" : "s")};
    return args;
  }

  static Expr scalar_arg(const Value& v, const Token& name) {
    if (v.is_vector()) throw ParseError{name.span, fmt::format("'{}' needs a scalar argument", name.text)};
    return *v.scalar;
  }

  static VectorExpr vector_arg(const Value& v, const Token& name) {
    if (!v.is_vector()) throw ParseError{name.span, fmt::format("'{}' needs vector arguments", name.text)};
    return *v.vec;
  }

  static Field field_arg(const Value& v, const Token& name) {
    if (!v.is_vector()) {
      const Expr e = canonicalize(*v.scalar);
      if (e == Expr::psi()) return Field::Psi;
      if (e == Expr::psi_star()) return Field::PsiStar;
    }
    throw ParseError{name.span, fmt::format("'{}' arguments must be psi or psi^*", name.text)};
  }

  Value identifier(const Token& t) {
    const std::string& n = t.text;
    try {
      if (n == "psi") return Value::of(Expr::psi());
      if (n == "i") return Value::of(Expr::i());
      if (n == "hbar") return Value::of(Expr::hbar());
      if (n == "m") return Value::of(Expr::mass());
      if (n == "V") return Value::of(Expr::potential());
      if (n == "ln") {
        const Expr arg = scalar_arg(call_args(t, 1)[0], t);
        return Value::of(canonicalize(Expr::log(arg)));
      }
      if (n == "conj") {
        const Value v = call_args(t, 1)[0];
        return v.is_vector() ? Value::of(conjugate(*v.vec)) : Value::of(nlse::conjugate(*v.scalar));
      }
      if (n == "grad") return Value::of(gradient(scalar_arg(call_args(t, 1)[0], t)));
      if (n == "lap") return Value::of(divergence(gradient(scalar_arg(call_args(t, 1)[0], t))));
      if (n == "dot") {
        const auto args = call_args(t, 2);
        return Value::of(dot(vector_arg(args[0], t), vector_arg(args[1], t)));
      }
      if (n == "hess") {
        const auto args = call_args(t, 3);
        return Value::of(Expr::hess_form(field_arg(args[0], t), field_arg(args[1], t), field_arg(args[2], t)));
      }
      if (n.size() == 2 && n[0] == 'd' && n[1] >= '1' && n[1] <= '9' && peek().kind == Tok::LParen) {
        const Field f = field_arg(call_args(t, 1)[0], t);
        return Value::of(Expr::symbol(FieldSymbol::grad(f, n[1] - '0')));
      }
    } catch (const UnsupportedExpression& e) {
      throw ParseError{t.span, e.what()};
    }
    if (is_coupling_name(n)) return Value::of(Expr::constant(n));
    throw ParseError{t.span, fmt::format("unknown identifier '{}'", n)};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printing

std::string rational_atom(const Rational& r) {
  if (r.is_integer() && !r.is_negative()) return r.str();
  return "(" + r.str() + ")";
}

std::string number_str(const ComplexRational& c) {
  if (c.is_real()) return rational_atom(c.re);
  if (c.re.is_zero()) {
    if (c.im == Rational(1)) return "i";
    if (c.im == Rational(-1)) return "(-i)";
    return "(" + rational_atom(c.im) + "*i)";
  }
  const bool neg = c.im.is_negative();
  const Rational mag = neg ? -c.im : c.im;
  const std::string im = mag == Rational(1) ? "i" : rational_atom(mag) + "*i";
  return "(" + c.re.str() + (neg ? " - " : " + ") + im + ")";
}

std::string field_name(Field f) { return f == Field::Psi ? "psi" : "psi^*"; }

std::string symbol_str(const FieldSymbol& s) {
  switch (s.kind) {
    case SymbolKind::Psi: return "psi";
    case SymbolKind::PsiStar: return "psi^*";
    case SymbolKind::PsiDot: return "dpsi/dt";
    case SymbolKind::PsiStarDot: return "dpsi^*/dt";
    case SymbolKind::LaplacianPsi: return "lap(psi)";
    case SymbolKind::LaplacianPsiStar: return "lap(psi^*)";
    case SymbolKind::GradPsi: return fmt::format("d{}(psi)", s.axis);
    case SymbolKind::GradPsiStar: return fmt::format("d{}(psi^*)", s.axis);
  }
  return "?";
}

std::string print(const Expr& e, int prec);

bool negative_real(const ComplexRational& c) { return c.is_real() && c.re.is_negative(); }

/// Splits a leading negative real coefficient off a summand.
bool split_negative(const Expr& t, Expr& negated) {
  if (t.is_number() && negative_real(t.number_value())) {
    negated = Expr::number(-t.number_value());
    return true;
  }
  if (t.kind() == NodeKind::Product && t.children().front().is_number() &&
      negative_real(t.children().front().number_value())) {
    std::vector<Expr> f = t.children();
    const ComplexRational c = -f.front().number_value();
    if (c.is_one()) {
      f.erase(f.begin());
    } else {
      f.front() = Expr::number(c);
    }
    negated = Expr::product(std::move(f));
    return true;
  }
  return false;
}

std::string print_product(const Expr& e) {
  std::string out;
  bool prev_conj = false;
  for (const auto& c : e.children()) {
    std::string s = print(c, 3);
    if (!out.empty()) out += prev_conj ? " * " : "*";
    prev_conj = !s.empty() && s.back() == '*';
    out += s;
  }
  return out;
}

std::string print(const Expr& e, int prec) {
  switch (e.kind()) {
    case NodeKind::Number:
      return number_str(e.number_value());
    case NodeKind::Symbol:
      return symbol_str(e.symbol_value());
    case NodeKind::Constant:
      return e.constant_name() + (e.constant_conjugated() ? "^*" : "");
    case NodeKind::DotGrad:
      return fmt::format("dot(grad({}),grad({}))", field_name(e.fields()[0]), field_name(e.fields()[1]));
    case NodeKind::HessForm:
      return fmt::format("hess({},{},{})", field_name(e.fields()[0]), field_name(e.fields()[1]),
                         field_name(e.fields()[2]));
    case NodeKind::Log:
      return "ln(" + print(e.arg(), 0) + ")";
    case NodeKind::Pow: {
      const Expr& b = e.base();
      std::string base = print(b, 4);
      if (b.kind() == NodeKind::Pow) base = "(" + base + ")";
      return base + "^" + rational_atom(e.exponent());
    }
    case NodeKind::Product: {
      Expr negated;
      if (prec <= 1 && split_negative(e, negated)) return "-" + print(negated, 2);
      std::string s = print_product(e);
      return prec > 2 ? "(" + s + ")" : s;
    }
    case NodeKind::Sum: {
      std::string s;
      for (const auto& t : e.children()) {
        Expr negated;
        if (split_negative(t, negated)) {
          s += s.empty() ? "-" : " - ";
          s += print(negated, 2);
        } else {
          if (!s.empty()) s += " + ";
          s += print(t, 2);
        }
      }
      return prec > 1 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

}  // namespace

std::string ParseResult::format_diagnostics(std::string_view source_name) const {
  std::string out;
  for (const auto& d : diagnostics) {
    out += fmt::format("{}:{}:{}: {}: {}\n", source_name, d.span.line, d.span.column,
                       d.severity == Severity::Error ? "error" : "warning", d.message);
  }
  return out;
}

bool is_coupling_name(std::string_view name) {
  static const std::regex pattern("[a-g]([0-9]+|_[A-Za-z0-9_]+)?'*");
  return std::regex_match(name.begin(), name.end(), pattern);
}

ParseResult parse(std::string_view text) {
  ParseResult result;
  try {
    Lexer lexer(text);
    Parser parser(lexer.run());
    result.expr = parser.parse_all();
  } catch (const ParseError& e) {
    result.diagnostics.push_back({e.span, e.message, Severity::Error});
  } catch (const UnsupportedExpression& e) {
    result.diagnostics.push_back({{1, 1, std::max<int>(1, static_cast<int>(text.size()))}, e.what(), Severity::Error});
  } catch (const std::domain_error& e) {
    result.diagnostics.push_back({{1, 1, std::max<int>(1, static_cast<int>(text.size()))}, e.what(), Severity::Error});
  } catch (const std::overflow_error& e) {
    result.diagnostics.push_back({{1, 1, std::max<int>(1, static_cast<int>(text.size()))},
                                  std::string("arithmetic overflow: ") + e.what(), Severity::Error});
  }
  return result;
}

ParseResult parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back({{1, 1, 1}, "no such file: " + path, Severity::Error});
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  bool comment = false;
  for (char& c : text) {
    if (c == '\n') {
      comment = false;
    } else if (c == '#') {
      comment = true;
    }
    if (comment) c = ' ';
  }
  return parse(text);
}

std::string pretty_print(const Expr& e) { return print(e, 0); }

}  // namespace nlse
