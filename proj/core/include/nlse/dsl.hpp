#pragma once

// Text format for Lagrangian densities.
//
//   psi, psi^*, psi*           the field and its conjugate
//   dpsi/dt, dpsi^*/dt         time derivatives
//   grad(e), lap(e), dot(u, v) spatial operators (grad(f)^2 = dot(grad f, grad f))
//   hess(a, u, v)              grad u . H(a) . grad v
//   d1(psi), d2(psi^*), ...    explicit gradient components
//   ln(e), conj(e), i, hbar, m, V
//   a, b, c2, g_1, f', ...     coupling constants; a^* or a* is the conjugate
//
// Exponents are integers or parenthesized rationals such as (3/2).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlse/expr.hpp"

namespace nlse {

struct SourceSpan {
  int line = 1;
  int column = 1;  // 1-based
  int length = 1;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  SourceSpan span;
  std::string message;
  Severity severity = Severity::Error;
};

struct ParseResult {
  std::optional<Expr> expr;  // canonical; empty iff an error was reported
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return expr.has_value(); }
  /// "line:col: error: message" lines.
  std::string format_diagnostics(std::string_view source_name = "<input>") const;
};

ParseResult parse(std::string_view text);

/// Parses a .lag file; '#' starts a comment running to end of line.
ParseResult parse_file(const std::string& path);

/// Prints an expression so that parse(pretty_print(e)) is structurally equal
/// to e. The output is deterministic for canonical input.
std::string pretty_print(const Expr& e);

/// True for names accepted as coupling constants.
bool is_coupling_name(std::string_view name);

}  // namespace nlse
