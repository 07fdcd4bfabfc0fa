#include <doctest.h>

#include <random>

#include "nlse/dsl.hpp"
#include "nlse/grid.hpp"
#include "nlse/variational.hpp"

using namespace nlse;

namespace {

Expr P(std::string_view text) {
  auto r = parse(text);
  REQUIRE_MESSAGE(r.ok(), r.format_diagnostics());
  return *r.expr;
}

Expr corpus(const std::string& name) {
  auto r = parse_file(std::string(NLSE_TEST_CORPUS) + "/" + name);
  REQUIRE_MESSAGE(r.ok(), r.format_diagnostics(name));
  return *r.expr;
}

const char* kLinear = "i*hbar*psi^* * dpsi/dt - (hbar^2/(2*m))*dot(grad(psi^*),grad(psi)) - V*psi^* * psi";
const char* kKinetic = "-(hbar^2/(2*m))*lap(psi) + V*psi";

Expr with_linear(const std::string& nonlinearity) { return P(std::string(kKinetic) + " + " + nonlinearity); }

// Replaces conjugated couplings by their unconjugated names (real couplings).
Expr realify(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant: return Expr::constant(e.constant_name());
    case NodeKind::Log: return Expr::log(realify(e.arg()));
    case NodeKind::Pow: return Expr::pow(realify(e.base()), e.exponent());
    case NodeKind::Product:
    case NodeKind::Sum: {
      std::vector<Expr> kids;
      for (const auto& c : e.children()) kids.push_back(realify(c));
      return e.kind() == NodeKind::Sum ? Expr::sum(kids) : Expr::product(kids);
    }
    default: return e;
  }
}

}  // namespace

TEST_CASE("linear recovery") {
  const EvolutionEquation eq = derive_equation(linear_lagrangian());
  CHECK(eq.is_linear());
  CHECK(structural_equal(eq.kinetic_coefficient, P("-(hbar^2/(2*m))")));
  CHECK(eq.potential_present);
  CHECK(eq.derived_for == Field::Psi);
  CHECK(structural_equal(eq.raw_form, P(kKinetic)));
  CHECK_FALSE(has_time_derivatives(eq.raw_form));
  CHECK(structural_equal(euler_lagrange(linear_lagrangian(), Field::Psi), P("-(hbar^2/(2*m))*lap(psi^*) + V*psi^*")));
  CHECK(structural_equal(linear_lagrangian(), P(kLinear)));
}

TEST_CASE("varying psi for the density-weighted gradient term") {
  const Expr l = P(std::string(kLinear) + " + a*dot(grad(psi^*),grad(psi))*psi^* * psi");
  const Expr r = euler_lagrange(l, Field::Psi);
  CHECK(structural_equal(r, P("-(hbar^2/(2*m))*lap(psi^*) + V*psi^* - a*dot(grad(psi^*),grad(psi))*psi^*"
                              " + a*dot(grad(psi^* * psi), grad(psi^*)) + a*psi^* * psi*lap(psi^*)")));
}

TEST_CASE("derivation errors") {
  CHECK_THROWS_WITH_AS(derive_equation(P("a*psi*psi^*")), doctest::Contains("no canonical time term"),
                       DerivationError);
  CHECK_THROWS_WITH_AS(derive_equation(P("3")), doctest::Contains("no canonical time term"), DerivationError);
  CHECK_THROWS_WITH_AS(derive_equation(P("2*i*hbar*psi^* * dpsi/dt - V*psi^* * psi")),
                       doctest::Contains("nonstandard symplectic structure"), DerivationError);
  CHECK_THROWS_WITH_AS(derive_equation(P(std::string(kLinear) + " + a*psi*dpsi/dt")),
                       doctest::Contains("nonstandard symplectic structure"), DerivationError);
}

TEST_CASE("corpus nonlinearities") {
  struct Case {
    const char* file;
    int dimension;
    const char* n;
  };
  const Case cases[] = {
      {"gradient_density.lag", 3,
       "- a^* * dot(grad(psi^*), grad(psi))*psi + a^* * dot(grad(psi^* * psi), grad(psi)) + a^* * psi^* * psi*lap(psi)"},
      {"gradient_quartic.lag", 1,
       "4*b^* * lap(psi)*dot(grad(psi), grad(psi^*)) + 2*b^* * dot(grad(psi), grad(psi))*lap(psi^*)"},
      {"log_power_m3.lag", 3, "-3*c^* * psi/(psi^* * psi)"},
      {"root_n3.lag", 3, "-(1/3)*d^* * (psi^* * psi)^(-2/3)*psi"},
      {"gp_m2.lag", 3, "-2*e^* * (psi^* * psi)*psi"},
      {"quintic_m3.lag", 3, "-3*e^* * (psi^* * psi)^2*psi"},
      {"power_m4.lag", 3, "-4*e^* * (psi^* * psi)^3*psi"},
      {"log_density.lag", 3, "-f^* * ln(psi^* * psi)*psi - f^* * psi"},
      {"phase_log.lag", 3, "-g^* * ln(psi^*/psi)*psi - g^* * psi"},
  };
  for (const auto& c : cases) {
    INFO(c.file);
    const EvolutionEquation eq = derive_equation(corpus(c.file), c.dimension);
    CHECK(structural_equal(eq.nonlinearity, P(c.n)));
    CHECK(structural_equal(eq.kinetic_coefficient, P("-(hbar^2/(2*m))")));
    CHECK(eq.potential_present);
    CHECK_FALSE(eq.residual);
  }
  const EvolutionEquation quartic3 = derive_equation(corpus("gradient_quartic.lag"), 3);
  CHECK(quartic3.residual);
  CHECK(has_residual(quartic3.nonlinearity));
}

TEST_CASE("general power law (psi^* psi)^m") {
  for (int m = 2; m <= 6; ++m) {
    const Expr l = canonicalize(P(kLinear) + Expr::constant("e") * Expr::pow(Expr::psi_star() * Expr::psi(), m));
    const Expr expected = canonicalize(Expr::number(-m) * Expr::constant("e", true) *
                                       Expr::pow(Expr::psi_star() * Expr::psi(), m - 1) * Expr::psi());
    CHECK(structural_equal(derive_equation(l).nonlinearity, expected));
  }
}

TEST_CASE("verification against hand-entered references") {
  const auto eq17 = derive_equation(corpus("gradient_density.lag"));
  const auto r17 = verify_against_reference(
      eq17, with_linear("- a^* * dot(grad(psi^*),grad(psi))*psi + a^* * dot(grad(psi^* * psi),grad(psi)) + a^* * "
                        "(psi^* * psi)*lap(psi)"),
      "Eq17");
  CHECK(r17.exact());

  const auto eq23 = derive_equation(corpus("gradient_quartic.lag"), 1);
  CHECK(verify_against_reference(
            eq23, with_linear("4*b^* * lap(psi)*dot(grad(psi),grad(psi^*)) + 2*b^* * grad(psi)^2*lap(psi^*)"), "Eq23")
            .exact());

  const auto eq46 = derive_equation(corpus("log_density.lag"));
  const auto r46 = verify_against_reference(eq46, with_linear("- f^* * ln(psi^* * psi)*psi + f^* * psi"), "Eq46");
  CHECK_FALSE(r46.exact());
  CHECK(r46.matches_with_errata());
  REQUIRE(r46.discrepancies.size() == 1);
  CHECK(structural_equal(r46.discrepancies[0].shape, P("f^* * psi")));
  CHECK(r46.discrepancies[0].derived == ComplexRational(-1));
  CHECK(r46.discrepancies[0].reference == ComplexRational(1));
  CHECK(r46.discrepancies[0].erratum == std::optional<std::string>("log-constant-sign"));
  CHECK(r46.missing.empty());
  CHECK(r46.extra.empty());
  CHECK(r46.matched.size() == 3);

  const auto unlabeled = verify_against_reference(eq46, with_linear("- f^* * ln(psi^* * psi)*psi + f^* * psi"));
  CHECK_FALSE(unlabeled.matches_with_errata());

  const auto wrong = verify_against_reference(eq17, with_linear("a^* * psi"), "Eq17");
  CHECK_FALSE(wrong.matches_with_errata());
  CHECK(wrong.missing.size() == 1);
  CHECK(wrong.extra.size() == 2);
  CHECK(wrong.summary().find("missing") != std::string::npos);
}

TEST_CASE("errata registry") {
  const auto& reg = errata_registry();
  auto has = [&](const std::string& eqn) {
    return std::any_of(reg.begin(), reg.end(), [&](const Erratum& e) { return e.equation.find(eqn) != std::string::npos; });
  };
  for (const char* eqn : {"Eq46", "Eq23", "Eq55", "Eq58", "Eq59", "Eq62"}) CHECK(has(eqn));
}

TEST_CASE("conjugation consistency of the two variations") {
  const char* self_conjugate[] = {"linear.lag",   "gradient_density.lag", "gradient_quartic.lag", "log_power_m3.lag",
                                  "root_n3.lag",  "gp_m2.lag",            "quintic_m3.lag",       "log_density.lag"};
  for (const char* file : self_conjugate) {
    INFO(file);
    const Expr l = corpus(file);
    const Expr from_psi = euler_lagrange(l, Field::Psi, 1);
    const Expr from_psi_star = euler_lagrange(l, Field::PsiStar, 1);
    CHECK(structural_equal(realify(conjugate(from_psi)), realify(from_psi_star)));
  }
  const Expr phase = corpus("phase_log.lag");
  CHECK_FALSE(structural_equal(realify(conjugate(euler_lagrange(phase, Field::Psi))),
                               realify(euler_lagrange(phase, Field::PsiStar))));
}

TEST_CASE("gauge covariance of density-dependent nonlinearities") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.3, 1.7);
  for (const char* file : {"log_power_m3.lag", "root_n3.lag", "gp_m2.lag", "quintic_m3.lag", "power_m4.lag",
                           "log_density.lag"}) {
    INFO(file);
    const Expr n = derive_equation(corpus(file)).nonlinearity;
    for (int k = 0; k < 50; ++k) {
      PointValues at;
      for (const char* c : {"c", "d", "e", "f"}) at.constants[c] = {u(rng), u(rng) - 1};
      at.psi = std::polar(u(rng), 2 * u(rng));
      at.psi_star = std::conj(at.psi);
      const std::complex<double> base = evaluate(n, at);
      const std::complex<double> phase = std::polar(1.0, 4 * u(rng));
      at.psi *= phase;
      at.psi_star *= std::conj(phase);
      const std::complex<double> rotated = evaluate(n, at);
      CHECK(std::abs(rotated - phase * base) <= 1e-12 * std::max(1.0, std::abs(base)));
    }
  }
}

TEST_CASE("numeric Euler-Lagrange oracle on a periodic grid") {
  // The static part of the action, S = sum_j L_j dx with dpsi/dt = 0, is
  // perturbed along a smooth periodic direction eta; its derivative must
  // equal -(integral of R eta) where -i hbar dpsi*/dt = R.
  const int n = 64;
  const FieldGrid shape = FieldGrid::make(1, n, 2 * std::numbers::pi);
  const Spectral spectral(shape);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);

  auto smooth = [&](double base) {
    ComplexField f(static_cast<std::size_t>(n));
    std::vector<std::complex<double>> c(4);
    for (auto& x : c) x = {0.15 * u(rng), 0.15 * u(rng)};
    for (int j = 0; j < n; ++j) {
      const double x = shape.coordinate(0, j);
      std::complex<double> v = base;
      for (int k = 1; k <= 3; ++k) v += c[static_cast<std::size_t>(k)] * std::exp(std::complex<double>(0, k * x));
      f[static_cast<std::size_t>(j)] = v;
    }
    return f;
  };

  std::map<std::string, std::complex<double>> constants = {
      {"hbar", 0.9}, {"m", 1.3}, {"V", 0.7}, {"a", {0.3, 0.2}}, {"b", {0.2, -0.1}}, {"c", {0.4, 0.1}},
      {"d", {0.5, -0.3}}, {"e", {0.6, 0.2}}, {"f", {0.35, 0.15}}, {"g", {0.25, 0.45}}};

  auto point = [&](const ComplexField& p, const ComplexField& ps, const ComplexField& px, const ComplexField& psx,
                   const ComplexField& pxx, const ComplexField& psxx, std::size_t j) {
    PointValues at;
    at.psi = p[j];
    at.psi_star = ps[j];
    at.grad_psi = {px[j]};
    at.grad_psi_star = {psx[j]};
    at.lap_psi = pxx[j];
    at.lap_psi_star = psxx[j];
    at.hess_psi = {pxx[j]};
    at.hess_psi_star = {psxx[j]};
    at.constants = constants;
    return at;
  };

  for (const char* file : {"linear.lag", "gradient_density.lag", "gradient_quartic.lag", "log_power_m3.lag",
                           "root_n3.lag", "gp_m2.lag", "quintic_m3.lag", "log_density.lag", "phase_log.lag"}) {
    INFO(file);
    const Expr l = corpus(file);
    const Expr r = euler_lagrange(l, Field::Psi, 1);
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexField psi = smooth(1.0);
      ComplexField psis(psi.size());
      for (std::size_t j = 0; j < psi.size(); ++j) psis[j] = std::conj(psi[j]);
      const ComplexField eta = smooth(0.0);

      auto action = [&](const ComplexField& p) {
        const ComplexField px = spectral.derivative(p, 0), psx = spectral.derivative(psis, 0);
        std::complex<double> s{};
        const ComplexField unused(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) s += evaluate(l, point(p, psis, px, psx, unused, unused, j));
        return s * shape.spacing(0);
      };
      const double eps = 1e-5;
      ComplexField plus = psi, minus = psi;
      for (std::size_t j = 0; j < psi.size(); ++j) {
        plus[j] += eps * eta[j];
        minus[j] -= eps * eta[j];
      }
      const std::complex<double> numeric = (action(plus) - action(minus)) / (2 * eps);

      const ComplexField px = spectral.derivative(psi, 0), psx = spectral.derivative(psis, 0);
      const ComplexField pxx = spectral.laplacian(psi), psxx = spectral.laplacian(psis);
      std::complex<double> symbolic{};
      for (std::size_t j = 0; j < psi.size(); ++j)
        symbolic -= evaluate(r, point(psi, psis, px, psx, pxx, psxx, j)) * eta[j];
      symbolic *= shape.spacing(0);
      CHECK(std::abs(numeric - symbolic) <= 1e-5 * std::abs(symbolic));
    }
  }
}

TEST_CASE("unicode rendering") {
  CHECK(unicode_print(derive_equation(corpus("gp_m2.lag")).nonlinearity) == "−2e*|ψ|²ψ");
  CHECK(unicode_print(derive_equation(corpus("quintic_m3.lag")).nonlinearity) == "−3e*|ψ|⁴ψ");
  const std::string text = unicode_equation(derive_equation(corpus("linear.lag")));
  CHECK(text.find("iħ ∂ψ/∂t") != std::string::npos);
  CHECK(text.find("∇²ψ") != std::string::npos);
}
