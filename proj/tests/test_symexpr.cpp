#include <doctest.h>

#include "nlse/dsl.hpp"
#include "nlse/expr.hpp"
#include "random_expr.hpp"

using namespace nlse;
using nlse::testing::RandomExpr;
using nlse::testing::RandomExprOptions;

namespace {

Expr P(const char* text) {
  auto r = parse(text);
  REQUIRE_MESSAGE(r.ok(), r.format_diagnostics());
  return *r.expr;
}

const Expr psi = Expr::psi();
const Expr psis = Expr::psi_star();
const FieldSymbol S_psi = FieldSymbol::psi();
const FieldSymbol S_psis = FieldSymbol::psi_star();

std::vector<FieldSymbol> symbols_in(const Expr& e) {
  std::vector<FieldSymbol> out;
  contains_if(e, [&](const Expr& n) {
    if (n.kind() == NodeKind::Symbol &&
        std::find(out.begin(), out.end(), n.symbol_value()) == out.end())
      out.push_back(n.symbol_value());
    return false;
  });
  return out;
}

}  // namespace

TEST_CASE("field symbol conjugation is an involution") {
  for (auto k : {SymbolKind::Psi, SymbolKind::PsiStar, SymbolKind::PsiDot, SymbolKind::PsiStarDot,
                 SymbolKind::LaplacianPsi, SymbolKind::LaplacianPsiStar}) {
    const FieldSymbol s{k, 0};
    CHECK(s.conjugate().conjugate() == s);
    CHECK_FALSE(s.conjugate() == s);
  }
  const FieldSymbol g = FieldSymbol::grad(Field::Psi, 2);
  CHECK(g.conjugate() == FieldSymbol::grad(Field::PsiStar, 2));
  CHECK(g.conjugate().conjugate() == g);
  CHECK(FieldSymbol::psi().conjugate() == FieldSymbol::psi_star());
  CHECK_THROWS_AS(FieldSymbol::grad(Field::Psi, 0), std::invalid_argument);
}

TEST_CASE("partial derivatives of the corpus terms") {
  CHECK(structural_equal(partial_wrt(P("-V*psi^* * psi"), S_psi), P("-V*psi^*")));
  CHECK(structural_equal(partial_wrt(P("i*hbar*psi^* * dpsi/dt"), FieldSymbol::psi_dot()), P("i*hbar*psi^*")));
  CHECK(structural_equal(partial_wrt(P("e*(psi^* * psi)^2"), S_psi), P("2*e*(psi^* * psi)*psi^*")));
  CHECK(structural_equal(partial_wrt(P("e*(psi^* * psi)^3"), S_psi), P("3*e*(psi^* * psi)^2*psi^*")));
  CHECK(structural_equal(partial_wrt(P("e*(psi^* * psi)^4"), S_psi), P("4*e*(psi^* * psi)^3*psi^*")));
  CHECK(structural_equal(partial_wrt(P("c*3*ln(psi^* * psi)"), S_psi), P("c*3*psi^*/(psi^* * psi)")));
  CHECK(structural_equal(partial_wrt(P("d*(psi^* * psi)^(1/3)"), S_psi),
                         P("(1/3)*d*(psi^* * psi)^(-2/3)*psi^*")));
  CHECK(partial_wrt(psis, S_psi).is_zero());
  CHECK(partial_wrt(P("a*dot(grad(psi^*), grad(psi))"), S_psi).is_zero());
}

TEST_CASE("partial derivative with respect to a DotGrad atom") {
  const Expr dg = Expr::dot_grad(Field::PsiStar, Field::Psi);
  CHECK(structural_equal(partial_wrt_atom(P("b*dot(grad(psi^*), grad(psi))^2"), dg),
                         P("2*b*dot(grad(psi^*), grad(psi))")));
  CHECK(structural_equal(partial_wrt_atom(P("a*dot(grad(psi^*), grad(psi))*psi*psi^*"), dg), P("a*psi*psi^*")));
}

TEST_CASE("logs of arguments that are not positive definite warn") {
  Warnings w;
  const Expr d = partial_wrt(Expr::log(psi + psis), S_psi, &w);
  CHECK_FALSE(w.empty());
  CHECK(structural_equal(d, Expr::pow(psi + psis, -1)));
  Warnings none;
  partial_wrt(P("f*psi*psi^* * ln(psi*psi^*)"), S_psi, &none);
  partial_wrt(P("g*psi*psi^* * ln(psi/psi^*)"), S_psi, &none);
  CHECK(none.empty());
}

TEST_CASE("conjugation") {
  CHECK(structural_equal(conjugate(P("i*hbar*psi^*")), P("-i*hbar*psi")));
  CHECK(structural_equal(conjugate(P("a*dot(grad(psi^*), grad(psi))*psi^*")),
                         P("a^* * dot(grad(psi), grad(psi^*))*psi")));
  CHECK(structural_equal(conjugate(P("hbar*m*V")), P("hbar*m*V")));
  CHECK(structural_equal(conjugate(P("ln(psi/psi^*)")), P("ln(psi^*/psi)")));
  RandomExpr gen(11);
  for (int k = 0; k < 200; ++k) {
    const Expr e = canonicalize(gen());
    CHECK(structural_equal(conjugate(conjugate(e)), e));
  }
}

TEST_CASE("spatial divergence of momenta") {
  auto div = [](const char* text, int dim) { return spatial_divergence_of_momenta(P(text), Field::Psi, dim); };

  const auto lin = div("-(hbar^2/(2*m))*dot(grad(psi^*), grad(psi))", 3);
  CHECK(structural_equal(lin.value, P("-(hbar^2/(2*m))*lap(psi^*)")));
  CHECK_FALSE(lin.residual);

  const auto grad_density = div("a*dot(grad(psi^*), grad(psi))*psi^* * psi", 3);
  CHECK(structural_equal(grad_density.value,
                         P("a*dot(grad(psi^* * psi), grad(psi^*)) + a*psi^* * psi*lap(psi^*)")));
  CHECK_FALSE(grad_density.residual);

  const auto quartic_1d = div("b*grad(psi^*)^2*grad(psi)^2", 1);
  CHECK(structural_equal(quartic_1d.value,
                         P("4*b*lap(psi^*)*dot(grad(psi^*), grad(psi)) + 2*b*dot(grad(psi^*), grad(psi^*))*lap(psi)")));
  CHECK_FALSE(quartic_1d.residual);

  const auto quartic_3d = div("b*grad(psi^*)^2*grad(psi)^2", 3);
  CHECK(quartic_3d.residual);
  CHECK(has_residual(quartic_3d.value));
  CHECK(structural_equal(collapse_to_1d(quartic_3d.value), quartic_1d.value));
}

TEST_CASE("canonical form") {
  CHECK(structural_equal(P("(psi^* * psi)*(psi^* * psi)"), P("(psi^* * psi)^2")));
  CHECK(structural_equal(canonicalize(Expr::number(2) * Expr::constant("e") * Expr::pow(psi * psis, 1) * psis),
                         P("2*e*psi*psi^*^2")));
  CHECK(structural_equal(P("c*m*psi^* * (psi^* * psi)^(-1)"), P("c*m*psi^*/(psi^* * psi)")));
  CHECK_FALSE(structural_equal(psi, psis));
  CHECK(structural_equal(P("a + b"), P("b + a")));
  CHECK(structural_equal(P("ln((psi^* * psi)^3)"), P("3*ln(psi^* * psi)")));
  CHECK(canonicalize(P("psi - psi")).is_zero());
  const Expr s = canonicalize(P("a + b + a*b"));
  REQUIRE(s.kind() == NodeKind::Sum);
  CHECK(s.children().size() >= 2);
}

TEST_CASE("canonicalize is idempotent on 1000 random trees of depth <= 8") {
  RandomExpr gen(2024, RandomExprOptions{8});
  int failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const Expr once = canonicalize(gen());
    if (!(canonicalize(once) == once)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("differentiation properties on 1000 random cases") {
  RandomExprOptions opt;
  opt.max_depth = 4;
  opt.allow_hess = false;
  RandomExpr gen(7, opt);
  const FieldSymbol wrt[] = {S_psi, S_psis, FieldSymbol::grad(Field::Psi, 1), FieldSymbol::grad(Field::PsiStar, 1),
                             FieldSymbol::laplacian(Field::Psi), FieldSymbol::psi_dot()};
  int linearity = 0, product = 0, conj_commute = 0;
  for (int k = 0; k < 1000; ++k) {
    const Expr e1 = canonicalize(gen()), e2 = canonicalize(gen());
    const FieldSymbol s = wrt[gen.pick(6)];
    const Expr alpha = Expr::number(gen.number()), beta = Expr::number(gen.number());

    const Expr lhs = partial_wrt(canonicalize(alpha * e1 + beta * e2), s);
    const Expr rhs = alpha * partial_wrt(e1, s) + beta * partial_wrt(e2, s);
    if (!structural_equal(lhs, rhs)) ++linearity;

    const Expr plhs = partial_wrt(canonicalize(e1 * e2), s);
    const Expr prhs = partial_wrt(e1, s) * e2 + e1 * partial_wrt(e2, s);
    if (!structural_equal(plhs, prhs)) ++product;

    if (!structural_equal(conjugate(partial_wrt(e1, s)), partial_wrt(conjugate(e1), s.conjugate()))) ++conj_commute;
  }
  CHECK(linearity == 0);
  CHECK(product == 0);
  CHECK(conj_commute == 0);
}

TEST_CASE("finite-difference oracle on 1000 random cases") {
  RandomExprOptions opt;
  opt.max_depth = 4;
  opt.allow_dot_grad = false;
  RandomExpr gen(99, opt);
  int checked = 0, failures = 0;
  double worst = 0;
  for (int k = 0; checked < 1000 && k < 5000; ++k) {
    const Expr e = canonicalize(gen());
    const auto syms = symbols_in(e);
    if (syms.empty()) continue;
    const FieldSymbol s = syms[static_cast<std::size_t>(gen.pick(static_cast<int>(syms.size())))];
    PointValues at = gen.point();
    const std::complex<double> exact = evaluate(partial_wrt(e, s), at);
    const std::complex<double> x0 = at.value(s);
    const double h = 1e-5 * std::max(1.0, std::abs(x0));
    at.value(s) = x0 + h;
    const std::complex<double> fp = evaluate(e, at);
    at.value(s) = x0 - h;
    const std::complex<double> fm = evaluate(e, at);
    const std::complex<double> fd = (fp - fm) / (2 * h);
    if (!std::isfinite(std::abs(exact)) || !std::isfinite(std::abs(fd))) continue;
    ++checked;
    const double rel = std::abs(exact - fd) / std::max(1.0, std::abs(exact));
    worst = std::max(worst, rel);
    if (rel > 1e-6) ++failures;
  }
  INFO("worst relative error " << worst);
  CHECK(checked == 1000);
  CHECK(failures == 0);
}

TEST_CASE("point evaluation") {
  PointValues at;
  at.psi = {1, 2};
  at.psi_star = {1, -2};
  at.constants["e"] = {0.5, 0.25};
  CHECK(std::abs(evaluate(P("e^* * psi^2*psi^*"), at) - std::conj(at.constants["e"]) * at.psi * at.psi * at.psi_star) <
        1e-14);
  CHECK_THROWS(evaluate(P("a*psi"), at));
}

TEST_CASE("queries") {
  const Expr e = P("a*dot(grad(psi^*), grad(psi))*psi + b^* * lap(psi) + hbar*m*V");
  CHECK(has_spatial_derivatives(e));
  CHECK(has_field_dependence(e));
  CHECK_FALSE(has_time_derivatives(e));
  CHECK(coupling_names(e) == std::vector<std::string>{"a", "b"});
  CHECK(depends_on(e, FieldSymbol::laplacian(Field::Psi)));
  CHECK_FALSE(depends_on(e, FieldSymbol::psi_star()));
}
