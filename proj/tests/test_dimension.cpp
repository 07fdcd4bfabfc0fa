#include <doctest.h>

#include <cmath>
#include <random>

#include "nlse/dimension.hpp"
#include "nlse/dsl.hpp"
#include "nlse/variational.hpp"

using namespace nlse;

namespace {

Expr P(std::string_view text) {
  auto r = parse(text);
  REQUIRE_MESSAGE(r.ok(), r.format_diagnostics());
  return *r.expr;
}

const DimensionVector kEnergyDensity{1, -3, 0};

// Reference SI values, entered independently of the library constants.
constexpr double kHbar = 1.054571817e-34;
constexpr double kC = 2.99792458e8;
constexpr double kMe = 9.1093837015e-31;

}  // namespace

TEST_CASE("dimensions of fields and terms") {
  CHECK(dimension_of(P("psi^* * psi")) == DimensionVector{0, -3, 0});
  CHECK(dimension_of(P("psi")) == DimensionVector{0, Rational(-3, 2), 0});
  CHECK(dimension_of(P("psi^* * psi"), 1) == DimensionVector{0, -1, 0});
  CHECK(dimension_of(linear_lagrangian()) == kEnergyDensity);
  CHECK(dimension_of(P("(psi^* * psi)^2")) == DimensionVector{0, -6, 0});
  CHECK(dimension_of(P("i*hbar*dpsi/dt")) == DimensionVector{1, Rational(-3, 2), 0});
  CHECK(dimension_of(P("lap(psi)")) == DimensionVector{0, Rational(-7, 2), 0});
  CHECK(dimension_of(P("hess(psi, psi^*, psi)")) == DimensionVector{0, Rational(-17, 2), 0});
  CHECK(dimension_of(P("e*(psi^* * psi)^2"), 3, {{"e", {1, 3, 0}}}) == kEnergyDensity);
  CHECK_THROWS_AS(dimension_of(P("e*psi")), DimensionError);
}

TEST_CASE("string forms") {
  CHECK(DimensionVector{1, 3, 0}.str() == "[E][L]^3");
  CHECK(DimensionVector{0, Rational(-3, 2), 0}.str() == "[L]^(-3/2)");
  CHECK(DimensionVector{1, -3, 0}.str() == "[E][L]^(-3)");
  CHECK(DimensionVector::dimensionless().str() == "1");
  CHECK(express_in_hbar_m_c({1, 3, 0}).str() == "ħ³ m⁻² c⁻¹");
  CHECK(express_in_hbar_m_c({1, 6, 0}).str() == "ħ⁶ m⁻⁵ c⁻⁴");
  CHECK(express_in_hbar_m_c({}).str() == "1");
}

TEST_CASE("inhomogeneous sums name both terms") {
  try {
    dimension_of(P("psi + psi^* * psi"));
    FAIL("expected a DimensionError");
  } catch (const DimensionError& e) {
    const std::string what = e.what();
    CHECK(what.find("inhomogeneous") != std::string::npos);
    CHECK(what.find("[L]^(-3/2)") != std::string::npos);
    CHECK(what.find("[L]^(-3)") != std::string::npos);
  }
}

TEST_CASE("dimensioned logarithms warn but do not fail") {
  Warnings w;
  CHECK(dimension_of(P("ln(psi^* * psi)"), 3, {}, &w).is_dimensionless());
  CHECK(w.size() == 1);
  Warnings none;
  CHECK(dimension_of(P("ln(psi/psi^*)"), 3, {}, &none).is_dimensionless());
  CHECK(none.empty());

  Warnings w46;
  CHECK(coupling_dimension(P("f*psi*psi^* * ln(psi*psi^*)"), "f", 3, &w46) == DimensionVector{1, 0, 0});
  CHECK_FALSE(w46.empty());
}

TEST_CASE("coupling dimensions of power-law terms") {
  CHECK(coupling_dimension(P("e*(psi^* * psi)^2"), "e") == DimensionVector{1, 3, 0});
  CHECK(coupling_dimension(P("e*(psi^* * psi)^3"), "e") == DimensionVector{1, 6, 0});
  for (int m = 2; m <= 4; ++m) {
    INFO("m = " << m);
    const Expr term = Expr::constant("e") * Expr::pow(Expr::psi_star() * Expr::psi(), m);
    const DimensionVector direct = kEnergyDensity - dimension_of(Expr::pow(Expr::psi_star() * Expr::psi(), m));
    CHECK(coupling_dimension(term, "e") == direct);
    CHECK(coupling_dimension(term, "e") == DimensionVector{1, 3 * m - 3, 0});
  }
  CHECK(coupling_dimension(P("a*dot(grad(psi^*), grad(psi))*psi^* * psi"), "a") == DimensionVector{1, 5, 0});
  CHECK(coupling_dimension(P("e*(psi^* * psi)^2"), "e", 1) == DimensionVector{1, 1, 0});
  CHECK_THROWS_AS(coupling_dimension(P("e*(psi^* * psi)^2"), "q"), DimensionError);
  CHECK_THROWS_AS(coupling_dimension(P("e*(psi^* * psi)^2 + e*psi"), "e"), DimensionError);
}

TEST_CASE("expansion in hbar, m, c") {
  const auto x57 = express_in_hbar_m_c({1, 3, 0});
  CHECK(x57.hbar_exp == Rational(3));
  CHECK(x57.mass_exp == Rational(-2));
  CHECK(x57.c_exp == Rational(-1));
  CHECK(x57.dimensionless_residual);

  const auto x61 = express_in_hbar_m_c({1, 6, 0});
  CHECK(x61.hbar_exp == Rational(6));
  CHECK(x61.mass_exp == Rational(-5));
  CHECK(x61.c_exp == Rational(-4));

  const auto zero = express_in_hbar_m_c({});
  CHECK(zero.hbar_exp.is_zero());
  CHECK(zero.mass_exp.is_zero());
  CHECK(zero.c_exp.is_zero());

  std::mt19937 rng(17);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 6);
  for (int k = 0; k < 500; ++k) {
    const DimensionVector d{Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
    const auto x = express_in_hbar_m_c(d);
    CHECK(x.dimensionless_residual);
    CHECK(x.dimension() == d);
  }
}

TEST_CASE("dimension_of is a homomorphism on products") {
  const Expr atoms[] = {P("psi"),     P("psi^*"),  P("dpsi/dt"), P("d1(psi^*)"),
                        P("lap(psi)"), P("hbar"),   P("m"),       P("V"),
                        P("dot(grad(psi), grad(psi^*))"), P("e"), P("3"), P("psi^(1/3)")};
  const CouplingDimensions couplings{{"e", {1, 3, 0}}};
  std::mt19937 rng(3);
  auto random_product = [&] {
    std::vector<Expr> f;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int j = 0; j < n; ++j) f.push_back(atoms[rng() % std::size(atoms)]);
    return Expr::product(f);
  };
  for (int k = 0; k < 500; ++k) {
    const Expr a = random_product(), b = random_product();
    CHECK(dimension_of(a * b, 3, couplings) == dimension_of(a, 3, couplings) + dimension_of(b, 3, couplings));
    CHECK(dimension_of(Expr::pow(a, Rational(2, 3)), 3, couplings) ==
          Rational(2, 3) * dimension_of(a, 3, couplings));
  }
}

TEST_CASE("weakness of the nonlinear terms for an electron at 1 nm") {
  const double l = 1e-9;
  const double kinetic = kHbar * kHbar / (2 * kMe * l * l);

  const auto w2 = weakness_report(express_in_hbar_m_c({1, 3, 0}), kMe, l);
  const double e2 = std::pow(kHbar, 3) / (kMe * kMe * kC);
  CHECK(w2.coupling_magnitude == doctest::Approx(e2).epsilon(1e-9));
  CHECK(w2.nonlinear_energy == doctest::Approx(e2 / (l * l * l)).epsilon(1e-9));
  CHECK(w2.kinetic_energy == doctest::Approx(kinetic).epsilon(1e-9));
  CHECK(w2.nonlinear_to_kinetic == doctest::Approx(e2 / (l * l * l) / kinetic).epsilon(1e-9));
  CHECK(w2.nonlinear_to_kinetic == doctest::Approx(7.7232e-4).epsilon(1e-4));
  CHECK(w2.kinetic_to_nonlinear > 1e3);
  CHECK(w2.text.find("kinetic/nonlinear") != std::string::npos);

  const auto w3 = weakness_report(express_in_hbar_m_c({1, 6, 0}), kMe, l);
  const double e3 = std::pow(kHbar, 6) / (std::pow(kMe, 5) * std::pow(kC, 4));
  CHECK(w3.coupling_magnitude == doctest::Approx(e3).epsilon(1e-9));
  CHECK(w3.nonlinear_to_kinetic == doctest::Approx(e3 / std::pow(l, 6) / kinetic).epsilon(1e-9));
  CHECK(w3.nonlinear_to_kinetic < w2.nonlinear_to_kinetic);
  CHECK(w3.kinetic_to_nonlinear == doctest::Approx(2.2486e13).epsilon(1e-4));

  const auto w0 = weakness_report(express_in_hbar_m_c({}), kMe, l, 0.37);
  CHECK(w0.coupling_magnitude == 0.37);

  CHECK_THROWS(weakness_report(express_in_hbar_m_c({1, 3, 0}), -1, l));
}
