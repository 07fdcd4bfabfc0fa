#pragma once

// Random expression trees for property tests.

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "nlse/expr.hpp"

namespace nlse::testing {

struct RandomExprOptions {
  int max_depth = 4;
  bool allow_dot_grad = true;   // DotGrad atoms
  bool allow_hess = true;       // HessForm atoms
  bool allow_time = true;       // dpsi/dt symbols
  bool allow_laplacian = true;
  bool allow_logs = true;
  bool allow_fractional = true;  // rational exponents on density powers
  int dimension = 1;             // gradient components available
};

class RandomExpr {
public:
  explicit RandomExpr(std::uint64_t seed, RandomExprOptions opt = {}) : rng_(seed), opt_(opt) {}

  Expr operator()() { return node(0); }

  Expr leaf() {
    switch (pick(9)) {
      case 0: return Expr::psi();
      case 1: return Expr::psi_star();
      case 2: {
        const Field f = pick(2) ? Field::Psi : Field::PsiStar;
        return Expr::symbol(FieldSymbol::grad(f, 1 + pick(opt_.dimension)));
      }
      case 3:
        if (opt_.allow_time) return Expr::symbol(FieldSymbol::time_derivative(pick(2) ? Field::Psi : Field::PsiStar));
        return Expr::psi();
      case 4:
        if (opt_.allow_laplacian) return Expr::symbol(FieldSymbol::laplacian(pick(2) ? Field::Psi : Field::PsiStar));
        return Expr::psi_star();
      case 5: {
        static const char* names[] = {"a", "b", "c", "d", "e", "f", "g"};
        return Expr::constant(names[pick(7)], pick(2) == 1);
      }
      case 6: {
        static const char* names[] = {"hbar", "m", "V"};
        return Expr::constant(names[pick(3)]);
      }
      case 7: return Expr::number(number());
      default:
        if (opt_.allow_dot_grad) {
          if (opt_.allow_hess && pick(4) == 0)
            return Expr::hess_form(pick(2) ? Field::Psi : Field::PsiStar, pick(2) ? Field::Psi : Field::PsiStar,
                                   pick(2) ? Field::Psi : Field::PsiStar);
          return Expr::dot_grad(pick(2) ? Field::Psi : Field::PsiStar, pick(2) ? Field::Psi : Field::PsiStar);
        }
        return Expr::psi();
    }
  }

  ComplexRational number() {
    const std::int64_t re = static_cast<std::int64_t>(pick(7)) - 3;
    const std::int64_t im = pick(3) == 0 ? static_cast<std::int64_t>(pick(5)) - 2 : 0;
    const std::int64_t den = 1 + pick(3);
    ComplexRational c{Rational(re == 0 && im == 0 ? 1 : re, den), Rational(im, den)};
    return c;
  }

  Expr density() {
    Expr d = Expr::psi() * Expr::psi_star();
    if (opt_.allow_fractional && pick(2) == 0) {
      static const Rational exps[] = {Rational(1, 2), Rational(1, 3), Rational(-2, 3), Rational(3, 2), Rational(2)};
      return Expr::pow(d, exps[pick(5)]);
    }
    return d;
  }

  Expr node(int depth) {
    if (depth >= opt_.max_depth || pick(10) < 3 + depth) return leaf();
    switch (pick(opt_.allow_logs ? 6 : 5)) {
      case 0:
      case 1: {
        std::vector<Expr> kids;
        for (int k = 0, n = 2 + pick(2); k < n; ++k) kids.push_back(node(depth + 1));
        return Expr::sum(kids);
      }
      case 2:
      case 3: {
        std::vector<Expr> kids;
        for (int k = 0, n = 2 + pick(2); k < n; ++k) kids.push_back(node(depth + 1));
        return Expr::product(kids);
      }
      case 4: {
        if (pick(3) == 0) return density() * node(depth + 1);
        static const std::int64_t exps[] = {-1, 2, 2, 3};
        return Expr::pow(node(depth + 1), exps[pick(4)]);
      }
      default: {
        if (pick(3) == 0) return Expr::log(Expr::psi() * Expr::pow(Expr::psi_star(), -1)) * node(depth + 1);
        return Expr::log(density()) * node(depth + 1);
      }
    }
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::complex<double> complex_value(double lo = 0.5, double hi = 1.5) {
    return std::polar(uniform(lo, hi), uniform(-0.6, 0.6));
  }

  /// A physical point: psi* is the conjugate of psi, so logs and roots of
  /// the density stay on the positive real axis.
  PointValues point(int dimension = 1) {
    PointValues at;
    at.psi = complex_value();
    at.psi_star = std::conj(at.psi);
    at.psi_dot = complex_value();
    at.psi_star_dot = complex_value();
    at.lap_psi = complex_value();
    at.lap_psi_star = complex_value();
    for (int k = 0; k < dimension; ++k) {
      at.grad_psi.push_back(complex_value());
      at.grad_psi_star.push_back(complex_value());
    }
    for (int k = 0; k < dimension * dimension; ++k) {
      at.hess_psi.push_back(complex_value());
      at.hess_psi_star.push_back(complex_value());
    }
    for (const char* n : {"a", "b", "c", "d", "e", "f", "g"}) at.constants[n] = complex_value();
    at.constants["hbar"] = uniform(0.5, 1.5);
    at.constants["m"] = uniform(0.5, 1.5);
    at.constants["V"] = uniform(0.5, 1.5);
    return at;
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
  RandomExprOptions opt_;
};

}  // namespace nlse::testing
