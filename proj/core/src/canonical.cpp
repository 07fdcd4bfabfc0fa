// Canonical form: a sum of monomials, each a Gaussian-rational coefficient
// times a product of key^exponent with exact rational exponents.
//
// Key classes and their exponent invariants:
//   atom       (Symbol, Constant, DotGrad, HessForm, Log)  any nonzero exponent
//   composite  (Product, Number)                           exponent in (0, 1)
//   sum        (Sum)                                       exponent < 1, nonzero
// Integer parts of composite/sum exponents are multiplied out, which is what
// makes the representation unique.

#include <map>

#include "nlse/expr.hpp"

namespace nlse {
namespace {

using Monomial = std::vector<std::pair<Expr, Rational>>;

std::strong_ordering compare(const Monomial& a, const Monomial& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a[i].first <=> b[i].first; c != 0) return c;
    if (auto c = a[i].second <=> b[i].second; c != 0) return c;
  }
  return a.size() <=> b.size();
}

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

using Poly = std::map<Monomial, ComplexRational, MonomialLess>;

enum class KeyClass { Atom, Composite, SumKey };

KeyClass classify(const Expr& key) {
  switch (key.kind()) {
    case NodeKind::Product:
    case NodeKind::Number:
      return KeyClass::Composite;
    case NodeKind::Sum:
      return KeyClass::SumKey;
    default:
      return KeyClass::Atom;
  }
}

Poly to_poly(const Expr& e);
Expr to_expr(const Poly& p);
Poly mul(const Poly& a, const Poly& b);

Poly constant_poly(const ComplexRational& c) {
  Poly p;
  if (!c.is_zero()) p.emplace(Monomial{}, c);
  return p;
}

void add_into(Poly& p, const Monomial& m, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = p.try_emplace(m, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) p.erase(it);
  }
}

void add_into(Poly& p, const Poly& q) {
  for (const auto& [m, c] : q) add_into(p, m, c);
}

Monomial merge(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      Rational e = a[i].second + b[j].second;
      if (!e.is_zero()) out.emplace_back(a[i].first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

Poly pow_int(const Poly& p, std::int64_t n);

/// Restores the key exponent invariants of c * m.
Poly normalize(const ComplexRational& c, const Monomial& m) {
  if (c.is_zero()) return {};
  for (std::size_t idx = 0; idx < m.size(); ++idx) {
    const auto& [key, e] = m[idx];
    const KeyClass cls = classify(key);
    if (cls == KeyClass::Atom) continue;
    if (key.is_number()) {
      if (key.number_value().is_one()) {
        Monomial rest(m);
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(idx));
        return normalize(c, rest);
      }
      if (key.is_zero()) {
        if (e.is_negative()) throw std::domain_error("division by zero");
        return {};
      }
    }
    const std::int64_t n = e.floor();
    const bool split = cls == KeyClass::Composite ? n != 0 : n >= 1;
    if (!split) continue;
    Monomial rest(m);
    const Rational frac = e - Rational(n);
    if (frac.is_zero()) {
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(idx));
    } else {
      rest[idx].second = frac;
    }
    return mul(normalize(c, rest), pow_int(to_poly(key), n));
  }
  Poly p;
  p.emplace(m, c);
  return p;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) add_into(out, normalize(ca * cb, merge(ma, mb)));
  return out;
}

Poly pow_int(const Poly& p, std::int64_t n) {
  if (n == 0) return constant_poly(1);
  if (n < 0) {
    if (p.size() != 1) throw std::logic_error("negative integer power of a sum");
    const auto& [m, c] = *p.begin();
    Monomial scaled(m);
    for (auto& [key, e] : scaled) e *= Rational(n);
    return normalize(c.pow(n), scaled);
  }
  Poly result = constant_poly(1);
  Poly base = p;
  auto e = static_cast<std::uint64_t>(n);
  while (e != 0) {
    if (e & 1U) result = mul(result, base);
    e >>= 1U;
    if (e != 0) base = mul(base, base);
  }
  return result;
}

Rational exponent_gcd(const Monomial& m) {
  Rational g;
  for (const auto& [key, e] : m) g = gcd(g, e);
  return g;
}

Poly key_power(const Expr& key, const Rational& e) { return normalize(1, {{key, e}}); }

Poly pow(const Poly& p, const Rational& r) {
  if (r.is_zero()) return constant_poly(1);
  if (p.empty()) {
    if (r.is_negative()) throw std::domain_error("zero raised to a negative power");
    return {};
  }
  if (r.is_integer() && !r.is_negative()) return pow_int(p, r.num());
  if (p.size() == 1) {
    const auto& [m, c] = *p.begin();
    if (r.is_integer()) return pow_int(p, r.num());
    if (c.is_one() && m.size() == 1) {
      return key_power(m.front().first, m.front().second * r);
    }
    if (c.is_one() && m.size() >= 2) {
      // pull the common exponent out so that (x^2 y^2)^(1/2) -> x y
      Monomial cur = m;
      Rational scale = r;
      for (;;) {
        const Rational g = exponent_gcd(cur);
        for (auto& [key, e] : cur) e /= g;
        scale *= g;
        Poly reduced = normalize(1, cur);
        if (reduced.size() == 1 && reduced.begin()->second.is_one() &&
            reduced.begin()->first.size() >= 2 && exponent_gcd(reduced.begin()->first) != Rational(1)) {
          cur = reduced.begin()->first;
          continue;
        }
        return key_power(to_expr(reduced), scale);
      }
    }
  }
  return key_power(to_expr(p), r);
}

bool is_density(const Expr& e) {
  return e.kind() == NodeKind::Product && e.children().size() == 2 &&
         e.children()[0] == Expr::psi() && e.children()[1] == Expr::psi_star();
}

Poly log_poly(const Expr& arg) {
  const Poly pu = to_poly(arg);
  if (pu.size() == 1 && pu.begin()->first.empty() && pu.begin()->second.is_one()) return {};
  if (pu.size() == 1 && pu.begin()->second.is_one()) {
    const Monomial& m = pu.begin()->first;
    Rational k_psi, k_star, k_density;
    bool density_only = true;
    for (const auto& [key, e] : m) {
      if (key == Expr::psi()) {
        k_psi = e;
      } else if (key == Expr::psi_star()) {
        k_star = e;
      } else if (is_density(key)) {
        k_density = e;
      } else {
        density_only = false;
      }
    }
    const Rational k = k_psi + k_density;
    if (density_only && k_psi == k_star && !k.is_zero()) {
      Poly out;
      add_into(out, Monomial{{Expr::log(Expr::psi() * Expr::psi_star()), 1}}, k);
      return out;
    }
  }
  Poly out;
  out.emplace(Monomial{{Expr::log(to_expr(pu)), 1}}, 1);
  return out;
}

Poly to_poly(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Number:
      return constant_poly(e.number_value());
    case NodeKind::Symbol:
    case NodeKind::Constant:
    case NodeKind::DotGrad:
    case NodeKind::HessForm: {
      Poly p;
      p.emplace(Monomial{{e, 1}}, 1);
      return p;
    }
    case NodeKind::Log:
      return log_poly(e.arg());
    case NodeKind::Pow:
      return pow(to_poly(e.base()), e.exponent());
    case NodeKind::Product: {
      Poly p = constant_poly(1);
      for (const auto& c : e.children()) {
        p = mul(p, to_poly(c));
        if (p.empty()) break;
      }
      return p;
    }
    case NodeKind::Sum: {
      Poly p;
      for (const auto& c : e.children()) add_into(p, to_poly(c));
      return p;
    }
  }
  return {};
}

Expr to_expr(const Poly& p) {
  std::vector<Expr> terms;
  terms.reserve(p.size());
  for (const auto& [m, c] : p) {
    std::vector<Expr> factors;
    factors.reserve(m.size() + 1);
    if (!c.is_one() || m.empty()) factors.push_back(Expr::number(c));
    for (const auto& [key, e] : m) factors.push_back(e == Rational(1) ? key : Expr::pow(key, e));
    terms.push_back(Expr::product(std::move(factors)));
  }
  return Expr::sum(std::move(terms));
}

}  // namespace

Expr canonicalize(const Expr& e) { return to_expr(to_poly(e)); }

bool structural_equal(const Expr& a, const Expr& b) { return canonicalize(a) == canonicalize(b); }

}  // namespace nlse
