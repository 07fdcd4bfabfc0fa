#pragma once

// Dimensional analysis in the (energy, length, time) basis.

#include <map>
#include <stdexcept>
#include <string>

#include "nlse/expr.hpp"

namespace nlse {

class DimensionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DimensionVector {
  Rational energy;
  Rational length;
  Rational time;

  static DimensionVector dimensionless() { return {}; }
  static DimensionVector energy_density(int spatial_dim = 3) { return {1, -spatial_dim, 0}; }
  /// [L]^(-D/2), the amplitude of a normalized wave function.
  static DimensionVector wave_function(int spatial_dim = 3) { return {0, Rational(-spatial_dim, 2), 0}; }

  bool is_dimensionless() const { return energy.is_zero() && length.is_zero() && time.is_zero(); }
  /// "[E][L]^3", "[L]^(-3/2)", "1".
  std::string str() const;

  friend DimensionVector operator+(const DimensionVector& a, const DimensionVector& b) {
    return {a.energy + b.energy, a.length + b.length, a.time + b.time};
  }
  friend DimensionVector operator-(const DimensionVector& a, const DimensionVector& b) {
    return {a.energy - b.energy, a.length - b.length, a.time - b.time};
  }
  friend DimensionVector operator*(const Rational& r, const DimensionVector& d) {
    return {r * d.energy, r * d.length, r * d.time};
  }
  friend bool operator==(const DimensionVector&, const DimensionVector&) = default;
};

/// Known dimensions of named couplings, keyed by unconjugated name.
using CouplingDimensions = std::map<std::string, DimensionVector>;

DimensionVector dimension_of(const Expr& e, const DimensionVector& dim_psi,
                             const CouplingDimensions& couplings = {}, Warnings* warnings = nullptr);
/// Uses the wave-function dimension for the given number of spatial dimensions.
DimensionVector dimension_of(const Expr& e, int spatial_dim = 3, const CouplingDimensions& couplings = {},
                             Warnings* warnings = nullptr);

/// Dimension the coupling must carry for every term containing it to be an
/// energy density.
DimensionVector coupling_dimension(const Expr& lagrangian_term, const std::string& coupling,
                                   int spatial_dim = 3, Warnings* warnings = nullptr);

/// hbar^a m^b c^d.
struct HbarMcExpansion {
  Rational hbar_exp;
  Rational mass_exp;
  Rational c_exp;
  bool dimensionless_residual = true;  // the remaining factor is a pure number

  DimensionVector dimension() const;
  /// "ħ³ m⁻² c⁻¹".
  std::string str() const;
};

HbarMcExpansion express_in_hbar_m_c(const DimensionVector& d);

namespace si {
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double c = 299792458.0;             // m / s
inline constexpr double electron_mass = 9.1093837015e-31;  // kg
}  // namespace si

struct WeaknessReport {
  double coupling_magnitude = 0;  // g * hbar^a m^b c^d in SI units
  double nonlinear_energy = 0;    // magnitude times the length scale to the power that makes an energy
  double kinetic_energy = 0;      // hbar^2 / (2 m l^2)
  double nonlinear_to_kinetic = 0;
  double kinetic_to_nonlinear = 0;
  std::string text;
};

WeaknessReport weakness_report(const HbarMcExpansion& expansion, double mass_kg, double length_m,
                               double dimensionless_g = 1.0);

}  // namespace nlse
