#pragma once

// Periodic uniform grids in one or two dimensions and Fourier spectral
// differentiation on them.

#include <complex>
#include <memory>
#include <vector>

namespace nlse {

using cdouble = std::complex<double>;
using ComplexField = std::vector<cdouble>;

struct FieldGrid {
  int dimension = 1;
  std::vector<int> points;  // per axis, powers of two
  std::vector<double> box;  // per axis, positive
  ComplexField samples;     // row-major, last axis fastest

  /// Zero field with n points and box length L along every axis.
  static FieldGrid make(int dimension, int n, double length);

  std::size_t size() const;
  double spacing(int axis) const { return box[static_cast<std::size_t>(axis)] / points[static_cast<std::size_t>(axis)]; }
  double cell_volume() const;
  /// x_j = -L/2 + j*dx.
  double coordinate(int axis, int j) const { return -0.5 * box[static_cast<std::size_t>(axis)] + j * spacing(axis); }
  /// Coordinates of flat index `flat` along `axis`.
  double coordinate_of(std::size_t flat, int axis) const;
  bool same_shape(const FieldGrid& other) const;

  /// Throws std::invalid_argument when the metadata or samples are invalid.
  void validate() const;
};

/// FFT-backed spectral operators for one grid shape. Not thread-safe.
class Spectral {
public:
  explicit Spectral(const FieldGrid& shape);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  void forward(const ComplexField& in, ComplexField& out) const;
  /// Normalized inverse (inverse(forward(f)) == f).
  void inverse(const ComplexField& in, ComplexField& out) const;

  /// d f / d x_axis; the Nyquist mode is dropped.
  ComplexField derivative(const ComplexField& f, int axis) const;
  ComplexField laplacian(const ComplexField& f) const;
  /// f <- IFFT( exp(factor * |k|^2) * FFT f ).
  void apply_k2_exponential(ComplexField& f, cdouble factor) const;

  /// Wavenumber of flat Fourier index along an axis (Nyquist kept as -n/2).
  double wavenumber(std::size_t flat, int axis) const;
  const std::vector<double>& k_squared() const { return k2_; }

private:
  struct Plans;
  FieldGrid shape_;
  std::unique_ptr<Plans> plans_;
  std::vector<double> k2_;
  mutable ComplexField work_;
};

}  // namespace nlse
