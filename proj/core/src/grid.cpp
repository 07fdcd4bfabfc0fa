#include "nlse/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fftw3.h>

namespace nlse {

namespace {

bool power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

void check_shape(const FieldGrid& g) {
  if (g.dimension != 1 && g.dimension != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (g.points.size() != static_cast<std::size_t>(g.dimension) ||
      g.box.size() != static_cast<std::size_t>(g.dimension))
    throw std::invalid_argument("grid metadata does not match its dimension");
  for (int n : g.points)
    if (!power_of_two(n)) throw std::invalid_argument("points per axis must be a power of two, got " + std::to_string(n));
  for (double l : g.box)
    if (!(l > 0) || !std::isfinite(l)) throw std::invalid_argument("box length must be positive and finite");
}

fftw_complex* as_fftw(cdouble* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cdouble* p) { return reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(p)); }

}  // namespace

FieldGrid FieldGrid::make(int dimension, int n, double length) {
  FieldGrid g;
  g.dimension = dimension;
  g.points.assign(static_cast<std::size_t>(std::max(dimension, 0)), n);
  g.box.assign(static_cast<std::size_t>(std::max(dimension, 0)), length);
  check_shape(g);
  g.samples.assign(g.size(), cdouble{});
  return g;
}

std::size_t FieldGrid::size() const {
  std::size_t s = 1;
  for (int n : points) s *= static_cast<std::size_t>(n);
  return s;
}

double FieldGrid::cell_volume() const {
  double v = 1;
  for (int a = 0; a < dimension; ++a) v *= spacing(a);
  return v;
}

double FieldGrid::coordinate_of(std::size_t flat, int axis) const {
  if (dimension == 1) return coordinate(0, static_cast<int>(flat));
  const auto ny = static_cast<std::size_t>(points[1]);
  return axis == 0 ? coordinate(0, static_cast<int>(flat / ny)) : coordinate(1, static_cast<int>(flat % ny));
}

bool FieldGrid::same_shape(const FieldGrid& other) const {
  return dimension == other.dimension && points == other.points && box == other.box;
}

void FieldGrid::validate() const {
  check_shape(*this);
  if (samples.size() != size())
    throw std::invalid_argument("sample count " + std::to_string(samples.size()) + " does not match grid size " +
                                std::to_string(size()));
  for (std::size_t j = 0; j < samples.size(); ++j)
    if (!std::isfinite(samples[j].real()) || !std::isfinite(samples[j].imag()))
      throw std::invalid_argument("non-finite sample at index " + std::to_string(j));
}

// ---------------------------------------------------------------------------

struct Spectral::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

Spectral::Spectral(const FieldGrid& shape) : shape_(shape), plans_(std::make_unique<Plans>()) {
  check_shape(shape_);
  shape_.samples.clear();
  const std::size_t n = shape_.size();
  ComplexField a(n), b(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->forward = fftw_plan_dft(shape_.dimension, shape_.points.data(), as_fftw(a.data()), as_fftw(b.data()),
                                  FFTW_FORWARD, flags);
  plans_->backward = fftw_plan_dft(shape_.dimension, shape_.points.data(), as_fftw(a.data()), as_fftw(b.data()),
                                   FFTW_BACKWARD, flags);
  if (plans_->forward == nullptr || plans_->backward == nullptr) throw std::runtime_error("FFTW planning failed");
  k2_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0;
    for (int axis = 0; axis < shape_.dimension; ++axis) {
      const double k = wavenumber(j, axis);
      s += k * k;
    }
    k2_[j] = s;
  }
  work_.resize(n);
}

Spectral::~Spectral() {
  if (plans_) {
    if (plans_->forward != nullptr) fftw_destroy_plan(plans_->forward);
    if (plans_->backward != nullptr) fftw_destroy_plan(plans_->backward);
  }
}

void Spectral::forward(const ComplexField& in, ComplexField& out) const {
  if (in.size() != k2_.size()) throw std::invalid_argument("field size does not match the spectral grid");
  out.resize(in.size());
  fftw_execute_dft(plans_->forward, as_fftw(in.data()), as_fftw(out.data()));
}

void Spectral::inverse(const ComplexField& in, ComplexField& out) const {
  if (in.size() != k2_.size()) throw std::invalid_argument("field size does not match the spectral grid");
  out.resize(in.size());
  fftw_execute_dft(plans_->backward, as_fftw(in.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(in.size());
  for (auto& v : out) v *= scale;
}

double Spectral::wavenumber(std::size_t flat, int axis) const {
  std::size_t idx = flat;
  if (shape_.dimension == 2) {
    const auto ny = static_cast<std::size_t>(shape_.points[1]);
    idx = axis == 0 ? flat / ny : flat % ny;
  }
  const int n = shape_.points[static_cast<std::size_t>(axis)];
  const int j = static_cast<int>(idx);
  const int m = j < n / 2 ? j : j - n;
  return 2.0 * std::numbers::pi * m / shape_.box[static_cast<std::size_t>(axis)];
}

ComplexField Spectral::derivative(const ComplexField& f, int axis) const {
  forward(f, work_);
  const int n = shape_.points[static_cast<std::size_t>(axis)];
  const double nyquist = 2.0 * std::numbers::pi * (-n / 2) / shape_.box[static_cast<std::size_t>(axis)];
  for (std::size_t j = 0; j < work_.size(); ++j) {
    const double k = wavenumber(j, axis);
    work_[j] *= k == nyquist ? cdouble{} : cdouble(0, k);
  }
  ComplexField out;
  inverse(work_, out);
  return out;
}

ComplexField Spectral::laplacian(const ComplexField& f) const {
  forward(f, work_);
  for (std::size_t j = 0; j < work_.size(); ++j) work_[j] *= -k2_[j];
  ComplexField out;
  inverse(work_, out);
  return out;
}

void Spectral::apply_k2_exponential(ComplexField& f, cdouble factor) const {
  forward(f, work_);
  for (std::size_t j = 0; j < work_.size(); ++j) work_[j] *= std::exp(factor * k2_[j]);
  inverse(work_, f);
}

}  // namespace nlse
