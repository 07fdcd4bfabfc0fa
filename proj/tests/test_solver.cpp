#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlse/dsl.hpp"
#include "nlse/solver.hpp"

using namespace nlse;

namespace {

constexpr double kPi = std::numbers::pi;
const cdouble I{0, 1};

EvolutionEquation corpus_equation(const std::string& name) {
  auto r = parse_file(std::string(NLSE_TEST_CORPUS) + "/" + name);
  REQUIRE_MESSAGE(r.ok(), r.format_diagnostics(name));
  return derive_equation(*r.expr, 1);
}

ConstantBindings natural(std::initializer_list<std::pair<const std::string, cdouble>> extra = {}) {
  ConstantBindings b{{"hbar", 1}, {"m", 1}};
  b.insert(extra.begin(), extra.end());
  return b;
}

FieldGrid sampled(int n, double box, const std::function<cdouble(double)>& f) {
  FieldGrid g = FieldGrid::make(1, n, box);
  for (std::size_t j = 0; j < g.size(); ++j) g.samples[j] = f(g.coordinate(0, static_cast<int>(j)));
  return g;
}

// A sech(A(x - x0 - v t)) exp(i(v(x - x0) + (A^2 - v^2) t / 2)) solves i psi_t = -psi_xx/2 - |psi|^2 psi.
cdouble soliton(double x, double t, double a = 1, double v = 0, double x0 = 0) {
  return a / std::cosh(a * (x - x0 - v * t)) * std::polar(1.0, v * (x - x0) + 0.5 * (a * a - v * v) * t);
}

double linf(const ComplexField& a, const ComplexField& b) {
  double worst = 0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

FieldGrid integrate(const CompiledRHS& rhs, FieldGrid field, double dt, double t_final, Method method) {
  RunConfig cfg;
  cfg.dt = dt;
  cfg.t_final = t_final;
  cfg.method = method;
  return run(field, rhs, {}, cfg).final_field;
}

// Least-squares slope of log(error) against log(dt).
double slope(const std::vector<double>& dts, const std::vector<double>& errors) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(dts.size());
  for (std::size_t k = 0; k < dts.size(); ++k) {
    const double x = std::log(dts[k]), y = std::log(errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct Recorder : RunSink {
  std::vector<ObservableRecord> records;
  std::vector<std::pair<std::size_t, double>> snapshots;
  void on_observables(const ObservableRecord& r) override { records.push_back(r); }
  void on_snapshot(std::size_t index, const FieldGrid&, double t) override { snapshots.emplace_back(index, t); }
};

}  // namespace

TEST_CASE("the sech profile solves the focusing cubic equation") {
  // Residual of i psi_t + psi_xx/2 + |psi|^2 psi by central differences of the closed form.
  const double h = 1e-3;
  for (double v : {0.0, 1.0}) {
    for (double x = -4; x <= 4; x += 0.37) {
      const double t = 0.3;
      const cdouble p = soliton(x, t, 1.3, v);
      const cdouble pt = (soliton(x, t + h, 1.3, v) - soliton(x, t - h, 1.3, v)) / (2 * h);
      const cdouble pxx = (soliton(x + h, t, 1.3, v) - 2.0 * p + soliton(x - h, t, 1.3, v)) / (h * h);
      CHECK(std::abs(I * pt + 0.5 * pxx + std::norm(p) * p) <= 1e-5);
    }
  }
}

TEST_CASE("exact kinetic propagator and the identity step") {
  const auto eq = corpus_equation("linear.lag");
  const ConstantBindings b{{"hbar", 1.2}, {"m", 0.8}};
  const CompiledRHS rhs = CompiledRHS::compile(eq, b, 1);
  const double k = 2 * kPi * 3 / 20, dt = 0.37;
  FieldGrid g = sampled(64, 20, [&](double x) { return std::polar(1.0, k * x); });
  Stepper stepper(rhs, {}, g, Method::Auto);
  REQUIRE(stepper.method() == Method::Strang);

  FieldGrid same = g;
  stepper.step(same, 0.0);
  CHECK(same.samples == g.samples);
  stepper.step_rk4(same, 0.0);
  CHECK(same.samples == g.samples);

  FieldGrid stepped = g;
  stepper.step(stepped, dt);
  ComplexField expected = g.samples;
  for (auto& v : expected) v *= std::exp(-I * 1.2 * k * k * dt / (2 * 0.8));
  CHECK(linf(stepped.samples, expected) <= 1e-12);
}

TEST_CASE("soliton over unit time with the split step") {
  const auto eq = corpus_equation("gp_m2.lag");
  const CompiledRHS rhs = CompiledRHS::compile(eq, natural({{"e", 0.5}}), 1);
  const FieldGrid g = sampled(256, 40, [](double x) { return soliton(x, 0); });
  RunConfig cfg;
  cfg.dt = 1e-4;
  cfg.t_final = 1.0;
  const RunSummary s = run(g, rhs, {}, cfg);
  CHECK(s.method == Method::Strang);
  CHECK(s.steps == 10000);
  CHECK(s.final_time == 1.0);
  const FieldGrid exact = sampled(256, 40, [](double x) { return soliton(x, 1.0); });
  CHECK(linf(s.final_field.samples, exact.samples) <= 1e-6);
  CHECK(s.max_norm_drift <= 1e-10);
  CHECK(s.max_energy_drift <= 1e-6);
  CHECK(s.initial.energy.real() == doctest::Approx(-1.0 / 3).epsilon(1e-8));
}

TEST_CASE("free Gaussian spreading") {
  // Density standard deviation s0: psi = exp(-x^2/(4 s0^2)).
  const double s0 = 1.0, t = 2.0;
  const auto eq = corpus_equation("linear.lag");
  const CompiledRHS rhs = CompiledRHS::compile(eq, natural(), 1);
  const FieldGrid g = sampled(512, 80, [&](double x) { return std::exp(-x * x / (4 * s0 * s0)); });
  RunConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = t;
  const RunSummary s = run(g, rhs, {}, cfg);
  const double expected = s0 * std::sqrt(1 + std::pow(t / (2 * s0 * s0), 2));
  CHECK(s.final.width[0] == doctest::Approx(expected).epsilon(1e-4));
  CHECK(s.max_norm_drift <= 1e-12);
}

TEST_CASE("classical Runge-Kutta is fourth order on the free equation") {
  const auto eq = corpus_equation("linear.lag");
  const CompiledRHS rhs = CompiledRHS::compile(eq, natural(), 1);
  const double k = 2 * kPi * 5 / 20;
  const FieldGrid g = sampled(32, 20, [&](double x) { return std::polar(1.0, k * x); });
  const FieldGrid exact = sampled(32, 20, [&](double x) { return std::polar(1.0, k * x - 0.5 * k * k * 1.0); });
  std::vector<double> dts{0.1, 0.05, 0.025}, errors;
  for (double dt : dts) errors.push_back(linf(integrate(rhs, g, dt, 1.0, Method::RK4).samples, exact.samples));
  INFO("errors " << errors[0] << " " << errors[1] << " " << errors[2]);
  CHECK(slope(dts, errors) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("a switched-off gradient coupling reproduces the linear trajectory") {
  const CompiledRHS eq17 = CompiledRHS::compile(corpus_equation("gradient_density.lag"), natural({{"a", 0.0}}), 1);
  const CompiledRHS lin = CompiledRHS::compile(corpus_equation("linear.lag"), natural(), 1);
  REQUIRE(eq17.locality() == Locality::DerivativeCoupled);
  const FieldGrid g = sampled(64, 20, [](double x) { return std::exp(-x * x) * std::polar(1.0, 0.7 * x); });
  const FieldGrid a = integrate(eq17, g, 0.01, 0.5, Method::Auto);
  const FieldGrid b = integrate(lin, g, 0.01, 0.5, Method::RK4);
  CHECK(linf(a.samples, b.samples) <= 1e-12);
}

TEST_CASE("Gausson is stationary under the logarithmic equation") {
  // exp(-b x^2) makes -psi_xx/2 - b ln|psi|^2 psi proportional to psi.
  const double b = 1.0;
  const auto eq = corpus_equation("log_density.lag");
  const CompiledRHS rhs = CompiledRHS::compile(eq, natural({{"f", b}}), 1);
  const FieldGrid g = sampled(256, 20, [&](double x) { return std::exp(-b * x * x); });
  const Spectral sp(g);
  const ComplexField r = rhs.evaluate(g, ComplexField(g.size()), sp);
  const cdouble lambda = r[g.size() / 2] / g.samples[g.size() / 2];
  for (std::size_t j = 0; j < g.size(); ++j)
    if (std::abs(g.samples[j]) > 1e-3) CHECK(std::abs(r[j] / g.samples[j] - lambda) <= 1e-9);

  RunConfig cfg;
  cfg.dt = 1e-4;
  cfg.t_final = 1.0;
  const RunSummary s = run(g, rhs, {}, cfg);
  CHECK(s.method == Method::Strang);
  double worst = 0;
  for (std::size_t j = 0; j < g.size(); ++j)
    worst = std::max(worst, std::abs(std::norm(s.final_field.samples[j]) - std::norm(g.samples[j])));
  CHECK(worst <= 1e-4);
  CHECK(s.max_energy_drift <= 1e-6);
}

TEST_CASE("convergence orders under dt halving") {
  SUBCASE("split step on the cubic equation") {
    const CompiledRHS rhs = CompiledRHS::compile(corpus_equation("gp_m2.lag"), natural({{"e", 0.5}}), 1);
    const FieldGrid g = sampled(128, 30, [](double x) { return soliton(x, 0, 1.2, 0.5); });
    const FieldGrid reference = integrate(rhs, g, 1e-4, 1.0, Method::Strang);
    std::vector<double> dts{0.02, 0.01, 0.005, 0.0025}, errors;
    for (double dt : dts)
      errors.push_back(linf(integrate(rhs, g, dt, 1.0, Method::Strang).samples, reference.samples));
    const double p = slope(dts, errors);
    INFO("slope " << p);
    CHECK(std::abs(p - 2.0) <= 0.2);
  }
  SUBCASE("Runge-Kutta on the density-weighted gradient equation") {
    const CompiledRHS rhs = CompiledRHS::compile(corpus_equation("gradient_density.lag"), natural({{"a", 0.01}}), 1);
    const FieldGrid g = sampled(64, 20, [](double x) { return std::exp(-x * x / 2) * std::polar(1.0, 0.5 * x); });
    const FieldGrid reference = integrate(rhs, g, 0.001, 1.0, Method::RK4);
    std::vector<double> dts{0.04, 0.02, 0.01, 0.005}, errors;
    for (double dt : dts) errors.push_back(linf(integrate(rhs, g, dt, 1.0, Method::RK4).samples, reference.samples));
    const double p = slope(dts, errors);
    INFO("slope " << p << " errors " << errors[0] << " " << errors[3]);
    CHECK(std::abs(p - 4.0) <= 0.2);
  }
  SUBCASE("Runge-Kutta on the quartic gradient equation in one dimension") {
    const CompiledRHS rhs = CompiledRHS::compile(corpus_equation("gradient_quartic.lag"), natural({{"b", 0.01}}), 1);
    const FieldGrid g = sampled(64, 20, [](double x) { return std::exp(-x * x / 2) * std::polar(1.0, 0.5 * x); });
    const FieldGrid reference = integrate(rhs, g, 0.001, 0.5, Method::RK4);
    std::vector<double> dts{0.04, 0.02, 0.01, 0.005}, errors;
    for (double dt : dts) errors.push_back(linf(integrate(rhs, g, dt, 0.5, Method::RK4).samples, reference.samples));
    const double p = slope(dts, errors);
    INFO("slope " << p << " errors " << errors[0] << " " << errors[3]);
    CHECK(std::abs(p - 4.0) <= 0.2);
  }
}

TEST_CASE("a global phase commutes with the evolution") {
  const cdouble phase = std::polar(1.0, 0.9);
  const std::pair<const char*, ConstantBindings> cases[] = {
      {"log_power_m3.lag", natural({{"c", 0.2}})},
      {"root_n3.lag", natural({{"d", 0.3}})},
      {"power_m4.lag", natural({{"e", 0.1}})},
      {"gp_m2.lag", natural({{"e", 0.5}})},
      {"log_density.lag", natural({{"f", 0.5}})},
  };
  const FieldGrid g = sampled(128, 20, [](double x) { return 0.2 + std::exp(-x * x) * std::polar(1.0, 0.3 * x); });
  FieldGrid rotated = g;
  for (auto& v : rotated.samples) v *= phase;
  for (const auto& [file, bindings] : cases) {
    INFO(file);
    const CompiledRHS rhs = CompiledRHS::compile(corpus_equation(file), bindings, 1);
    const FieldGrid base = integrate(rhs, g, 1e-3, 0.5, Method::Auto);
    FieldGrid expected = base;
    for (auto& v : expected.samples) v *= phase;
    CHECK(linf(integrate(rhs, rotated, 1e-3, 0.5, Method::Auto).samples, expected.samples) <= 1e-10);
  }
}

TEST_CASE("method selection and fallbacks") {
  const FieldGrid g = sampled(64, 20, [](double x) { return std::exp(-x * x); });
  Warnings w;
  const CompiledRHS complex_gp = CompiledRHS::compile(corpus_equation("gp_m2.lag"), natural({{"e", cdouble(0.5, 0.1)}}), 1);
  CHECK(Stepper(complex_gp, {}, g, Method::Auto, &w).method() == Method::RK4);
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("falling back to RK4") != std::string::npos);

  Warnings quiet;
  const CompiledRHS eq17 = CompiledRHS::compile(corpus_equation("gradient_density.lag"), natural({{"a", 0.1}}), 1);
  CHECK(Stepper(eq17, {}, g, Method::Auto, &quiet).method() == Method::RK4);
  CHECK(quiet.empty());
  Warnings forced;
  CHECK(Stepper(eq17, {}, g, Method::Strang, &forced).method() == Method::RK4);
  CHECK(forced.size() == 1);

  const CompiledRHS phase = CompiledRHS::compile(corpus_equation("phase_log.lag"), natural({{"g", 0.3}}), 1);
  Warnings pw;
  CHECK(Stepper(phase, {}, g, Method::Auto, &pw).method() == Method::RK4);
  CHECK(pw.size() == 1);

  const CompiledRHS gp = CompiledRHS::compile(corpus_equation("gp_m2.lag"), natural({{"e", 0.5}}), 1);
  CHECK(Stepper(gp, {}, g, Method::Auto).method() == Method::Strang);
  CHECK(Stepper(gp, {}, g, Method::RK4).method() == Method::RK4);

  RunConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_final = 0.05;
  const RunSummary s = run(g, complex_gp, {}, cfg);
  CHECK(s.method == Method::RK4);
  CHECK(s.warnings.size() == 2);
  CHECK(s.final.energy.imag() != 0.0);
}

TEST_CASE("instability and invalid configurations abort") {
  const CompiledRHS lin = CompiledRHS::compile(corpus_equation("linear.lag"), natural(), 1);
  FieldGrid g = sampled(64, 20, [](double x) { return std::exp(-x * x); });
  g.samples[7] += 1e-3;
  RunConfig cfg;
  cfg.dt = 0.2;
  cfg.t_final = 200;
  cfg.method = Method::RK4;
  CHECK_THROWS_WITH_AS(run(g, lin, {}, cfg), doctest::Contains("instability"), SolverAbort);

  cfg.dt = 2;
  cfg.t_final = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK_THROWS_AS(run(g, lin, {}, cfg), std::invalid_argument);
  cfg.dt = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.dt = 0.1;
  cfg.observable_stride = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  const CompiledRHS strict = CompiledRHS::compile(corpus_equation("log_power_m3.lag"), natural({{"c", 0.2}}), 1, 0.0);
  FieldGrid node = g;
  node.samples[3] = 0;
  RunConfig ok;
  ok.dt = 1e-3;
  ok.t_final = 1e-2;
  ok.method = Method::RK4;
  CHECK_THROWS_WITH_AS(run(node, strict, {}, ok), doctest::Contains("singular"), SolverAbort);
}

TEST_CASE("sink cadence") {
  const CompiledRHS lin = CompiledRHS::compile(corpus_equation("linear.lag"), natural(), 1);
  const FieldGrid g = sampled(64, 20, [](double x) { return std::exp(-x * x); });
  RunConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 1.005;
  cfg.observable_stride = 10;
  cfg.snapshot_stride = 40;
  Recorder rec;
  const RunSummary s = run(g, lin, {}, cfg, {&rec});
  CHECK(s.steps == 101);
  CHECK(s.final_time == 1.005);
  REQUIRE(rec.records.size() == 12);
  for (std::size_t k = 1; k < rec.records.size(); ++k) CHECK(rec.records[k].t > rec.records[k - 1].t);
  CHECK(rec.records.back().t == 1.005);
  REQUIRE(rec.snapshots.size() == 4);
  CHECK(rec.snapshots[0].second == 0.0);
  CHECK(rec.snapshots[1].second == doctest::Approx(0.4));
  CHECK(rec.snapshots[3].first == 3);
}
