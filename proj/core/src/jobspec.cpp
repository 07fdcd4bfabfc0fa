#include "nlse/jobspec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "nlse/dimension.hpp"
#include "nlse/dsl.hpp"
#include "nlse/io.hpp"

namespace nlse {
namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_real(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

double real_value(const std::string& key, const std::string& text) {
  double v = 0;
  if (!parse_real(trim(text), v)) throw JobSpecError(fmt::format("{}: '{}' is not a finite real number", key, text));
  return v;
}

int int_value(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw JobSpecError(fmt::format("{}: '{}' is not an integer", key, text));
  return v;
}

std::string g17(double v) { return fmt::format("{:.17g}", v); }

using Section = std::map<std::string, std::string>;

std::map<std::string, Section> read_ini(const fs::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw JobSpecError(fmt::format("{}:{}: {}", path.string(), e.line(), e.message()));
  }
  static const std::set<std::string> known = {"lagrangian", "constants", "dimensionless", "potential", "initial",
                                              "grid",       "run",       "output",        "check"};
  std::map<std::string, Section> out;
  for (const auto& [name, section] : tree) {
    if (!known.count(name)) throw JobSpecError(fmt::format("unknown section [{}]", name));
    if (section.empty() && !section.data().empty())
      throw JobSpecError(fmt::format("key '{}' outside of any section", name));
    for (const auto& [key, value] : section) out[name][key] = trim(value.data());
  }
  return out;
}

class SectionReader {
public:
  SectionReader(std::string name, const Section* s, std::set<std::string> allowed)
      : name_(std::move(name)), s_(s), allowed_(std::move(allowed)) {
    if (s_ == nullptr) return;
    for (const auto& [k, v] : *s_)
      if (!allowed_.count(k)) throw JobSpecError(fmt::format("[{}]: unknown key '{}'", name_, k));
  }
  bool has(const std::string& k) const { return s_ != nullptr && s_->count(k) > 0; }
  std::string text(const std::string& k, const std::string& fallback = {}) const {
    return has(k) ? s_->at(k) : fallback;
  }
  double real(const std::string& k, double fallback) const {
    return has(k) ? real_value(name_ + "." + k, s_->at(k)) : fallback;
  }
  int integer(const std::string& k, int fallback) const {
    return has(k) ? int_value(name_ + "." + k, s_->at(k)) : fallback;
  }

private:
  std::string name_;
  const Section* s_;
  std::set<std::string> allowed_;
};

const Section* find(const std::map<std::string, Section>& ini, const std::string& name) {
  auto it = ini.find(name);
  return it == ini.end() ? nullptr : &it->second;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw JobSpecError(fmt::format("{}: no such file '{}'", what, p.string()));
}

bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

double real_binding(const ConstantBindings& b, const std::string& name) { return b.at(name).real(); }

double linf(const ComplexField& a, const ComplexField& b) {
  double m = 0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

// N / (psi^p psi*^q) as a field-free expression, if it is one.
std::optional<Expr> field_free_ratio(const Expr& n, int p, int q) {
  const Expr r = canonicalize(n * Expr::pow(Expr::psi(), -p) * Expr::pow(Expr::psi_star(), -q));
  if (has_field_dependence(r) || has_time_derivatives(r)) return std::nullopt;
  return r;
}

cdouble evaluate_at_density(const Expr& e, const ConstantBindings& bindings, double rho) {
  PointValues at;
  at.psi = std::sqrt(rho);
  at.psi_star = std::sqrt(rho);
  for (const auto& [k, v] : bindings) at.constants[k] = v;
  return nlse::evaluate(e, at);
}

}  // namespace

cdouble parse_complex(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) throw JobSpecError("empty complex constant");
  auto fail = [&] { return JobSpecError(fmt::format("'{}' is not a complex number of the form re+imi", raw)); };
  if (s.back() != 'i') {
    double re = 0;
    if (!parse_real(s, re)) throw fail();
    return {re, 0.0};
  }
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t j = body.size(); j-- > 1;) {
    if ((body[j] == '+' || body[j] == '-') && body[j - 1] != 'e' && body[j - 1] != 'E') {
      split = j;
      break;
    }
  }
  const std::string re_text = split == std::string::npos ? "" : body.substr(0, split);
  std::string im_text = split == std::string::npos ? body : body.substr(split);
  if (im_text.empty() || im_text == "+") im_text = "1";
  if (im_text == "-") im_text = "-1";
  double re = 0, im = 0;
  if (!re_text.empty() && !parse_real(re_text, re)) throw fail();
  if (!parse_real(im_text, im)) throw fail();
  return {re, im};
}

std::string format_complex(cdouble v) {
  return fmt::format("{:.17g}{}{:.17g}i", v.real(), std::signbit(v.imag()) ? "-" : "+", std::abs(v.imag()));
}

JobSpec load_jobspec(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw JobSpecError(fmt::format("no such file '{}'", path.string()));
  const auto ini = read_ini(path);
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");

  JobSpec job;
  job.source = path;

  SectionReader lag("lagrangian", find(ini, "lagrangian"), {"file"});
  if (!lag.has("file")) throw JobSpecError("[lagrangian]: 'file' is required");
  job.lagrangian_path = resolve(base, lag.text("file"));
  require_file(job.lagrangian_path, "[lagrangian] file");

  if (const Section* s = find(ini, "constants")) {
    for (const auto& [k, v] : *s) {
      if (k != "hbar" && k != "m" && !is_coupling_name(k))
        throw JobSpecError(fmt::format("[constants]: '{}' is not a coupling name", k));
      try {
        job.constant_bindings[k] = parse_complex(v);
      } catch (const JobSpecError& e) {
        throw JobSpecError(fmt::format("[constants] {}: {}", k, e.what()));
      }
    }
  }
  if (const Section* s = find(ini, "dimensionless")) {
    for (const auto& [k, v] : *s) {
      if (!is_coupling_name(k)) throw JobSpecError(fmt::format("[dimensionless]: '{}' is not a coupling name", k));
      if (job.constant_bindings.count(k))
        throw JobSpecError(fmt::format("coupling '{}' is bound in both [constants] and [dimensionless]", k));
      job.dimensionless[k] = real_value("dimensionless." + k, v);
    }
  }

  SectionReader run("run", find(ini, "run"),
                    {"dt", "t_final", "method", "snapshot_stride", "observable_stride", "units", "epsilon"});
  job.run.dt = run.real("dt", job.run.dt);
  job.run.t_final = run.real("t_final", job.run.t_final);
  job.run.snapshot_stride = run.integer("snapshot_stride", job.run.snapshot_stride);
  job.run.observable_stride = run.integer("observable_stride", job.run.observable_stride);
  job.run.epsilon = run.real("epsilon", job.run.epsilon);
  const std::string method = run.text("method", "auto");
  if (method == "auto") job.run.method = Method::Auto;
  else if (method == "strang") job.run.method = Method::Strang;
  else if (method == "rk4") job.run.method = Method::RK4;
  else throw JobSpecError(fmt::format("[run] method: '{}' is not one of auto, strang, rk4", method));
  const std::string units = run.text("units", "natural");
  if (units == "natural") job.run.units = Units::Natural;
  else if (units == "si") job.run.units = Units::SI;
  else throw JobSpecError(fmt::format("[run] units: '{}' is not one of natural, si", units));
  try {
    job.run.validate();
  } catch (const std::invalid_argument& e) {
    throw JobSpecError(fmt::format("[run] {}", e.what()));
  }
  if (!job.dimensionless.empty() && job.run.units != Units::SI)
    throw JobSpecError("[dimensionless] couplings require units = si");

  SectionReader grid("grid", find(ini, "grid"), {"dimension", "points", "box"});
  job.dimension = grid.integer("dimension", job.dimension);
  job.points = grid.integer("points", job.points);
  job.box = grid.real("box", job.box);

  SectionReader init("initial", find(ini, "initial"),
                     {"kind", "sigma", "k", "center", "center_y", "amplitude", "velocity", "b", "file"});
  if (!init.has("kind")) throw JobSpecError("[initial]: 'kind' is required");
  const std::string kind = init.text("kind");
  InitialSpec& ic = job.initial;
  if (kind == "gaussian") ic.kind = InitialSpec::Kind::Gaussian;
  else if (kind == "sech") ic.kind = InitialSpec::Kind::Sech;
  else if (kind == "gausson") ic.kind = InitialSpec::Kind::Gausson;
  else if (kind == "file") ic.kind = InitialSpec::Kind::File;
  else throw JobSpecError(fmt::format("[initial] kind: '{}' is not one of gaussian, sech, gausson, file", kind));
  ic.sigma = init.real("sigma", ic.sigma);
  ic.k = init.real("k", ic.k);
  ic.center = init.real("center", ic.center);
  ic.center_y = init.real("center_y", ic.center_y);
  ic.amplitude = init.real("amplitude", ic.amplitude);
  ic.velocity = init.real("velocity", ic.velocity);
  ic.b = init.real("b", ic.b);
  if (!(ic.sigma > 0)) throw JobSpecError("[initial] sigma must be positive");
  if (!(ic.amplitude > 0)) throw JobSpecError("[initial] amplitude must be positive");
  if (ic.kind == InitialSpec::Kind::Gausson && !(ic.b > 0)) throw JobSpecError("[initial] b must be positive");
  if (ic.kind == InitialSpec::Kind::File) {
    if (!init.has("file")) throw JobSpecError("[initial] kind = file needs 'file'");
    ic.path = resolve(base, init.text("file"));
    require_file(ic.path, "[initial] file");
    FieldGrid f;
    try {
      f = read_snapshot(ic.path);
    } catch (const std::exception& e) {
      throw JobSpecError(fmt::format("[initial] file: {}", e.what()));
    }
    if (find(ini, "grid") != nullptr &&
        (f.dimension != job.dimension || f.points[0] != job.points || f.box[0] != job.box))
      throw JobSpecError("[grid] disagrees with the shape of the initial snapshot");
    job.dimension = f.dimension;
    job.points = f.points[0];
    job.box = f.box[0];
  } else if (init.has("file")) {
    throw JobSpecError("[initial] 'file' is only valid with kind = file");
  }
  if (job.dimension != 1 && job.dimension != 2) throw JobSpecError("[grid] dimension must be 1 or 2");
  if (!is_power_of_two(job.points)) throw JobSpecError("[grid] points must be a power of two");
  if (!(job.box > 0)) throw JobSpecError("[grid] box must be positive");
  if (ic.kind == InitialSpec::Kind::Sech && job.dimension != 1)
    throw JobSpecError("[initial] the sech profile is one-dimensional");

  SectionReader pot("potential", find(ini, "potential"), {"kind", "omega", "file"});
  const std::string pkind = pot.text("kind", "zero");
  if (pkind == "zero") job.potential.kind = PotentialSpec::Kind::Zero;
  else if (pkind == "harmonic") job.potential.kind = PotentialSpec::Kind::Harmonic;
  else if (pkind == "file") job.potential.kind = PotentialSpec::Kind::File;
  else throw JobSpecError(fmt::format("[potential] kind: '{}' is not one of zero, harmonic, file", pkind));
  job.potential.omega = pot.real("omega", job.potential.omega);
  if (job.potential.kind == PotentialSpec::Kind::File) {
    if (!pot.has("file")) throw JobSpecError("[potential] kind = file needs 'file'");
    job.potential.path = resolve(base, pot.text("file"));
    require_file(job.potential.path, "[potential] file");
  }

  SectionReader out("output", find(ini, "output"), {"dir"});
  job.output_dir = resolve(base, out.text("dir", "out"));

  SectionReader check("check", find(ini, "check"), {"tolerance"});
  if (check.has("tolerance")) {
    job.check_tolerance = check.real("tolerance", 0);
    if (!(*job.check_tolerance > 0)) throw JobSpecError("[check] tolerance must be positive");
  }
  return job;
}

ConstantBindings resolve_bindings(const JobSpec& job, const EvolutionEquation& eq) {
  ConstantBindings b;
  if (job.run.units == Units::SI) {
    b["hbar"] = si::hbar;
    b["m"] = si::electron_mass;
  } else {
    b["hbar"] = 1.0;
    b["m"] = 1.0;
  }
  for (const auto& [k, v] : job.constant_bindings) b[k] = v;
  const cdouble hbar = b["hbar"], mass = b["m"];
  for (const auto& [k, g] : job.dimensionless) {
    const auto names = coupling_names(eq.added_term);
    if (std::find(names.begin(), names.end(), k) == names.end())
      throw JobSpecError(fmt::format("[dimensionless]: the Lagrangian has no coupling '{}'", k));
    const HbarMcExpansion x = express_in_hbar_m_c(coupling_dimension(eq.added_term, k, job.dimension));
    if (!x.dimensionless_residual)
      throw JobSpecError(fmt::format("[dimensionless]: coupling '{}' has no hbar-m-c expansion", k));
    b[k] = g * std::pow(hbar.real(), x.hbar_exp.to_double()) * std::pow(mass.real(), x.mass_exp.to_double()) *
           std::pow(si::c, x.c_exp.to_double());
  }
  for (const auto& name : coupling_names(eq.lagrangian))
    if (!b.count(name)) throw JobSpecError(fmt::format("coupling '{}' has no value in [constants]", name));
  return b;
}

FieldGrid initial_field(const JobSpec& job, const ConstantBindings& bindings) {
  const InitialSpec& ic = job.initial;
  if (ic.kind == InitialSpec::Kind::File) return read_snapshot(ic.path);
  FieldGrid f = FieldGrid::make(job.dimension, job.points, job.box);
  const double hbar = real_binding(bindings, "hbar"), mass = real_binding(bindings, "m");
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double x = f.coordinate_of(j, 0);
    const double y = job.dimension == 2 ? f.coordinate_of(j, 1) : 0.0;
    switch (ic.kind) {
      case InitialSpec::Kind::Gaussian: {
        const double s2 = ic.sigma * ic.sigma;
        const double norm = std::pow(2 * std::numbers::pi * s2, -0.25 * job.dimension);
        double r2 = (x - ic.center) * (x - ic.center);
        if (job.dimension == 2) r2 += (y - ic.center_y) * (y - ic.center_y);
        f.samples[j] = norm * std::exp(cdouble(-r2 / (4 * s2), ic.k * x));
        break;
      }
      case InitialSpec::Kind::Sech:
        f.samples[j] = ic.amplitude / std::cosh(ic.amplitude * (x - ic.center)) *
                       std::exp(cdouble(0, ic.velocity * (x - ic.center)));
        break;
      case InitialSpec::Kind::Gausson: {
        const double gamma = ic.b * mass / (hbar * hbar);
        double r2 = (x - ic.center) * (x - ic.center);
        if (job.dimension == 2) r2 += (y - ic.center_y) * (y - ic.center_y);
        f.samples[j] = ic.amplitude * std::exp(-gamma * r2);
        break;
      }
      case InitialSpec::Kind::File: break;
    }
  }
  return f;
}

ComplexField potential_field(const JobSpec& job, const FieldGrid& grid, const ConstantBindings& bindings) {
  ComplexField v(grid.size());
  switch (job.potential.kind) {
    case PotentialSpec::Kind::Zero: break;
    case PotentialSpec::Kind::Harmonic: {
      const double mass = real_binding(bindings, "m"), w = job.potential.omega;
      for (std::size_t j = 0; j < v.size(); ++j) {
        double r2 = 0;
        for (int a = 0; a < grid.dimension; ++a) r2 += grid.coordinate_of(j, a) * grid.coordinate_of(j, a);
        v[j] = 0.5 * mass * w * w * r2;
      }
      break;
    }
    case PotentialSpec::Kind::File: {
      const FieldGrid p = read_snapshot(job.potential.path);
      if (!p.same_shape(grid)) throw JobSpecError("[potential] file is not sampled on the job grid");
      v = p.samples;
      break;
    }
  }
  return v;
}

std::string manifest_text(const JobSpec& job, const EvolutionEquation& eq, const ConstantBindings& bindings,
                          Method resolved) {
  std::string m;
  auto line = [&](const std::string& k, const std::string& v) { m += k + " = " + v + "\n"; };
  line("job", job.source.string());
  line("lagrangian.file", job.lagrangian_path.string());
  line("lagrangian.canonical", pretty_print(eq.lagrangian));
  line("equation.nonlinearity", pretty_print(eq.nonlinearity));
  line("equation.dimension", std::to_string(eq.dimension));
  for (const auto& [k, v] : bindings) line("constants." + k, format_complex(v));
  for (const auto& [k, g] : job.dimensionless) line("dimensionless." + k, g17(g));
  switch (job.potential.kind) {
    case PotentialSpec::Kind::Zero: line("potential.kind", "zero"); break;
    case PotentialSpec::Kind::Harmonic:
      line("potential.kind", "harmonic");
      line("potential.omega", g17(job.potential.omega));
      break;
    case PotentialSpec::Kind::File:
      line("potential.kind", "file");
      line("potential.file", job.potential.path.string());
      break;
  }
  const InitialSpec& ic = job.initial;
  switch (ic.kind) {
    case InitialSpec::Kind::Gaussian:
      line("initial.kind", "gaussian");
      line("initial.sigma", g17(ic.sigma));
      line("initial.k", g17(ic.k));
      line("initial.center", g17(ic.center));
      if (job.dimension == 2) line("initial.center_y", g17(ic.center_y));
      break;
    case InitialSpec::Kind::Sech:
      line("initial.kind", "sech");
      line("initial.amplitude", g17(ic.amplitude));
      line("initial.velocity", g17(ic.velocity));
      line("initial.center", g17(ic.center));
      break;
    case InitialSpec::Kind::Gausson:
      line("initial.kind", "gausson");
      line("initial.b", g17(ic.b));
      line("initial.amplitude", g17(ic.amplitude));
      line("initial.center", g17(ic.center));
      if (job.dimension == 2) line("initial.center_y", g17(ic.center_y));
      break;
    case InitialSpec::Kind::File:
      line("initial.kind", "file");
      line("initial.file", ic.path.string());
      break;
  }
  line("grid.dimension", std::to_string(job.dimension));
  line("grid.points", std::to_string(job.points));
  line("grid.box", g17(job.box));
  line("run.dt", g17(job.run.dt));
  line("run.t_final", g17(job.run.t_final));
  line("run.method", to_string(job.run.method));
  line("run.method_resolved", to_string(resolved));
  line("run.snapshot_stride", std::to_string(job.run.snapshot_stride));
  line("run.observable_stride", std::to_string(job.run.observable_stride));
  line("run.units", to_string(job.run.units));
  line("run.epsilon", g17(job.run.epsilon));
  line("output.dir", job.output_dir.string());
  if (job.check_tolerance) line("check.tolerance", g17(*job.check_tolerance));
  return m;
}

std::optional<AnalyticCheck> analytic_check(const JobSpec& job, const EvolutionEquation& eq,
                                            const ConstantBindings& bindings, Warnings* warnings) {
  auto skip = [&](const std::string& why) -> std::optional<AnalyticCheck> {
    if (warnings != nullptr) warnings->push_back("no analytic check: " + why);
    return std::nullopt;
  };
  if (job.potential.kind != PotentialSpec::Kind::Zero) return skip("the potential is not zero");
  const double hbar = real_binding(bindings, "hbar"), mass = real_binding(bindings, "m");
  const InitialSpec ic = job.initial;
  const FieldGrid initial = initial_field(job, bindings);

  switch (ic.kind) {
    case InitialSpec::Kind::Gaussian: {
      if (!eq.is_linear()) return skip("the Gaussian width law holds for the linear equation only");
      const double s0 = ic.sigma;
      return AnalyticCheck{
          "width-law",
          "relative width error against sigma(t) = sigma0 sqrt(1 + (hbar t / 2 m sigma0^2)^2)",
          [=](const FieldGrid& f, double t) {
            const double tau = hbar * t / (2 * mass * s0 * s0);
            const double expected = s0 * std::sqrt(1 + tau * tau);
            double err = 0;
            for (double w : width(f)) err = std::max(err, std::abs(w - expected) / expected);
            return err;
          }};
    }
    case InitialSpec::Kind::Sech: {
      if (hbar != 1.0 || mass != 1.0) return skip("the sech profile check assumes hbar = m = 1");
      const auto ratio = field_free_ratio(eq.nonlinearity, 2, 1);
      if (!ratio) return skip("the nonlinearity is not cubic");
      const cdouble c = evaluate_at_density(*ratio, bindings, 1.0);
      if (std::abs(c.imag()) > 1e-14 * std::abs(c) || !(c.real() < 0))
        return skip("the cubic coupling is not real and focusing");
      const double g = -c.real(), a = ic.amplitude, v = ic.velocity, x0 = ic.center;
      if (std::abs(g - 1) > 1e-12) return skip(fmt::format("A sech(A x) is a soliton for g = 1, not g = {}", g));
      const double eta = a;
      return AnalyticCheck{
          "soliton", "L-infinity error against the travelling sech profile",
          [=](const FieldGrid& f, double t) {
            ComplexField exact(f.size());
            for (std::size_t j = 0; j < f.size(); ++j) {
              const double x = f.coordinate_of(j, 0);
              exact[j] = a / std::cosh(eta * (x - x0 - v * t)) *
                         std::exp(cdouble(0, v * (x - x0) + 0.5 * (eta * eta - v * v) * t));
            }
            return linf(f.samples, exact);
          }};
    }
    case InitialSpec::Kind::Gausson: {
      const Expr ratio = canonicalize(eq.nonlinearity * Expr::pow(Expr::psi(), -1));
      if (!depends_only_on_density(ratio) || has_spatial_derivatives(ratio))
        return skip("the nonlinearity is not of the form (alpha ln|psi|^2 + beta) psi");
      const cdouble r1 = evaluate_at_density(ratio, bindings, 1.0);
      const cdouble re = evaluate_at_density(ratio, bindings, std::exp(1.0));
      const cdouble re2 = evaluate_at_density(ratio, bindings, std::exp(2.0));
      const cdouble alpha = re - r1;
      if (std::abs(re2 - r1 - 2.0 * alpha) > 1e-12 * (1 + std::abs(alpha)))
        return skip("the nonlinearity is not linear in ln|psi|^2");
      if (std::abs(alpha.imag()) > 1e-14 * std::abs(alpha) || !(alpha.real() < 0))
        return skip("the logarithmic coupling is not real and negative");
      if (std::abs(-alpha.real() - ic.b) > 1e-12 * ic.b && warnings != nullptr)
        warnings->push_back(fmt::format("Gausson b = {} differs from the equation's logarithmic coupling {}", ic.b,
                                        -alpha.real()));
      ComplexField rho0(initial.size());
      for (std::size_t j = 0; j < rho0.size(); ++j) rho0[j] = std::norm(initial.samples[j]);
      return AnalyticCheck{"gausson", "L-infinity error of |psi|^2 against the stationary initial density",
                           [=](const FieldGrid& f, double) {
                             double m = 0;
                             for (std::size_t j = 0; j < f.size(); ++j)
                               m = std::max(m, std::abs(std::norm(f.samples[j]) - rho0[j].real()));
                             return m;
                           }};
    }
    case InitialSpec::Kind::File: break;
  }
  return skip("the initial condition is read from a file");
}

}  // namespace nlse
