#include "isogeo/cli.hpp"

#include "isogeo/io.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <optional>
#include <sstream>

namespace isogeo::cli {
namespace {

using io::json;

struct RunConfig {
  double hbar = 1.0;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::size_t steps = 1000;
  bool json_output = false;
  bool emit_hamiltonian = false;
  std::string output;

  void validate() const {
    if (!(hbar > 0)) fail(ErrorKind::InvalidArgument, "--hbar must be positive");
    if (!(tol > 0)) fail(ErrorKind::InvalidArgument, "--tol must be positive");
    if (steps < 2) fail(ErrorKind::InvalidArgument, "--steps must be at least 2");
  }

  Tolerances tolerances() const { return Tolerances::uniform(tol); }
};

// Dispersion and length agree to quadrature accuracy on minimal evolutions.
constexpr double kEqualityTolerance = 1e-6;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string fmt_spectrum(const Spectrum<double>& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.values().size(); ++i) {
    if (i) out += ",";
    out += fmt(s.values()[i]);
  }
  return out + ")";
}

json spectrum_json(const Spectrum<double>& s) {
  json blocks = json::array();
  for (const auto& [value, count] : s.multiplicities()) blocks.push_back({{"value", value}, {"multiplicity", count}});
  return {{"values", s.values()}, {"hilbert_dim", s.hilbert_dim()}, {"blocks", std::move(blocks)}};
}

void emit(const RunConfig& cfg, std::ostream& out, const json& payload) {
  if (!cfg.output.empty()) io::write_json_file(cfg.output, payload);
  if (cfg.json_output || cfg.output.empty()) out << payload.dump(2) << '\n';
}

bool is_series(const json& j) { return j.is_object() && j.contains("times"); }

HamiltonianSchedule<double> load_hamiltonian(const json& j, std::optional<double> t0, std::optional<double> t1,
                                             const RunConfig& cfg) {
  if (is_series(j)) return io::schedule_from_json(j, cfg.hbar, cfg.tolerances());
  if (!t0 || !t1) fail(ErrorKind::InvalidArgument, "a constant Hamiltonian needs t0 and t1");
  if (!(*t1 > *t0)) fail(ErrorKind::InvalidArgument, "t1 must exceed t0");
  const Observable<double> h(io::matrix_from_json(j), cfg.hbar, cfg.tolerances());
  return HamiltonianSchedule<double>::constant(h, *t0, *t1, cfg.steps);
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& path, const RunConfig& cfg, std::ostream& out) {
  const json j = io::read_json_file(path);
  const CMatrix<double> m = io::matrix_from_json(j);
  const auto tol = cfg.tolerances();
  std::string kind = j.value("kind", m.rows() == m.cols() ? "density" : "purification");
  json report;
  if (kind == "density") {
    const auto rho = density_from_matrix(m, tol);
    report = {{"kind", "density"}, {"valid", true}, {"spectrum", spectrum_json(rho.spectrum())}};
    if (!cfg.json_output) {
      out << "valid density operator, σ=" << fmt_spectrum(rho.spectrum()) << '\n';
      out << "rank " << rho.spectrum().rank() << " in dimension " << rho.dim() << ", multiplicities";
      for (const auto& [v, c] : rho.spectrum().multiplicities()) out << " (" << fmt(v) << "," << c << ")";
      out << '\n';
    }
  } else if (kind == "purification") {
    const CMatrix<double> gram = m.adjoint() * m;
    std::vector<double> diag(static_cast<std::size_t>(gram.rows()));
    for (Index i = 0; i < gram.rows(); ++i) diag[static_cast<std::size_t>(i)] = gram(i, i).real();
    const auto sigma = validate_spectrum(diag, m.rows(), tol);
    const Purification<double> psi(m, sigma, tol);
    report = {{"kind", "purification"}, {"valid", true}, {"spectrum", spectrum_json(sigma)},
              {"fiber_residual", psi.fiber_residual()}};
    if (!cfg.json_output) {
      out << "valid purification, σ=" << fmt_spectrum(sigma) << '\n';
      out << "fiber residual " << fmt(psi.fiber_residual()) << '\n';
    }
  } else {
    throw io::IoError("ParseError: unknown kind '" + kind + "'");
  }
  if (cfg.json_output) out << report.dump(2) << '\n';
  return kOk;
}

int cmd_uncertainty(const std::string& obs_path, const std::string& rho_path, const RunConfig& cfg, std::ostream& out) {
  const auto tol = cfg.tolerances();
  const Observable<double> a(io::matrix_from_json(io::read_json_file(obs_path)), cfg.hbar, tol);
  const auto rho = density_from_matrix(io::matrix_from_json(io::read_json_file(rho_path)), tol);
  const auto bound = dispersion_bound_check(a, rho, tol);
  const auto terms = variance_decomposition(a, standard_purification(rho, tol));
  if (cfg.json_output) {
    out << json{{"uncertainty", bound.lhs},
                {"hbar_sqrt_g", bound.rhs},
                {"equality", bound.is_equality},
                {"horizontal", bound.horizontal},
                {"g_term", terms.g_term},
                {"square_of_mean_term", terms.square_of_mean_term},
                {"second_moment_term", terms.second_moment_term}}
               .dump(2)
        << '\n';
    return kOk;
  }
  out << "uncertainty        " << fmt(bound.lhs) << '\n';
  out << "hbar*sqrt(g)       " << fmt(bound.rhs) << '\n';
  out << "bound              " << (bound.is_equality ? "equality" : "strict") << '\n';
  out << "g_term             " << fmt(terms.g_term) << '\n';
  out << "square_of_mean     " << fmt(terms.square_of_mean_term) << '\n';
  out << "second_moment      " << fmt(terms.second_moment_term) << '\n';
  return kOk;
}

int cmd_dispersion(const std::string& h_path, const std::string& rho_path, std::optional<double> t0,
                   std::optional<double> t1, const RunConfig& cfg, std::ostream& out) {
  const auto tol = cfg.tolerances();
  const auto h = load_hamiltonian(io::read_json_file(h_path), t0, t1, cfg);
  const auto rho0 = density_from_matrix(io::matrix_from_json(io::read_json_file(rho_path)), tol);
  const auto curve = von_neumann_evolve(h, rho0, tol);
  const double dispersion = energy_dispersion(h, curve, tol);
  const double length = curve_length(curve, tol);
  const double slack = dispersion - length;
  const bool equality = std::abs(slack) <= kEqualityTolerance * std::max(1.0, length);
  if (cfg.json_output) {
    out << json{{"dispersion", dispersion}, {"length", length}, {"slack", slack}, {"equality", equality}}.dump(2)
        << '\n';
    return kOk;
  }
  out << "energy dispersion  " << fmt(dispersion) << '\n';
  out << "curve length       " << fmt(length) << '\n';
  out << "slack              " << fmt(slack) << '\n';
  out << "bound              " << (equality ? "equality" : "strict") << '\n';
  return kOk;
}

int cmd_evolve(const std::string& h_path, const std::string& rho_path, std::optional<double> t0,
               std::optional<double> t1, const RunConfig& cfg, std::ostream& out) {
  const auto tol = cfg.tolerances();
  const auto h = load_hamiltonian(io::read_json_file(h_path), t0, t1, cfg);
  const auto rho0 = density_from_matrix(io::matrix_from_json(io::read_json_file(rho_path)), tol);
  const auto curve = von_neumann_evolve(h, rho0, tol);
  emit(cfg, out, io::curve_to_json(curve));
  return kOk;
}

int cmd_lift(const std::string& curve_path, const std::string& psi0_path, const RunConfig& cfg, std::ostream& out) {
  const auto tol = cfg.tolerances();
  const auto curve = io::curve_from_json(io::read_json_file(curve_path), tol);
  const auto psi0 = psi0_path.empty()
                        ? standard_purification(curve.front(), tol)
                        : Purification<double>(io::matrix_from_json(io::read_json_file(psi0_path)), curve.spectrum(), tol);
  const auto lift = horizontal_lift(curve, psi0, tol);
  const double fiber = lift_fiber_residual(lift, curve);
  const double horizontality = horizontality_residual(lift);
  const double lift_len = lift_length(lift);
  const double curve_len = curve_length(curve, tol);
  if (!cfg.output.empty()) io::write_json_file(cfg.output, io::lift_to_json(lift));
  if (cfg.json_output) {
    json j = {{"fiber_residual", fiber}, {"horizontality_residual", horizontality},
              {"lift_length", lift_len}, {"curve_length", curve_len}};
    if (cfg.output.empty()) j["lift"] = io::lift_to_json(lift);
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "samples            " << lift.times.size() << '\n';
  out << "fiber residual     " << fmt(fiber) << '\n';
  out << "horizontality      " << fmt(horizontality) << '\n';
  out << "lift length        " << fmt(lift_len) << '\n';
  out << "curve length       " << fmt(curve_len) << '\n';
  return kOk;
}

int cmd_distance(const std::string& rho0_path, const std::string& rho1_path, std::size_t iterations,
                 Index segments, const RunConfig& cfg, std::ostream& out) {
  const auto tol = cfg.tolerances();
  const auto rho0 = density_from_matrix(io::matrix_from_json(io::read_json_file(rho0_path)), tol);
  const auto rho1 = density_from_matrix(io::matrix_from_json(io::read_json_file(rho1_path)), tol);
  DistanceOptions<double> options;
  options.segments = segments;
  const auto est = distance_upper_bound(rho0, rho1, iterations, cfg.seed, options, tol);
  const bool apart = distinguishable(rho0, rho1, tol);
  const double half_pi = std::numbers::pi / 2;

  json schedule;
  if (cfg.emit_hamiltonian) {
    const auto [times, ops] = est.piecewise_hamiltonians(1.0, cfg.hbar);
    json mats = json::array();
    for (const auto& m : ops) mats.push_back(io::matrix_to_json(m));
    schedule = {{"times", times}, {"matrices", std::move(mats)}, {"hbar", cfg.hbar},
                {"duration", 1.0}, {"interpolation", "piecewise_constant"}};
    if (!cfg.output.empty()) io::write_json_file(cfg.output, schedule);
  }

  if (cfg.json_output) {
    json j = {{"distance_upper_bound", est.length}, {"distinguishable", apart}, {"history", est.history}};
    if (apart) j["lower_bound"] = half_pi;
    if (cfg.emit_hamiltonian && cfg.output.empty()) j["hamiltonian"] = schedule;
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "distance upper bound  " << fmt(est.length) << '\n';
  if (apart) out << "distinguishable endpoints: distance >= pi/2 = " << fmt(half_pi) << '\n';
  if (cfg.emit_hamiltonian) {
    if (cfg.output.empty()) {
      out << schedule.dump(2) << '\n';
    } else {
      out << "hamiltonian schedule written to " << cfg.output << '\n';
    }
  }
  return kOk;
}

int cmd_bures_example(double p1, double p2, double eps, const RunConfig& cfg, std::ostream& out) {
  const auto report = example_gap_report(p1, p2, eps, cfg.tolerances());
  emit(cfg, out, io::report_to_json(report));
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometry of isospectral mixed-state dynamics"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--hbar", cfg.hbar, "Reduced Planck constant")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Validation tolerance")->envname("ISOGEO_TOL")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--steps", cfg.steps, "Time steps for uniform grids")->capture_default_str();
  app.add_flag("--json", cfg.json_output, "Machine-readable output");
  app.add_flag("--emit-hamiltonian", cfg.emit_hamiltonian, "Emit the synthesized Hamiltonian schedule");
  app.add_option("--output", cfg.output, "Write the JSON result to this path");

  std::string path_a, path_b, psi0_path;
  std::optional<double> t0, t1;
  double p1 = 0, p2 = 0, eps = 0;
  std::size_t iterations = 20;
  Index segments = 32;

  auto* validate = app.add_subcommand("validate", "Validate a density operator or purification");
  validate->add_option("path", path_a)->required();

  auto* uncertainty_cmd = app.add_subcommand("uncertainty", "Uncertainty and its geometric lower bound");
  uncertainty_cmd->add_option("observable", path_a)->required();
  uncertainty_cmd->add_option("rho", path_b)->required();

  auto* dispersion = app.add_subcommand("dispersion", "Energy dispersion against curve length");
  dispersion->add_option("hamiltonian", path_a)->required();
  dispersion->add_option("rho0", path_b)->required();
  dispersion->add_option("t0", t0);
  dispersion->add_option("t1", t1);

  auto* evolve = app.add_subcommand("evolve", "Integrate the von Neumann equation");
  evolve->add_option("hamiltonian", path_a)->required();
  evolve->add_option("rho0", path_b)->required();
  evolve->add_option("t0", t0);
  evolve->add_option("t1", t1);

  auto* lift = app.add_subcommand("lift", "Horizontal lift of a sampled curve");
  lift->add_option("curve", path_a)->required();
  lift->add_option("--psi0", psi0_path, "Initial purification");

  auto* distance = app.add_subcommand("distance", "Upper bound for the distance between isospectral states");
  distance->add_option("rho0", path_a)->required();
  distance->add_option("rho1", path_b)->required();
  distance->add_option("--iterations", iterations, "Shortening iterations")->capture_default_str();
  distance->add_option("--segments", segments, "Path segments")->capture_default_str();

  auto* bures = app.add_subcommand("bures-example", "Bures comparison for the two-level rotation family");
  bures->add_option("p1", p1)->required();
  bures->add_option("p2", p2)->required();
  bures->add_option("eps", eps)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kIoFailure;
  }

  try {
    cfg.validate();
    if (validate->parsed()) return cmd_validate(path_a, cfg, out);
    if (uncertainty_cmd->parsed()) return cmd_uncertainty(path_a, path_b, cfg, out);
    if (dispersion->parsed()) return cmd_dispersion(path_a, path_b, t0, t1, cfg, out);
    if (evolve->parsed()) return cmd_evolve(path_a, path_b, t0, t1, cfg, out);
    if (lift->parsed()) return cmd_lift(path_a, psi0_path, cfg, out);
    if (distance->parsed()) return cmd_distance(path_a, path_b, iterations, segments, cfg, out);
    if (bures->parsed()) return cmd_bures_example(p1, p2, eps, cfg, out);
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainFailure;
  } catch (const io::IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "error: ParseError: " << e.what() << '\n';
    return kIoFailure;
  }
  return kIoFailure;
}

}  // namespace isogeo::cli
