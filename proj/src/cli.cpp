#include "photon_ur/cli.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "photon_ur/expression.hpp"
#include "photon_ur/field_synthesis.hpp"
#include "photon_ur/functionals.hpp"
#include "photon_ur/report_io.hpp"
#include "photon_ur/variational.hpp"

#ifndef PHOTON_UR_VERSION
#define PHOTON_UR_VERSION "0.0.0"
#endif

namespace photon_ur {

using nlohmann::json;

const char *version() { return PHOTON_UR_VERSION; }

int exit_code(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::invalid_argument:
  case ErrorKind::syntax:
  case ErrorKind::unknown_identifier:
  case ErrorKind::config:
    return 2;
  case ErrorKind::convergence:
  case ErrorKind::cutoff:
  case ErrorKind::numeric:
  case ErrorKind::truncation:
  case ErrorKind::undefined_mean:
    return 3;
  case ErrorKind::evaluation:
  case ErrorKind::string_singularity:
    return 4;
  }
  return 3;
}

namespace {

const char *command_name(Command c) {
  switch (c) {
  case Command::gamma:
    return "gamma";
  case Command::spectrum:
    return "spectrum";
  case Command::baseline_ho:
    return "baseline-ho";
  case Command::synthesize:
    return "synthesize";
  case Command::verify:
    return "verify";
  case Command::residual:
    return "residual";
  }
  return "?";
}

void check_resolution(const char *name, const std::optional<int> &v) {
  if (v && (*v < kMinResolution || *v > kMaxResolution)) {
    std::ostringstream msg;
    msg << name << " must lie in [" << kMinResolution << ", "
        << kMaxResolution << "], got " << *v;
    throw Error(ErrorKind::config, msg.str());
  }
}

HelicityAmplitudes make_amplitudes(const RunConfig &config) {
  if (config.f_plus || config.f_minus) {
    HelicityAmplitudes amps;
    amps.descriptor.family = "expression";
    amps.descriptor.parameters["a"] = config.a;
    if (config.f_plus)
      amps.plus = AmplitudeExpression::parse(*config.f_plus).component(config.a);
    if (config.f_minus)
      amps.minus =
          AmplitudeExpression::parse(*config.f_minus).component(config.a);
    return amps;
  }
  const std::string &f = config.family;
  if (f.rfind("sat-", 0) == 0 && f.size() == 5)
    return saturating_amplitude(parse_axis(f.substr(4)), config.a);
  throw Error(ErrorKind::config, "unknown amplitude family '" + f +
                                     "' (expected sat-x, sat-y or sat-z)");
}

json amplitude_json(const RunConfig &config) {
  json j;
  if (config.f_plus || config.f_minus) {
    j["family"] = "expression";
    j["f_plus"] = config.f_plus.value_or("");
    j["f_minus"] = config.f_minus.value_or("");
  } else {
    j["family"] = config.family;
  }
  j["a"] = config.a;
  return j;
}

json grid_json(const MomentumGrid &grid) {
  const auto r = resolution_of(grid);
  return {{"n_k", r.n_k},
          {"n_theta", r.n_theta},
          {"n_phi", r.n_phi},
          {"k_scale", grid.k_scale},
          {"radial_rule", grid.radial_rule == RadialRule::truncated
                              ? "truncated"
                              : "rational"}};
}

json header(const RunConfig &config) {
  return {{"command", command_name(config.command)}, {"version", version()}};
}

struct Report {
  json doc;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  bool passed = true;
};

std::string fmt(double v) { return format_double(v); }

// ---- commands ------------------------------------------------------------

Report do_gamma(const RunConfig &config) {
  const auto amps = make_amplitudes(config);
  const auto grid = resolved_grid(config);
  const auto rep = gamma(amps, grid, PolarizationFrame{});
  Report out;
  out.doc = header(config);
  out.doc["amplitude"] = amplitude_json(config);
  out.doc["grid"] = grid_json(grid);
  out.doc["norm_sq"] = rep.norm_sq;
  out.doc["mean_k"] = {rep.mean_k.x(), rep.mean_k.y(), rep.mean_k.z()};
  out.doc["delta_r"] = rep.delta_r;
  out.doc["delta_p"] = rep.delta_p;
  out.doc["gamma"] = rep.gamma;
  out.csv_header = {"norm_sq", "delta_r", "delta_p", "gamma"};
  out.csv_rows = {{fmt(rep.norm_sq), fmt(rep.delta_r), fmt(rep.delta_p),
                   fmt(rep.gamma)}};
  return out;
}

Report do_spectrum(const RunConfig &config) {
  Report out;
  out.doc = header(config);
  json rows = json::array();
  switch (config.spectrum) {
  case SpectrumKind::angular: {
    out.doc["kind"] = "angular";
    out.csv_header = {"lambda", "m", "index", "j", "eigenvalue"};
    const auto sols = solve_angular(config.lambda, config.m, config.count);
    for (std::size_t i = 0; i < sols.size(); ++i) {
      const auto &s = sols[i];
      const int jj = s.quantum_numbers.j;
      rows.push_back({{"lambda", config.lambda},
                      {"m", config.m},
                      {"index", static_cast<int>(i)},
                      {"j", jj},
                      {"eigenvalue", s.eigenvalue}});
      out.csv_rows.push_back({std::to_string(config.lambda),
                              std::to_string(config.m), std::to_string(i),
                              std::to_string(jj), fmt(s.eigenvalue)});
    }
    break;
  }
  case SpectrumKind::radial: {
    out.doc["kind"] = "radial";
    out.doc["z"] = config.z;
    out.csv_header = {"n_r", "j", "z", "eigenvalue"};
    for (int n = 1; n <= config.max_n; ++n) {
      for (int jj = 1; jj <= n; ++jj) {
        const int nr = n - jj;
        const auto s = solve_radial_coulomb(config.z, jj, nr);
        rows.push_back({{"n_r", nr},
                        {"j", jj},
                        {"z", config.z},
                        {"eigenvalue", s.eigenvalue}});
        out.csv_rows.push_back({std::to_string(nr), std::to_string(jj),
                                fmt(config.z), fmt(s.eigenvalue)});
      }
    }
    break;
  }
  case SpectrumKind::gamma_table: {
    out.doc["kind"] = "gamma-table";
    out.csv_header = {"n_r", "j", "gamma"};
    for (int n = 1; n <= config.max_n; ++n) {
      for (int jj = 1; jj <= n; ++jj) {
        const int nr = n - jj;
        const double g = solve_gamma(nr, jj);
        rows.push_back({{"n_r", nr}, {"j", jj}, {"gamma", g}});
        out.csv_rows.push_back(
            {std::to_string(nr), std::to_string(jj), fmt(g)});
      }
    }
    break;
  }
  }
  out.doc["rows"] = rows;
  return out;
}

Report do_baseline(const RunConfig &config) {
  Report out;
  const double product = ho_baseline(config.level);
  out.doc = header(config);
  out.doc["level"] = config.level;
  out.doc["product"] = product;
  out.csv_header = {"level", "product"};
  out.csv_rows = {{std::to_string(config.level), fmt(product)}};
  if (config.level == 0) {
    const auto s = ho_ground_spreads(config.a);
    out.doc["a"] = config.a;
    out.doc["sigma_r"] = s.sigma_r;
    out.doc["sigma_p"] = s.sigma_p;
  }
  return out;
}

Report do_synthesize(const RunConfig &config, std::ostream &err) {
  const double side = config.side.value_or(4.0 * config.a);
  const auto box = uniform_box(side, config.points);
  RSField field;
  Report out;
  out.doc = header(config);
  out.doc["amplitude"] = amplitude_json(config);
  if (config.source == FieldSource::closed_form) {
    if (config.f_plus || config.f_minus || config.family.size() != 5)
      throw Error(ErrorKind::config,
                  "the closed-form source needs a built-in family");
    field = whittaker_field(parse_axis(config.family.substr(4)), config.a,
                            box, config.t);
    out.doc["source"] = "closed-form";
  } else {
    const auto amps = make_amplitudes(config);
    const auto grid = resolved_grid(config);
    field = synthesize_field(amps, grid, PolarizationFrame{}, box, config.t);
    out.doc["source"] = "synthesis";
    out.doc["grid"] = grid_json(grid);
  }
  for (const auto &w : field.warnings)
    err << to_json_text({{"warning", w}}, 0);
  out.doc["warnings"] = field.warnings;

  const auto rho = energy_density(field);
  out.csv_header = {"x",    "y",    "z",    "t",    "ReFx", "ImFx",
                    "ReFy", "ImFy", "ReFz", "ImFz", "energy_density"};
  json samples = json::array();
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const Vec3 &r = box.points[i];
    const CVec3 &f = field.values[i];
    std::vector<double> row{r.x(),         r.y(),         r.z(),
                            config.t,      f.x().real(),  f.x().imag(),
                            f.y().real(),  f.y().imag(),  f.z().real(),
                            f.z().imag(),  rho[i]};
    std::vector<std::string> cells;
    json obj;
    for (std::size_t c = 0; c < row.size(); ++c) {
      cells.push_back(fmt(row[c]));
      obj[out.csv_header[c]] = row[c];
    }
    out.csv_rows.push_back(std::move(cells));
    samples.push_back(std::move(obj));
  }
  out.doc["t"] = config.t;
  out.doc["side"] = side;
  out.doc["points_per_axis"] = config.points;
  out.doc["samples"] = samples;
  return out;
}

Report do_residual(const RunConfig &config) {
  const auto amps = make_amplitudes(config);
  const auto grid = resolved_grid(config);
  const double res = pde_residual(amps, config.gamma, config.lambda, grid);
  Report out;
  out.doc = header(config);
  out.doc["amplitude"] = amplitude_json(config);
  out.doc["grid"] = grid_json(grid);
  out.doc["gamma"] = config.gamma;
  out.doc["lambda"] = config.lambda;
  out.doc["residual"] = res;
  out.csv_header = {"gamma", "lambda", "residual"};
  out.csv_rows = {{fmt(config.gamma), std::to_string(config.lambda), fmt(res)}};
  return out;
}

// Invariant suite on the configured amplitude plus fixed module checks.
Report do_verify(const RunConfig &config) {
  Report out;
  out.doc = header(config);
  out.doc["amplitude"] = amplitude_json(config);
  json checks = json::array();
  out.csv_header = {"name", "value", "expected", "tolerance", "pass"};

  auto record = [&](const std::string &name, double value, double expected,
                    double tol, bool pass) {
    out.passed = out.passed && pass;
    checks.push_back({{"name", name},
                      {"value", value},
                      {"expected", expected},
                      {"tolerance", tol},
                      {"pass", pass}});
    out.csv_rows.push_back(
        {name, fmt(value), fmt(expected), fmt(tol), pass ? "true" : "false"});
  };
  auto near = [&](const std::string &name, double value, double expected,
                  double tol) {
    record(name, value, expected, tol, std::abs(value - expected) <= tol);
  };
  auto below = [&](const std::string &name, double value, double bound) {
    record(name, value, 0.0, bound, value <= bound);
  };

  const auto amps = make_amplitudes(config);
  const auto grid = resolved_grid(config);
  const PolarizationFrame frame;
  const auto rep = gamma(amps, grid, frame);
  record("uncertainty_bound", rep.gamma, 4.0, 1e-4, rep.gamma >= 4.0 - 1e-4);
  const double sph = delta_r_spherical(amps, grid).value;
  near("delta_r_form_equivalence", sph, rep.delta_r, 1e-8);
  {
    PhaseFunction phase;
    phase.value = [](const Vec3 &k) { return 0.3 * k.z() / k.norm(); };
    const auto [g_amps, g_frame] = gauge_transform(amps, frame, phase);
    near("gauge_invariance_delta_r",
         delta_r_cartesian(g_amps, grid, g_frame).value, rep.delta_r, 1e-8);
  }
  if (!config.f_plus && !config.f_minus) {
    near("saturation_gamma", rep.gamma, 4.0, 1e-6);
    near("delta_r", rep.delta_r, 2.0 * config.a, 1e-6);
    near("delta_p", rep.delta_p, 2.0 / config.a, 1e-6);
  }

  double worst_identity = 0.0, worst_curl = 0.0;
  for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
    for (int i = 0; i < 8; ++i) {
      const Vec3 k{std::cos(1.3 * i + 0.2) * (0.5 + 0.3 * i),
                   std::sin(0.7 * i + 1.1) * (0.4 + 0.2 * i),
                   std::cos(2.1 * i) * (0.6 + 0.1 * i)};
      worst_identity =
          std::max(worst_identity, polarization_identities(axis, k).max());
      worst_curl =
          std::max(worst_curl, verify_connection_curl(axis, k).norm());
    }
  }
  below("polarization_identities", worst_identity, 1e-6);
  below("connection_curl", worst_curl, 1e-6);

  for (int n = 1; n <= 3; ++n)
    for (int jj = 1; jj <= n; ++jj)
      near("gamma_table_" + std::to_string(n - jj) + "_" + std::to_string(jj),
           solve_gamma(n - jj, jj), double(n + 1) * (n + 1), 1e-6);
  {
    const auto sols = solve_angular(1, 0, 3);
    for (std::size_t i = 0; i < sols.size(); ++i) {
      const double jj = static_cast<double>(i) + 1.0;
      near("angular_" + std::to_string(i), sols[i].eigenvalue, jj * (jj + 1),
           1e-6);
    }
  }
  near("ho_baseline", ho_baseline(0), 1.5, 1e-6);
  {
    const auto sat = saturating_amplitude(Axis::z, 1.0);
    below("residual_saturating",
          pde_residual(sat, 4.0, 1, build_grid(64, 48, 32, 1.0)), 1e-6);
  }
  {
    const auto sat = saturating_amplitude(Axis::z, 1.0);
    const auto sgrid = build_grid(64, 96, 96, 1.0, RadialRule::truncated);
    SpatialGrid pts;
    pts.points = {Vec3(0.3, -0.2, 0.5), Vec3(1.0, 1.0, -1.0),
                  Vec3(-2.0, 0.5, 1.5), Vec3(0.0, 0.0, 2.0)};
    const auto f = synthesize_field(sat, sgrid, frame, pts, 0.4);
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.points.size(); ++i) {
      const CVec3 w = whittaker_field(Axis::z, 1.0, pts.points[i], 0.4);
      worst = std::max(worst, (f.values[i] - w).norm() / w.norm());
    }
    below("synthesis_matches_closed_form", worst, 1e-6);
  }
  {
    const auto ball = spherical_cubature(60.0, 160, 8, 4);
    const auto f = whittaker_field(Axis::z, 1.0, ball, 0.0);
    near("total_energy", total_energy(f), 2.0, 1e-3);
  }

  out.doc["checks"] = checks;
  out.doc["all_passed"] = out.passed;
  return out;
}

Report dispatch(const RunConfig &config, std::ostream &err) {
  switch (config.command) {
  case Command::gamma:
    return do_gamma(config);
  case Command::spectrum:
    return do_spectrum(config);
  case Command::baseline_ho:
    return do_baseline(config);
  case Command::synthesize:
    return do_synthesize(config, err);
  case Command::verify:
    return do_verify(config);
  case Command::residual:
    return do_residual(config);
  }
  throw Error(ErrorKind::config, "unknown command");
}

void report_error(std::ostream &err, const std::string &kind,
                  const std::string &message, int code) {
  err << to_json_text(
      {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}});
}

} // namespace

MomentumGrid resolved_grid(const RunConfig &config) {
  const bool synth = config.command == Command::synthesize;
  const RadialRule rule = config.radial_rule.value_or(
      synth ? RadialRule::truncated : RadialRule::rational);
  return build_grid(config.n_k.value_or(64),
                    config.n_theta.value_or(synth ? 96 : 48),
                    config.n_phi.value_or(synth ? 96 : 32),
                    config.k_scale.value_or(1.0 / config.a), rule);
}

void validate(const RunConfig &config) {
  check_resolution("n-k", config.n_k);
  check_resolution("n-theta", config.n_theta);
  check_resolution("n-phi", config.n_phi);
  if (!(config.a > 0.0) || !std::isfinite(config.a))
    throw Error(ErrorKind::config, "a must be positive and finite");
  if (config.k_scale && !(*config.k_scale > 0.0))
    throw Error(ErrorKind::config, "k-scale must be positive");
  if (config.lambda != 1 && config.lambda != -1)
    throw Error(ErrorKind::config, "lambda must be +1 or -1");
  if (config.points < 2 || config.points > 512)
    throw Error(ErrorKind::config, "points must lie in [2, 512]");
  if (config.max_n < 1 || config.max_n > 12)
    throw Error(ErrorKind::config, "max-n must lie in [1, 12]");
  if (config.count < 1 || config.count > 32)
    throw Error(ErrorKind::config, "count must lie in [1, 32]");
  if (config.level < 0 || config.level > 64)
    throw Error(ErrorKind::config, "level must lie in [0, 64]");
  // Expressions must parse before any computation starts.
  if (config.f_plus)
    AmplitudeExpression::parse(*config.f_plus);
  if (config.f_minus)
    AmplitudeExpression::parse(*config.f_minus);
  if (!config.f_plus && !config.f_minus)
    make_amplitudes(config);
}

int run(const RunConfig &config, std::ostream &out, std::ostream &err) {
  try {
    validate(config);
    const Report report = dispatch(config, err);
    const OutputFormat format = config.format.value_or(
        config.command == Command::synthesize ? OutputFormat::csv
                                              : OutputFormat::json);
    const std::string text = format == OutputFormat::json
                                 ? to_json_text(report.doc)
                                 : to_csv(report.csv_header, report.csv_rows);
    if (config.out)
      write_atomically(*config.out, text);
    else
      out << text;
    if (!report.passed)
      return 3;
    return 0;
  } catch (const Error &e) {
    const int code = exit_code(e.kind());
    report_error(err, to_string(e.kind()), e.what(), code);
    return code;
  } catch (const std::exception &e) {
    report_error(err, "internal", e.what(), 3);
    return 3;
  }
}

int run_command_line(int argc, const char *const *argv, std::ostream &out,
                     std::ostream &err) {
  RunConfig config;
  CLI::App app{"Photon localization: uncertainty products, spectra and "
               "field synthesis"};
  app.set_version_flag("--version", std::string(version()));
  app.set_config("--config", "", "key = value configuration file");
  app.require_subcommand(1);
  app.fallthrough();

  std::string family = config.family;
  std::string f_plus, f_minus, out_path, format, rule;
  int n_k = 0, n_theta = 0, n_phi = 0;
  double k_scale = 0.0;
  app.add_option("--family", family, "sat-x, sat-y or sat-z")
      ->capture_default_str();
  app.add_option("--a", config.a, "length scale a")->capture_default_str();
  app.add_option("--f-plus", f_plus, "expression for f_+ (z-axis gauge)");
  app.add_option("--f-minus", f_minus, "expression for f_- (z-axis gauge)");
  app.add_option("--n-k", n_k, "radial nodes");
  app.add_option("--n-theta", n_theta, "polar nodes");
  app.add_option("--n-phi", n_phi, "azimuthal nodes");
  app.add_option("--k-scale", k_scale, "radial scale (default 1/a)");
  app.add_option("--radial-rule", rule, "rational or truncated")
      ->check(CLI::IsMember({"rational", "truncated"}));
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  auto *gamma_cmd = app.add_subcommand("gamma", "uncertainty report");
  auto *spectrum_cmd = app.add_subcommand("spectrum", "eigenvalue tables");
  auto *kind = spectrum_cmd->add_option_group("kind");
  bool angular = false, radial = false, table = false;
  kind->add_flag("--angular", angular, "monopole-harmonic eigenvalues");
  kind->add_flag("--radial", radial, "Coulomb-like radial eigenvalues");
  kind->add_flag("--gamma-table", table, "self-consistent gamma values");
  kind->require_option(1);
  spectrum_cmd->add_option("--lambda", config.lambda, "helicity +1 or -1");
  spectrum_cmd->add_option("--m", config.m, "azimuthal number");
  spectrum_cmd->add_option("--count", config.count, "number of angular eigenvalues");
  spectrum_cmd->add_option("--z", config.z, "Coulomb strength for --radial");
  spectrum_cmd->add_option("--max-n", config.max_n, "largest n_r + j");
  auto *ho = app.add_subcommand("baseline-ho", "oscillator baseline");
  ho->add_option("--level", config.level, "oscillator level n");
  auto *syn = app.add_subcommand("synthesize", "real-space field grid");
  double side = 0.0;
  std::string source = "synthesis";
  syn->add_option("--side", side, "box side (default 4a)");
  syn->add_option("--points", config.points, "points per box edge");
  syn->add_option("--t", config.t, "time");
  syn->add_option("--source", source, "synthesis or closed-form")
      ->check(CLI::IsMember({"synthesis", "closed-form"}));
  auto *ver = app.add_subcommand("verify", "invariant checks");
  auto *res = app.add_subcommand("residual", "variational residual");
  res->add_option("--gamma", config.gamma, "trial gamma");
  res->add_option("--lambda", config.lambda, "helicity +1 or -1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion &) {
    out << version() << "\n";
    return 0;
  } catch (const CLI::ParseError &e) {
    report_error(err, "config", e.what(), 2);
    return 2;
  }

  if (gamma_cmd->parsed())
    config.command = Command::gamma;
  else if (spectrum_cmd->parsed())
    config.command = Command::spectrum;
  else if (ho->parsed())
    config.command = Command::baseline_ho;
  else if (syn->parsed())
    config.command = Command::synthesize;
  else if (ver->parsed())
    config.command = Command::verify;
  else if (res->parsed())
    config.command = Command::residual;

  config.family = family;
  auto given = [&](const char *name) { return app.count(name) > 0; };
  if (given("--f-plus"))
    config.f_plus = f_plus;
  if (given("--f-minus"))
    config.f_minus = f_minus;
  if (given("--n-k"))
    config.n_k = n_k;
  if (given("--n-theta"))
    config.n_theta = n_theta;
  if (given("--n-phi"))
    config.n_phi = n_phi;
  if (given("--k-scale"))
    config.k_scale = k_scale;
  if (given("--radial-rule"))
    config.radial_rule =
        rule == "truncated" ? RadialRule::truncated : RadialRule::rational;
  if (given("--out"))
    config.out = out_path;
  if (given("--format"))
    config.format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
  config.spectrum = angular  ? SpectrumKind::angular
                    : radial ? SpectrumKind::radial
                             : SpectrumKind::gamma_table;
  if (syn->count("--side") > 0)
    config.side = side;
  config.source =
      source == "closed-form" ? FieldSource::closed_form : FieldSource::synthesis;
  return run(config, out, err);
}

} // namespace photon_ur
