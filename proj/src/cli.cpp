#include "fkp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "fkp/analysis.hpp"
#include "fkp/diagnostics.hpp"
#include "fkp/error.hpp"
#include "fkp/field_io.hpp"
#include "fkp/reference.hpp"

namespace fkp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Binary mode keeps LF endings on every platform.
std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_failure, "cannot create " + dir.string() + ": " + ec.message());
}

SpectralGrid make_grid(std::size_t n, double l) {
  if (n < 8 || (n & (n - 1)) != 0) {
    throw Error(ErrorCode::invalid_argument, "n: must be a power of two, at least 8");
  }
  if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorCode::invalid_argument, "l: must be positive");
  return SpectralGrid::square(n, l);
}

json config_to_json(const SolverConfig& c) {
  json j;
  j["alpha"] = c.params.alpha;
  j["c"] = c.params.c;
  j["sigma"] = c.params.sigma;
  j["lambda"] = c.params.lambda;
  j["nu"] = c.nu;
  j["nx"] = c.grid.nx();
  j["ny"] = c.grid.ny();
  j["lx"] = c.grid.lx();
  j["ly"] = c.grid.ly();
  j["tol"] = c.tol;
  j["max-iter"] = c.max_iter;
  j["seed"] = seed_to_string(c.seed);
  j["seed-amplitude"] = c.seed.amplitude.value_or(3.0 * c.params.c);
  j["seed-width"] = c.seed.width;
  j["allow-supercritical"] = c.allow_supercritical;
  j["dealias"] = c.dealias;
  return j;
}

SolverConfig config_from_json(const json& j) {
  SolverConfig c;
  c.params.alpha = j.at("alpha").get<double>();
  c.params.c = j.at("c").get<double>();
  c.params.sigma = j.at("sigma").get<int>();
  c.params.lambda = j.at("lambda").get<double>();
  c.nu = j.at("nu").get<double>();
  c.grid = SpectralGrid(j.at("nx").get<std::size_t>(), j.at("ny").get<std::size_t>(),
                        j.at("lx").get<double>(), j.at("ly").get<double>());
  c.tol = j.at("tol").get<double>();
  c.max_iter = j.at("max-iter").get<int>();
  c.seed = parse_seed(j.at("seed").get<std::string>());
  c.seed.amplitude = j.at("seed-amplitude").get<double>();
  c.seed.width = j.at("seed-width").get<double>();
  c.allow_supercritical = j.at("allow-supercritical").get<bool>();
  c.dealias = j.at("dealias").get<bool>();
  return c;
}

void write_key_values(const fs::path& path,
                      const std::vector<std::pair<std::string, double>>& entries) {
  auto out = open_out(path);
  for (const auto& [k, v] : entries) out << k << " = " << format_real(v) << '\n';
}

void write_decay_csv(const fs::path& path, const DecayProfile& d) {
  auto out = open_out(path);
  out << "r,product\n";
  for (std::size_t i = 0; i < d.radii.size(); ++i) {
    out << format_real(d.radii[i]) << ',' << format_real(d.products[i]) << '\n';
  }
}

// Flags shared by solve and convergence-study.
struct SolverFlags {
  double alpha = 2.0, c = 1.0, nu = 2.0, lambda = kDefaultLambda, l = 256.0, tol = 1e-5;
  double seed_width = 2.0;
  double seed_amplitude = 0.0;
  int sigma = -1, max_iter = 200;
  std::size_t n = 1024;
  std::string seed = "gaussian";
  bool allow_supercritical = false;
  bool dealias = false;
  CLI::Option* amplitude_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--alpha", alpha, "dispersion order")->capture_default_str();
    app->add_option("--c", c, "wave speed")->capture_default_str();
    app->add_option("--sigma", sigma, "-1 (fKP-I); +1 is rejected")->capture_default_str();
    app->add_option("--nu", nu, "stabilizing exponent")->capture_default_str();
    app->add_option("--lambda", lambda, "regularization of 1/xi_1")->capture_default_str();
    app->add_option("--n", n, "grid points per axis (power of two)")->capture_default_str();
    app->add_option("--l", l, "domain half-width, [-l, l]^2")->capture_default_str();
    app->add_option("--tol", tol, "stopping tolerance for every monitor")->capture_default_str();
    app->add_option("--max-iter", max_iter, "iteration cap")->capture_default_str();
    app->add_option("--seed", seed, "gaussian | exact-kp1 | file:PATH")->capture_default_str();
    amplitude_opt = app->add_option("--seed-amplitude", seed_amplitude, "default 3c");
    app->add_option("--seed-width", seed_width)->capture_default_str();
    app->add_flag("--allow-supercritical", allow_supercritical, "permit alpha <= 4/5");
    app->add_flag("--dealias", dealias, "3/2-padded products");
  }

  SolverConfig resolve() const {
    SolverConfig cfg;
    cfg.params.alpha = alpha;
    cfg.params.c = c;
    cfg.params.sigma = sigma;
    cfg.params.lambda = lambda;
    cfg.nu = nu;
    cfg.grid = make_grid(n, l);
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.seed = parse_seed(seed);
    if (amplitude_opt && amplitude_opt->count() > 0) cfg.seed.amplitude = seed_amplitude;
    cfg.seed.width = seed_width;
    cfg.allow_supercritical = allow_supercritical;
    cfg.dealias = dealias;
    cfg.validate();
    return cfg;
  }
};

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Finds --config in the arguments after the subcommand name.
std::string find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

// Config-file entries become flags placed before the user's own, skipping any
// key the user passed explicitly, so the command line always wins.
std::vector<std::string> merge_config(CLI::App* sub, const std::vector<std::string>& args) {
  const std::string path = find_config_path(args);
  if (path.empty()) return args;
  std::vector<std::string> merged;
  for (const auto& [key, value] : read_config_file(path)) {
    const std::string flag = "--" + key;
    if (key == "config" || sub->get_option_no_throw(flag) == nullptr) {
      throw Error(ErrorCode::invalid_argument,
                  key + ": unknown key in config file " + path + " for '" + sub->get_name() + "'");
    }
    if (given_on_command_line(args, flag)) continue;
    merged.push_back(flag + "=" + value);
  }
  merged.insert(merged.end(), args.begin(), args.end());
  return merged;
}

SolveStatus status_from_string(const std::string& s) {
  for (auto st : {SolveStatus::converged, SolveStatus::max_iter, SolveStatus::diverged}) {
    if (s == to_string(st)) return st;
  }
  throw Error(ErrorCode::invalid_field, "manifest: unknown status '" + s + "'");
}

int report_error(const Error& e) {
  std::cerr << "fkp: " << e.what() << '\n';
  switch (e.code()) {
    case ErrorCode::divergence:
    case ErrorCode::degenerate_iterate:
      return kExitDivergence;
    default:
      return kExitConfigError;
  }
}

}  // namespace

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return kExitConverged;
    case SolveStatus::max_iter: return kExitMaxIter;
    case SolveStatus::diverged: return kExitDivergence;
  }
  return kExitDivergence;
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "config: cannot read " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    const std::string key = eq == std::string::npos ? std::string{} : trim(t.substr(0, eq));
    if (key.empty()) {
      std::ostringstream os;
      os << "config: " << path.string() << ':' << lineno << ": expected 'key = value'";
      throw Error(ErrorCode::invalid_argument, os.str());
    }
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

SeedSpec parse_seed(const std::string& text) {
  SeedSpec s;
  if (text == "gaussian") {
    s.kind = SeedKind::gaussian;
  } else if (text == "exact-kp1") {
    s.kind = SeedKind::exact_kp1;
  } else if (text.rfind("file:", 0) == 0 && text.size() > 5) {
    s.kind = SeedKind::file;
    s.path = text.substr(5);
  } else {
    throw Error(ErrorCode::invalid_argument,
                "seed: expected gaussian, exact-kp1 or file:PATH, got '" + text + "'");
  }
  return s;
}

std::string seed_to_string(const SeedSpec& seed) {
  switch (seed.kind) {
    case SeedKind::gaussian: return "gaussian";
    case SeedKind::exact_kp1: return "exact-kp1";
    case SeedKind::file: return "file:" + seed.path;
  }
  return "gaussian";
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_iterations_csv(const fs::path& path, const IterationReport& report) {
  auto out = open_out(path);
  out << "iter,iter_error,m_factor,factor_error,residual\n";
  for (const auto& r : report.records) {
    out << r.iter << ',' << format_real(r.iter_error) << ',' << format_real(r.m_factor) << ','
        << format_real(r.factor_error) << ',' << format_real(r.residual) << '\n';
  }
}

std::vector<IterationRecord> read_iterations_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "iter,iter_error,m_factor,factor_error,residual") {
    throw Error(ErrorCode::invalid_field, path.string() + ": unexpected header");
  }
  std::vector<IterationRecord> out;
  while (std::getline(in, line)) {
    IterationRecord r;
    char comma;
    std::istringstream is(line);
    if (!(is >> r.iter >> comma >> r.iter_error >> comma >> r.m_factor >> comma >>
          r.factor_error >> comma >> r.residual)) {
      throw Error(ErrorCode::invalid_field, path.string() + ": malformed row '" + line + "'");
    }
    out.push_back(r);
  }
  return out;
}

void write_manifest(const fs::path& path, const RunManifest& m) {
  json j;
  j["config"] = config_to_json(m.config);
  j["status"] = to_string(m.status);
  j["iterations"] = m.iterations;
  j["outputs"] = json::array();
  for (const auto& o : m.outputs) j["outputs"].push_back({{"path", o.path}, {"role", o.role}});
  j["timings"] = json::object();
  for (const auto& [phase, secs] : m.timings) j["timings"][phase] = secs;
  j["software_version"] = m.software_version;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path.string());
  try {
    const json j = json::parse(in);
    RunManifest m;
    m.config = config_from_json(j.at("config"));
    m.status = status_from_string(j.at("status").get<std::string>());
    m.iterations = j.at("iterations").get<int>();
    for (const auto& o : j.at("outputs")) {
      m.outputs.push_back({o.at("path").get<std::string>(), o.at("role").get<std::string>()});
    }
    for (const auto& [phase, secs] : j.at("timings").items()) {
      m.timings.emplace_back(phase, secs.get<double>());
    }
    m.software_version = j.at("software_version").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_field, path.string() + ": " + e.what());
  }
}

RunManifest run_solve(const SolverConfig& config, const fs::path& out_dir) {
  config.validate();
  ensure_dir(out_dir);
  RunManifest m;
  m.config = config;

  auto t0 = Clock::now();
  const SolveResult result = solve(config);
  m.timings.emplace_back("solve", seconds_since(t0));
  m.status = result.report.status;
  m.iterations = static_cast<int>(result.report.records.size());

  t0 = Clock::now();
  io::save_field(out_dir / "field.fkpl", result.phi,
                 {config.params.alpha, config.params.c, static_cast<double>(config.params.sigma)});
  write_iterations_csv(out_dir / "iterations.csv", result.report);
  m.timings.emplace_back("write", seconds_since(t0));
  m.outputs = {{"field.fkpl", "field"}, {"iterations.csv", "iteration-log"}};
  write_manifest(out_dir / "manifest.json", m);
  if (!result.report.message.empty()) std::cerr << "fkp: " << result.report.message << '\n';
  return m;
}

std::vector<OutputFile> run_analyze(const fs::path& field_path, const fs::path& out_dir,
                                    const std::vector<double>& offsets) {
  const io::StoredField stored = io::load_field(field_path);
  const RealField& phi = stored.field;
  const SpectralGrid& g = phi.grid();
  ensure_dir(out_dir);
  std::vector<OutputFile> written;

  // The alpha = 2 lump is known in closed form; compare against it.
  const bool exact_known = stored.meta.alpha == 2.0 && stored.meta.sigma == -1.0;
  std::optional<RealField> exact;
  if (exact_known) exact = exact_kp1_lump(g, {stored.meta.c, 0.0});

  auto write_sections = [&](Axis axis, const char* name) {
    auto out = open_out(out_dir / name);
    out << (axis == Axis::x ? "y_offset,x,phi" : "x_offset,y,phi") << (exact ? ",exact" : "") << '\n';
    for (double off : offsets) {
      const auto sec = cross_section(phi, axis, off);
      const auto ref = exact ? cross_section(*exact, axis, off) : std::vector<SectionPoint>{};
      for (std::size_t i = 0; i < sec.size(); ++i) {
        out << format_real(off) << ',' << format_real(sec[i].coordinate) << ','
            << format_real(sec[i].value);
        if (exact) out << ',' << format_real(ref[i].value);
        out << '\n';
      }
    }
    written.push_back({name, axis == Axis::x ? "x-cross-sections" : "y-cross-sections"});
  };
  write_sections(Axis::x, "sections_x.csv");
  write_sections(Axis::y, "sections_y.csv");

  const DecayProfile dx = decay_profile(phi, Axis::x);
  const DecayProfile dy = decay_profile(phi, Axis::y);
  write_decay_csv(out_dir / "decay_x.csv", dx);
  write_decay_csv(out_dir / "decay_y.csv", dy);
  written.push_back({"decay_x.csv", "r2-phi-x"});
  written.push_back({"decay_y.csv", "r2-phi-y"});

  SymbolParams params;
  params.alpha = stored.meta.alpha;
  params.c = stored.meta.c;
  const SymmetryReport sym = symmetry_report(phi);
  const FunctionalValues f = functionals(phi, params.alpha, params.lambda);
  std::vector<std::pair<std::string, double>> kv = {
      {"alpha", stored.meta.alpha},
      {"c", stored.meta.c},
      {"sigma", stored.meta.sigma},
      {"nx", static_cast<double>(g.nx())},
      {"ny", static_cast<double>(g.ny())},
      {"lx", g.lx()},
      {"ly", g.ly()},
      {"max_abs", phi.max_abs()},
      {"residual", residual(phi, params)},
      {"symmetry_x_defect", sym.x_defect},
      {"symmetry_y_defect", sym.y_defect},
      {"decay_x_plateau", dx.plateau_value},
      {"decay_x_variation", dx.plateau_rel_variation},
      {"decay_y_plateau", dy.plateau_value},
      {"decay_y_variation", dy.plateau_rel_variation},
      {"l_value", f.l_value},
      {"n_value", f.n_value},
      {"energy_norm", f.energy_norm},
      {"l2_norm", f.l2_norm},
      {"dispersive_norm", f.dispersive_norm},
      {"transverse_norm", f.transverse_norm},
      {"l3_norm", f.l3_norm},
      {"sobolev_ratio", f.sobolev_ratio},
      {"dc_mode", f.dc_mode},
      {"fourier_tail", fourier_tail(phi)},
      {"convolution_defect_k", convolution_defect(phi, params.alpha, params.c, KernelKind::K)},
  };
  if (exact) {
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(phi[i] - (*exact)[i]));
    kv.emplace_back("error_vs_exact", err);
    kv.emplace_back("relative_error_vs_exact", err / exact->max_abs());
  }
  write_key_values(out_dir / "functionals.txt", kv);
  written.push_back({"functionals.txt", "functionals"});
  return written;
}

std::vector<IntegrabilityProbe> run_kernel_probe(double alpha, const std::vector<double>& ps,
                                                 SymbolKind which, const fs::path& out_dir,
                                                 const ProbeOptions& options) {
  if (ps.empty()) throw Error(ErrorCode::invalid_argument, "p: at least one exponent is needed");
  for (double p : ps) {
    if (!(p >= 1.0)) {
      std::ostringstream os;
      os << "p: " << p << " is below 1";
      throw Error(ErrorCode::invalid_exponent, os.str());
    }
  }
  std::vector<IntegrabilityProbe> probes;
  for (double p : ps) probes.push_back(integrability_probe(alpha, p, which, options));

  ensure_dir(out_dir);
  auto out = open_out(out_dir / "probe.csv");
  out << "alpha,p,which,max_radius,truncated_norm,separated_norm,last_increment,route_discrepancy,"
         "verdict\n";
  auto detail = open_out(out_dir / "probe_radii.csv");
  detail << "alpha,p,which,radius,truncated_norm,separated_norm\n";
  for (const auto& pr : probes) {
    out << format_real(pr.alpha) << ',' << format_real(pr.p) << ',' << to_string(pr.which) << ','
        << format_real(pr.truncation_radii.back()) << ',' << format_real(pr.truncated_norms.back())
        << ',' << format_real(pr.separated_norms.back()) << ',' << format_real(pr.last_increment)
        << ',' << format_real(pr.route_discrepancy) << ',' << to_string(pr.verdict) << '\n';
    for (std::size_t i = 0; i < pr.truncation_radii.size(); ++i) {
      detail << format_real(pr.alpha) << ',' << format_real(pr.p) << ',' << to_string(pr.which)
             << ',' << format_real(pr.truncation_radii[i]) << ','
             << format_real(pr.truncated_norms[i]) << ',' << format_real(pr.separated_norms[i])
             << '\n';
    }
  }
  return probes;
}

std::vector<ConvergenceRow> run_convergence_study(const SolverConfig& base,
                                                  const std::vector<double>& half_widths,
                                                  double dx, const fs::path& out_dir) {
  if (base.params.alpha != 2.0) {
    throw Error(ErrorCode::invalid_argument,
                "alpha: convergence-study compares with the exact lump, which needs alpha = 2");
  }
  if (!(dx > 0.0)) throw Error(ErrorCode::invalid_argument, "dx: must be positive");
  if (half_widths.empty()) throw Error(ErrorCode::invalid_argument, "ls: no half-widths given");
  std::vector<SpectralGrid> grids;
  for (double l : half_widths) {
    const double n_real = 2.0 * l / dx;
    const auto n = static_cast<std::size_t>(std::llround(n_real));
    if (std::abs(n_real - static_cast<double>(n)) > 1e-9 * n_real) {
      throw Error(ErrorCode::invalid_argument, "dx: 2l/dx must be an integer for l = " + format_real(l));
    }
    grids.push_back(make_grid(n, l));
  }
  ensure_dir(out_dir);
  std::vector<ConvergenceRow> rows;
  for (const SpectralGrid& g : grids) {
    SolverConfig cfg = base;
    cfg.grid = g;
    cfg.validate();
    const SolveResult r = solve(cfg);
    const RealField exact = exact_kp1_lump(g, {cfg.params.c, 0.0});
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(r.phi[i] - exact[i]));
    rows.push_back({g.lx(), g.nx(), r.report.status, static_cast<int>(r.report.records.size()), err,
                    err / exact.max_abs()});
  }
  auto out = open_out(out_dir / "convergence.csv");
  out << "lx,n,dx,status,iterations,error_inf,relative_error\n";
  for (const auto& row : rows) {
    out << format_real(row.lx) << ',' << row.n << ',' << format_real(dx) << ','
        << to_string(row.status) << ',' << row.iterations << ',' << format_real(row.error_inf) << ','
        << format_real(row.relative_error) << '\n';
  }
  return rows;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Lump solutions of the steady fractional KP-I equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kSoftwareVersion);

  std::string out_dir = "out";
  std::string config_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--config", config_path, "flat key = value file; flags override it");
  };

  SolverFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "Petviashvili iteration for a lump");
  solve_flags.attach(solve_cmd);
  add_common(solve_cmd);

  std::string field_path;
  std::vector<double> offsets{0.0};
  auto* analyze_cmd = app.add_subcommand("analyze", "cross sections, decay, symmetry, functionals");
  analyze_cmd->add_option("field", field_path, "field file")->required();
  analyze_cmd->add_option("--offsets", offsets, "cross-section offsets")->delimiter(',');
  add_common(analyze_cmd);

  double probe_alpha = 1.0;
  std::vector<double> probe_ps;
  std::string probe_which = "m";
  ProbeOptions probe_options;
  auto* probe_cmd = app.add_subcommand("kernel-probe", "L^p integrability of the symbols m and h");
  probe_cmd->add_option("--alpha", probe_alpha)->capture_default_str();
  probe_cmd->add_option("--p", probe_ps, "exponents, comma separated")->delimiter(',')->required();
  probe_cmd->add_option("--which", probe_which)->check(CLI::IsMember({"m", "h"}))->capture_default_str();
  probe_cmd->add_option("--max-log2-radius", probe_options.max_log2_radius)->capture_default_str();
  add_common(probe_cmd);

  double ref_c = 1.0, ref_l = 256.0;
  std::size_t ref_n = 1024;
  auto* ref_cmd = app.add_subcommand("reference", "write the exact alpha = 2 lump");
  ref_cmd->add_option("--c", ref_c)->capture_default_str();
  ref_cmd->add_option("--n", ref_n)->capture_default_str();
  ref_cmd->add_option("--l", ref_l)->capture_default_str();
  add_common(ref_cmd);

  SolverFlags study_flags;
  std::vector<double> study_ls{32.0, 64.0, 128.0};
  double study_dx = 0.25;
  auto* study_cmd = app.add_subcommand("convergence-study", "error vs domain half-width, alpha = 2");
  study_flags.attach(study_cmd);
  study_cmd->add_option("--ls", study_ls, "half-widths, comma separated")->delimiter(',');
  study_cmd->add_option("--dx", study_dx, "fixed grid spacing")->capture_default_str();
  add_common(study_cmd);

  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  try {
    if (!args.empty()) {
      if (auto* sub = app.get_subcommand_no_throw(args.front()); sub != nullptr) {
        std::vector<std::string> merged =
            merge_config(sub, std::vector<std::string>(args.begin() + 1, args.end()));
        merged.insert(merged.begin(), args.front());
        args = std::move(merged);
      }
    }
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  } catch (const Error& e) {
    return report_error(e);
  }

  set_transform_threads();
  try {
    if (*solve_cmd) {
      const SolverConfig cfg = solve_flags.resolve();
      const RunManifest m = run_solve(cfg, out_dir);
      std::cout << "status " << to_string(m.status) << " after " << m.iterations << " iterations; wrote "
                << (fs::path(out_dir) / "manifest.json").string() << '\n';
      return exit_code(m.status);
    }
    if (*analyze_cmd) {
      for (const auto& o : run_analyze(field_path, out_dir, offsets)) {
        std::cout << (fs::path(out_dir) / o.path).string() << " (" << o.role << ")\n";
      }
      return 0;
    }
    if (*probe_cmd) {
      const SymbolKind which = probe_which == "m" ? SymbolKind::m : SymbolKind::h;
      for (const auto& pr : run_kernel_probe(probe_alpha, probe_ps, which, out_dir, probe_options)) {
        std::cout << to_string(pr.which) << " alpha=" << pr.alpha << " p=" << pr.p << ": "
                  << to_string(pr.verdict) << " (increment " << pr.last_increment << ")\n";
      }
      return 0;
    }
    if (*ref_cmd) {
      if (!(ref_c > 0.0)) throw Error(ErrorCode::invalid_argument, "c: must be positive");
      const SpectralGrid g = make_grid(ref_n, ref_l);
      ensure_dir(out_dir);
      const RealField exact = exact_kp1_lump(g, {ref_c, 0.0});
      io::save_field(fs::path(out_dir) / "exact.fkpl", exact, {2.0, ref_c, -1.0});
      SymbolParams p;
      p.c = ref_c;
      write_key_values(fs::path(out_dir) / "exact.txt",
                       {{"c", ref_c}, {"max_abs", exact.max_abs()}, {"residual", residual(exact, p)}});
      std::cout << "wrote " << (fs::path(out_dir) / "exact.fkpl").string() << '\n';
      return 0;
    }
    if (*study_cmd) {
      const SolverConfig base = study_flags.resolve();
      bool all_converged = true;
      for (const auto& row : run_convergence_study(base, study_ls, study_dx, out_dir)) {
        std::cout << "l=" << row.lx << " n=" << row.n << " " << to_string(row.status)
                  << " error=" << row.error_inf << '\n';
        all_converged = all_converged && row.status == SolveStatus::converged;
      }
      return all_converged ? 0 : kExitMaxIter;
    }
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "fkp: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace fkp::cli
