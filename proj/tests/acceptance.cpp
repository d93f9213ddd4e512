// One PASS/FAIL line per acceptance criterion. Tolerances are pinned here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "fkp/analysis.hpp"
#include "fkp/cli.hpp"
#include "fkp/diagnostics.hpp"
#include "fkp/field_io.hpp"
#include "fkp/kernels.hpp"
#include "fkp/reference.hpp"
#include "fkp/solver.hpp"

using namespace fkp;
namespace fs = std::filesystem;

namespace {

// Desk-scale tier.
const SpectralGrid kDeskGrid = SpectralGrid::square(1024, 256.0);
const SpectralGrid kFineDeskGrid = SpectralGrid::square(2048, 256.0);  // alpha = 1.35
const SpectralGrid kKernelGrid = SpectralGrid::square(4096, 256.0);
constexpr double kTol = 1e-5;

constexpr int kMaxIterOracle = 120;
constexpr double kOracleRelError = 5e-3;
constexpr double kOracleSeconds = 120.0;
constexpr double kResidualRel = 1e-4;
constexpr double kSymmetryDefect = 1e-8;
constexpr double kPlateauRel = 0.10;
constexpr double kLumpWindowVariation = 0.15;
constexpr double kProbeRouteRel = 1e-3;
constexpr double kProbeSeconds = 60.0;
constexpr double kKernelWindowVariation = 0.25;
constexpr double kConvolutionFactor = 5.0;
constexpr double kScalingRel = 1e-3;
constexpr double kAmplitudeRel = 0.01;
constexpr double kRoundTrip = 1e-12;
constexpr double kParseval = 1e-10;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Run {
  SolveResult result;
  double seconds = 0.0;
  SymbolParams params;
};

SolverConfig desk_config(double alpha, double c = 1.0, const SpectralGrid& grid = kDeskGrid) {
  SolverConfig cfg;
  cfg.params.alpha = alpha;
  cfg.params.c = c;
  cfg.grid = grid;
  cfg.tol = kTol;
  cfg.max_iter = 400;
  return cfg;
}

std::map<std::string, Run> runs;

const Run& solved(const std::string& key, const SolverConfig& cfg) {
  auto it = runs.find(key);
  if (it != runs.end()) return it->second;
  const auto t0 = std::chrono::steady_clock::now();
  Run r{solve(cfg), 0.0, cfg.params};
  r.seconds = seconds_since(t0);
  std::printf("  solved %-10s %-9s %4zu iterations  %.1f s\n", key.c_str(),
              to_string(r.result.report.status), r.result.report.records.size(), r.seconds);
  return runs.emplace(key, std::move(r)).first->second;
}

const Run& lump(double alpha) {
  const std::string key = fmt("a=%g", alpha);
  return solved(key, desk_config(alpha, 1.0, alpha < 1.5 ? kFineDeskGrid : kDeskGrid));
}

bool converged(const Run& r) { return r.result.report.status == SolveStatus::converged; }

double relative_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.grid().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m / b.max_abs();
}

void criterion_1() {
  const Run& r = lump(2.0);
  const auto exact = exact_kp1_lump(kDeskGrid);
  const double rel = relative_diff(r.result.phi, exact);
  const auto iters = r.result.report.records.size();
  report(1, converged(r) && iters <= kMaxIterOracle && rel <= kOracleRelError && r.seconds <= kOracleSeconds,
         fmt("alpha=2 1024^2 on [-256,256]^2: %zu iterations (<= %d), rel error %.3e (<= %.0e), %.1f s (<= %.0f s)",
             iters, kMaxIterOracle, rel, kOracleRelError, r.seconds, kOracleSeconds));
}

void criterion_2() {
  bool pass = true;
  std::string detail;
  for (double alpha : {2.0, 1.7, 1.5}) {
    const Run& r = lump(alpha);
    const auto& last = r.result.report.records.back();
    const double res_bound = kResidualRel * r.result.phi.max_abs();
    const bool ok = converged(r) && last.iter_error <= kTol && last.factor_error <= kTol &&
                    last.residual <= res_bound;
    pass = pass && ok;
    detail += fmt("alpha=%g: iter %.1e |1-M| %.1e residual %.1e (<= %.1e); ", alpha, last.iter_error,
                  last.factor_error, last.residual, res_bound);
  }
  report(2, pass, detail);
}

void criterion_3() {
  bool pass = true;
  std::string detail;
  for (double alpha : {2.0, 1.7, 1.35}) {
    const Run& r = lump(alpha);
    const auto s = symmetry_report(r.result.phi);
    pass = pass && converged(r) && s.x_defect <= kSymmetryDefect && s.y_defect <= kSymmetryDefect;
    detail += fmt("alpha=%g: x %.1e y %.1e; ", alpha, s.x_defect, s.y_defect);
  }
  report(3, pass, detail + fmt("bound %.0e", kSymmetryDefect));
}

void criterion_4() {
  const auto exact = exact_kp1_lump(kDeskGrid);
  const auto ex = decay_profile(exact, Axis::x), ey = decay_profile(exact, Axis::y);
  const bool exact_ok = std::abs(ex.plateau_value + 24.0) <= kPlateauRel * 24.0 &&
                        std::abs(ey.plateau_value - 24.0) <= kPlateauRel * 24.0;
  const Run& r = lump(1.7);
  const auto lx = decay_profile(r.result.phi, Axis::x), ly = decay_profile(r.result.phi, Axis::y);
  const bool lump_ok = converged(r) && std::isfinite(lx.plateau_value) && std::isfinite(ly.plateau_value) &&
                       lx.plateau_rel_variation <= kLumpWindowVariation &&
                       ly.plateau_rel_variation <= kLumpWindowVariation;
  report(4, exact_ok && lump_ok,
         fmt("exact plateaus x %.3f y %.3f (-24, +24 within %.0f%%); alpha=1.7 plateaus x %.3f (var %.3f) "
             "y %.3f (var %.3f), var <= %.2f",
             ex.plateau_value, ey.plateau_value, 100 * kPlateauRel, lx.plateau_value, lx.plateau_rel_variation,
             ly.plateau_value, ly.plateau_rel_variation, kLumpWindowVariation));
}

void criterion_5() {
  struct Case {
    double p;
    SymbolKind which;
    Verdict expect;
  };
  bool pass = true;
  std::string detail;
  for (const Case& c : {Case{3.0, SymbolKind::m, Verdict::converging}, Case{2.0, SymbolKind::m, Verdict::diverging},
                        Case{1.9, SymbolKind::h, Verdict::converging}, Case{2.1, SymbolKind::h, Verdict::diverging}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto probe = integrability_probe(1.0, c.p, c.which);
    const double secs = seconds_since(t0);
    bool ok = probe.verdict == c.expect && secs <= kProbeSeconds;
    if (c.expect == Verdict::converging) ok = ok && probe.route_discrepancy <= kProbeRouteRel;
    pass = pass && ok;
    detail += fmt("%s p=%g %s (inc %.2e, routes %.1e, %.1f s); ", to_string(c.which), c.p,
                  to_string(probe.verdict), probe.last_increment, probe.route_discrepancy, secs);
  }
  report(5, pass, "alpha=1: " + detail);
}

void criterion_6() {
  bool pass = true;
  std::string detail;
  for (double alpha : {1.0, 2.0}) {
    const auto k = kernel_decay(build_kernel(kKernelGrid, alpha, KernelKind::K), 2.0);
    const auto h = kernel_decay(build_kernel(kKernelGrid, alpha, KernelKind::H), 1.0);
    // H is odd in x, so it vanishes on the y-axis; there only boundedness is asked.
    const bool ok = k.x.plateau_rel_variation <= kKernelWindowVariation &&
                    k.y.plateau_rel_variation <= kKernelWindowVariation &&
                    h.x.plateau_rel_variation <= kKernelWindowVariation &&
                    h.y.window_max_abs <= std::abs(h.x.plateau_value);
    pass = pass && ok;
    detail += fmt("alpha=%g: r^2 K x %.3g (var %.3f) y %.3g (var %.3f), r H x %.3g (var %.3f) y max %.1e; ", alpha,
                  k.x.plateau_value, k.x.plateau_rel_variation, k.y.plateau_value, k.y.plateau_rel_variation,
                  h.x.plateau_value, h.x.plateau_rel_variation, h.y.window_max_abs);
  }
  report(6, pass, detail + fmt("var <= %.2f", kKernelWindowVariation));
}

// alpha = 1.5 at c = 2 on the stretched grid, where the nodes of the c = 1
// and c = 2 problems coincide and the comparison carries no interpolation error.
constexpr double kScaledAlpha = 1.5, kScaledSpeed = 2.0;
const SpectralGrid kScaledGrid = rescaled_grid(kDeskGrid, kScaledAlpha, kScaledSpeed);

const Run& scaled_lump() {
  return solved("a=1.5,c=2", desk_config(kScaledAlpha, kScaledSpeed, kScaledGrid));
}

void criterion_7() {
  scaled_lump();
  bool pass = true;
  std::string detail;
  for (const auto& [key, r] : runs) {
    if (!converged(r)) continue;
    const double d = convolution_defect(r.result.phi, r.params.alpha, r.params.c);
    pass = pass && d <= kConvolutionFactor * kTol;
    detail += fmt("%s %.1e; ", key.c_str(), d);
  }
  report(7, pass && !runs.empty(), detail + fmt("bound %.0e", kConvolutionFactor * kTol));
}

void criterion_8() {
  const Run& base = lump(kScaledAlpha);
  const Run& fast = scaled_lump();
  const auto predicted = rescale_solution(base.result.phi, kScaledAlpha, kScaledSpeed, kScaledGrid);
  const double rel = relative_diff(fast.result.phi, predicted);
  report(8, converged(base) && converged(fast) && rel <= kScalingRel,
         fmt("alpha=1.5: c=2 solve vs rescaled c=1 solve, rel %.2e (<= %.0e); peak %.4f vs %.4f", rel, kScalingRel,
             fast.result.phi.max_abs(), predicted.max_abs()));
}

void criterion_9() {
  const double a135 = lump(1.35).result.phi.max_abs();
  const double a17 = lump(1.7).result.phi.max_abs();
  const double a2 = lump(2.0).result.phi.max_abs();
  const bool pass = a135 > a17 && a17 > a2 && std::abs(a2 - 8.0) <= kAmplitudeRel * 8.0;
  report(9, pass, fmt("peaks alpha=1.35 %.4f > 1.7 %.4f > 2 %.4f; alpha=2 vs 8 within %.0f%%", a135, a17, a2,
                      100 * kAmplitudeRel));
}

void criterion_10() {
  const SpectralGrid g(256, 128, 20.0, 10.0);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> dist;
  std::vector<double> v(g.size());
  for (double& x : v) x = dist(rng);
  const RealField f(g, v);

  const auto spec = forward_transform(f);
  const double round_trip = relative_diff(inverse_transform(spec), f);
  double real_sum = 0.0, spec_sum = 0.0;
  for (double x : f.values()) real_sum += x * x;
  for (const Complex& z : spec.coeffs()) spec_sum += std::norm(z);
  const double parseval = std::abs(real_sum - spec_sum / static_cast<double>(g.size())) / real_sum;

  const auto decoded = io::decode_field(io::encode_field(f, {1.5, 1.0, -1.0}));
  const bool bit_exact = std::memcmp(decoded.field.values().data(), f.values().data(), 8 * g.size()) == 0;

  auto cfg = desk_config(1.7, 1.0, SpectralGrid::square(256, 32.0));
  cfg.max_iter = 30;
  const auto dir = fs::temp_directory_path() / "fkp_acceptance";
  fs::remove_all(dir);
  cli::run_solve(cfg, dir / "a");
  cli::run_solve(cfg, dir / "b");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  const std::string log_a = slurp(dir / "a" / "iterations.csv");
  const bool deterministic = !log_a.empty() && log_a == slurp(dir / "b" / "iterations.csv");
  fs::remove_all(dir);

  report(10, round_trip <= kRoundTrip && parseval <= kParseval && bit_exact && deterministic,
         fmt("round trip %.1e (<= %.0e), Parseval %.1e (<= %.0e), field file %s, iteration logs %s", round_trip,
             kRoundTrip, parseval, kParseval, bit_exact ? "bit-exact" : "differs",
             deterministic ? "identical" : "differ"));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
