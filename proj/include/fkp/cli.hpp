#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fkp/kernels.hpp"
#include "fkp/solver.hpp"

namespace fkp::cli {

inline constexpr const char* kSoftwareVersion = "1.0.0";

/// Stable process exit codes.
enum ExitCode : int {
  kExitConverged = 0,
  kExitConfigError = 1,
  kExitMaxIter = 2,
  kExitDivergence = 3,
};

int exit_code(SolveStatus status);

/// Entry point behind the fkp executable.
int run(int argc, const char* const* argv);

/// Flat `key = value` file; blank lines and lines starting with '#' are
/// skipped. Throws ErrorCode::invalid_argument naming the line on bad syntax.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// "gaussian", "exact-kp1" or "file:PATH".
SeedSpec parse_seed(const std::string& text);
std::string seed_to_string(const SeedSpec& seed);

/// 17 significant digits; round-trips every double.
std::string format_real(double v);

/// Columns iter, iter_error, m_factor, factor_error, residual; LF endings.
void write_iterations_csv(const std::filesystem::path& path, const IterationReport& report);
std::vector<IterationRecord> read_iterations_csv(const std::filesystem::path& path);

struct OutputFile {
  std::string path;  ///< relative to the manifest directory
  std::string role;
};

struct RunManifest {
  SolverConfig config;
  SolveStatus status = SolveStatus::max_iter;
  int iterations = 0;
  std::vector<OutputFile> outputs;
  std::vector<std::pair<std::string, double>> timings;  ///< phase, wall seconds
  std::string software_version = kSoftwareVersion;
};

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

/// Solves and writes field.fkpl, iterations.csv and manifest.json into out_dir.
RunManifest run_solve(const SolverConfig& config, const std::filesystem::path& out_dir);

/// Cross sections, decay profiles, symmetry and functionals of a stored field.
/// Returns the files written.
std::vector<OutputFile> run_analyze(const std::filesystem::path& field_path,
                                    const std::filesystem::path& out_dir,
                                    const std::vector<double>& offsets = {0.0});

/// One row per exponent in probe.csv, per-radius detail in probe_radii.csv.
std::vector<IntegrabilityProbe> run_kernel_probe(double alpha, const std::vector<double>& ps,
                                                 SymbolKind which,
                                                 const std::filesystem::path& out_dir,
                                                 const ProbeOptions& options = {});

struct ConvergenceRow {
  double lx = 0.0;
  std::size_t n = 0;
  SolveStatus status = SolveStatus::max_iter;
  int iterations = 0;
  double error_inf = 0.0;
  double relative_error = 0.0;
};

/// Solves the alpha = 2 problem at fixed spacing dx on [-l, l]^2 for each l
/// and compares with the exact lump. Writes convergence.csv.
std::vector<ConvergenceRow> run_convergence_study(const SolverConfig& base,
                                                  const std::vector<double>& half_widths,
                                                  double dx, const std::filesystem::path& out_dir);

}  // namespace fkp::cli
