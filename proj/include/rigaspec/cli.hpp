#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rigaspec/budget.hpp"
#include "rigaspec/convergence.hpp"
#include "rigaspec/outliers.hpp"
#include "rigaspec/stopping_bands.hpp"

namespace rigaspec {

enum class Method { Fea, Iga, Riga };

/// Everything a command needs. Values are set through set_config_value so the
/// command line and --config files share one parser.
struct ExperimentConfig {
  Method method = Method::Iga;
  int degree = 2;
  int elements = 1000;
  int block_size = 0;  // riga only; fea implies 1, iga implies elements
  int continuity = 0;  // separator continuity (riga)
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  QuadratureKind quadrature = QuadratureKind::Gauss;
  int points = 0;             // 0: p + 1
  double tau = 0.0;
  bool tau_optimal = false;   // resolved to a number by resolve()
  int dimension = 1;

  std::string out;       // CSV, stdout when empty
  std::string svg;
  std::string freq_out;  // outliers: per-outlier frequency content
  std::string dump;      // spectrum: matrix dump prefix

  std::vector<int> meshes{8, 16, 32, 64};  // converge
  int mode = 1;                            // converge
  std::optional<double> assert_slope;      // converge
  double slope_tolerance = 0.1;
  int samples = 0;  // outliers DFT size, 0: smallest admissible

  /// Throws ConfigInvalid (or DimensionOverflow) for inconsistent settings.
  void validate() const;
  /// Layout for `elements` elements (the converge command varies it).
  BlockLayout layout(int elements) const;
  BlockLayout layout() const { return layout(elements); }
  QuadratureSpec quadrature_spec() const;
  /// Replaces tau = optimal by its computed value.
  void resolve();
  /// Flat key=value list, the `# config:` line of every CSV.
  std::string describe() const;
};

/// Keys are the long option names: method, p, elements, block, continuity,
/// bc, quadrature, points, tau, dimension, out, svg, freq-out, dump, meshes,
/// mode, assert-slope, slope-tol, samples. Throws ConfigInvalid.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

/// key=value lines; blank lines and lines starting with '#' are ignored.
void apply_config_file(ExperimentConfig& config, const std::string& path);

/// Largest N_e per direction accepted by spectrum2d.
inline constexpr int kMax2DElements = 32;
/// Degrees for which `tau optimal` is resolvable in double-assembled matrices.
inline constexpr int kMaxOptimalTauDegree = 4;

/// 17 significant digits, '.' separator.
std::string format_double(double v);

struct SpectrumRun {
  Spectrum spectrum;
  std::vector<ModeErrorBudget> budget;
};
SpectrumRun cmd_spectrum(const ExperimentConfig& config, std::ostream& log);

struct ConvergeRun {
  std::vector<ConvergencePoint> points;
  SlopeFit fit;
  bool assertion_passed = true;
};
/// Throws SlopeAssertion after writing its outputs when --assert-slope fails.
ConvergeRun cmd_converge(const ExperimentConfig& config, std::ostream& log);

StoppingBandReport cmd_stopbands(const ExperimentConfig& config, std::ostream& log);

OutlierReport cmd_outliers(const ExperimentConfig& config, std::ostream& log);

struct Spectrum2DRun {
  std::vector<Mode2DError> modes;
  int n1 = 0;
};
Spectrum2DRun cmd_spectrum2d(const ExperimentConfig& config, std::ostream& log);

double cmd_tau(const ExperimentConfig& config, std::ostream& log);

/// 0 success, 2 configuration error, 3 numerical failure, 4 assertion failure.
int exit_code_for(const std::exception& e) noexcept;

/// Dispatch by command name; returns the process exit code and reports
/// failures on `log`.
int run_command(std::string_view command, ExperimentConfig config, std::ostream& log);

}  // namespace rigaspec
