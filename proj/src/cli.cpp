#include "rigaspec/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>

#include "rigaspec/error.hpp"
#include "rigaspec/svg.hpp"

namespace rigaspec {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

int parse_int(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) bad(std::string(key) + ": not an integer: '" + t + "'");
  return v;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    bad(std::string(key) + ": not a finite number: '" + t + "'");
  }
  return v;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Fea: return "fea";
    case Method::Iga: return "iga";
    case Method::Riga: return "riga";
  }
  return "?";
}

const char* quadrature_name(QuadratureKind q) {
  switch (q) {
    case QuadratureKind::Gauss: return "gauss";
    case QuadratureKind::Lobatto: return "lobatto";
    case QuadratureKind::Blended: return "blend";
  }
  return "?";
}

const char* bc_name(BoundaryCondition bc) { return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann"; }

/// Collects a CSV document and writes it to a file or stdout.
class Csv {
 public:
  Csv(const ExperimentConfig& config, const std::string& header) {
    text_ = "# config: " + config.describe() + "\n" + header + "\n";
  }
  Csv& comment(const std::string& line) {
    text_ += "# " + line + "\n";
    return *this;
  }
  template <class... Cells>
  void row(const Cells&... cells) {
    std::string line;
    ((line += (line.empty() ? "" : ","), line += cell(cells)), ...);
    text_ += line + "\n";
  }
  void emit(const std::string& path) const;

 private:
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(const std::string& v) { return v; }
  std::string text_;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw Error(ErrorCode::InvalidArgument, "failed writing '" + path + "'");
}

void Csv::emit(const std::string& path) const {
  if (path.empty()) {
    std::cout << text_;
    std::cout.flush();
  } else {
    write_file(path, text_);
  }
}

ExperimentConfig prepared(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.resolve();
  c.validate();
  return c;
}

double exact_for_position(int position, BoundaryCondition bc) {
  const int j = bc == BoundaryCondition::Neumann ? position - 1 : position;
  return exact_spectrum_1d(j, bc).eigenvalue;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void set_config_value(ExperimentConfig& c, std::string_view key_in, std::string_view value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (key == "method") {
    if (value == "fea") c.method = Method::Fea;
    else if (value == "iga") c.method = Method::Iga;
    else if (value == "riga") c.method = Method::Riga;
    else bad("method must be fea, iga or riga, got '" + value + "'");
  } else if (key == "p" || key == "degree") {
    c.degree = parse_int(key, value);
  } else if (key == "elements") {
    c.elements = parse_int(key, value);
  } else if (key == "block") {
    c.block_size = parse_int(key, value);
  } else if (key == "continuity") {
    c.continuity = parse_int(key, value);
  } else if (key == "bc") {
    if (value == "dirichlet") c.bc = BoundaryCondition::Dirichlet;
    else if (value == "neumann") c.bc = BoundaryCondition::Neumann;
    else bad("bc must be dirichlet or neumann, got '" + value + "'");
  } else if (key == "quadrature") {
    if (value == "gauss") c.quadrature = QuadratureKind::Gauss, c.tau = 0.0, c.tau_optimal = false;
    else if (value == "lobatto") c.quadrature = QuadratureKind::Lobatto, c.tau = 1.0, c.tau_optimal = false;
    else if (value == "blend" || value == "blended") c.quadrature = QuadratureKind::Blended;
    else bad("quadrature must be gauss, lobatto or blend, got '" + value + "'");
  } else if (key == "points") {
    c.points = parse_int(key, value);
  } else if (key == "tau") {
    c.quadrature = QuadratureKind::Blended;
    c.tau_optimal = value == "optimal";
    c.tau = c.tau_optimal ? 0.0 : parse_double(key, value);
  } else if (key == "dimension") {
    c.dimension = parse_int(key, value);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "svg") {
    c.svg = value;
  } else if (key == "freq-out") {
    c.freq_out = value;
  } else if (key == "dump") {
    c.dump = value;
  } else if (key == "meshes") {
    c.meshes.clear();
    std::string item;
    std::istringstream is(value);
    while (std::getline(is, item, ',')) c.meshes.push_back(parse_int(key, item));
  } else if (key == "mode") {
    c.mode = parse_int(key, value);
  } else if (key == "assert-slope") {
    c.assert_slope = parse_double(key, value);
  } else if (key == "slope-tol") {
    c.slope_tolerance = parse_double(key, value);
  } else if (key == "samples") {
    c.samples = parse_int(key, value);
  } else {
    bad("unknown configuration key '" + key + "'");
  }
}

void apply_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream is(path);
  if (!is) bad("cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) bad(path + ":" + std::to_string(lineno) + ": expected key=value");
    set_config_value(config, t.substr(0, eq), t.substr(eq + 1));
  }
}

void ExperimentConfig::validate() const {
  if (degree < 1 || degree > 12) bad("p must lie in [1, 12]");
  if (elements < 1) bad("elements must be >= 1");
  switch (method) {
    case Method::Fea:
      if (block_size != 0 && block_size != 1) bad("fea implies block size 1");
      if (continuity != 0) bad("fea implies C0 element boundaries (continuity 0)");
      break;
    case Method::Iga:
      if (block_size != 0 && block_size != elements) bad("iga has a single block; drop --block or use riga");
      if (continuity != 0) bad("continuity applies to riga separators only");
      break;
    case Method::Riga:
      if (block_size < 1) bad("riga needs --block");
      if (block_size > elements) bad("block size exceeds the element count");
      if (continuity < 0 || continuity > degree - 1) bad("separator continuity must lie in [0, p-1]");
      break;
  }
  if (points < 0 || points > kMaxQuadraturePoints) bad("points must lie in [0, 32]");
  if (quadrature != QuadratureKind::Gauss && points == 1) bad("Lobatto rules need at least 2 points");
  if (tau_optimal && degree > kMaxOptimalTauDegree) {
    bad("tau=optimal is not resolvable for p > " + std::to_string(kMaxOptimalTauDegree) + " in double precision");
  }
  if (dimension != 1 && dimension != 2) bad("dimension must be 1 or 2");
  if (dimension == 2 && elements > kMax2DElements) {
    throw Error(ErrorCode::DimensionOverflow,
                "2D runs are capped at " + std::to_string(kMax2DElements) + " elements per direction");
  }
  for (int m : meshes) {
    if (m < 1) bad("mesh sizes must be >= 1");
  }
  if (mode < 1) bad("mode must be >= 1");
  if (samples < 0) bad("samples must be >= 0");
  if (!(slope_tolerance > 0.0)) bad("slope tolerance must be positive");
}

BlockLayout ExperimentConfig::layout(int n) const {
  BlockLayout l;
  switch (method) {
    case Method::Fea: l = fea_layout(n, degree, bc); break;
    case Method::Iga: l = iga_layout(n, degree, bc); break;
    case Method::Riga:
      l = riga_layout(n, degree, std::min(block_size, n), bc);
      l.separator_continuity = continuity;
      break;
  }
  l.validate();
  return l;
}

QuadratureSpec ExperimentConfig::quadrature_spec() const {
  switch (quadrature) {
    case QuadratureKind::Gauss: return QuadratureSpec::gauss(points);
    case QuadratureKind::Lobatto: return QuadratureSpec::lobatto(points);
    case QuadratureKind::Blended: return QuadratureSpec::blended(tau, points);
  }
  return {};
}

void ExperimentConfig::resolve() {
  if (!tau_optimal) return;
  if (degree > kMaxOptimalTauDegree) {
    bad("tau=optimal is not resolvable for p > " + std::to_string(kMaxOptimalTauDegree) + " in double precision");
  }
  tau = optimal_blending_tau(degree);
  tau_optimal = false;
}

std::string ExperimentConfig::describe() const {
  std::string s = std::string("method=") + method_name(method) + " p=" + std::to_string(degree) +
                  " elements=" + std::to_string(elements) + " block=" + std::to_string(layout().block_size) +
                  " continuity=" + std::to_string(continuity) + " bc=" + bc_name(bc) +
                  " quadrature=" + quadrature_name(quadrature) + " points=" +
                  std::to_string(points > 0 ? points : degree + 1) +
                  " tau=" + (tau_optimal ? std::string("optimal") : format_double(tau)) +
                  " dimension=" + std::to_string(dimension) + " meshes=";
  for (std::size_t k = 0; k < meshes.size(); ++k) s += (k ? "," : "") + std::to_string(meshes[k]);
  s += " mode=" + std::to_string(mode);
  if (assert_slope) s += " assert-slope=" + format_double(*assert_slope) + " slope-tol=" + format_double(slope_tolerance);
  s += " samples=" + std::to_string(samples);
  return s;
}

SpectrumRun cmd_spectrum(const ExperimentConfig& config_in, std::ostream& log) {
  const ExperimentConfig config = prepared(config_in);
  const BlockLayout layout = config.layout();
  const DiscreteOperator op = assemble_1d(layout, config.quadrature_spec());
  if (!config.dump.empty()) {
    std::ostringstream m, k;
    op.mass.write_dump(m);
    op.stiffness.write_dump(k);
    write_file(config.dump + "_mass.txt", m.str());
    write_file(config.dump + "_stiffness.txt", k.str());
  }
  SpectrumRun run;
  run.spectrum = solve_gevp(op, SolveMode::WithVectors);
  run.budget = error_budget(run.spectrum, op);

  Csv csv(config,
          "j,j_over_N0,lambda_exact,lambda_h,ev_rel,ef_l2_sq,ef_energy_rel_sq,energy_gap,l2_deficit,pythagoras_residual");
  double worst = 0.0;
  for (const auto& b : run.budget) {
    csv.row(b.j, b.j_over_n0, b.lambda_exact, b.lambda_h, b.ev_rel, b.ef_l2_sq, b.ef_energy_rel_sq, b.energy_gap,
            b.l2_deficit, b.pythagoras_residual);
    if (std::isfinite(b.pythagoras_residual)) worst = std::max(worst, std::abs(b.pythagoras_residual));
  }
  csv.emit(config.out);
  log << "spectrum: " << run.spectrum.size() << " modes, N0 = " << layout.reference_dofs()
      << ", max |pythagoras_residual| = " << format_double(worst) << "\n";

  if (!config.svg.empty()) {
    PlotSeries ev{"ev_rel", {}, {}}, l2{"ef_l2_sq", {}, {}}, en{"ef_energy_rel_sq", {}, {}};
    for (const auto& b : run.budget) {
      for (auto* s : {&ev, &l2, &en}) s->x.push_back(b.j_over_n0);
      ev.y.push_back(b.ev_rel);
      l2.y.push_back(b.ef_l2_sq);
      en.y.push_back(b.ef_energy_rel_sq);
    }
    PlotPanel lin{"Error budget (linear)", "j / N0", "relative error", false, false, {ev, l2, en}};
    PlotPanel lg{"Error budget (log)", "j / N0", "relative error", false, true, {ev, l2, en}};
    write_file(config.svg, render_plot({lin, lg}));
  }
  return run;
}

ConvergeRun cmd_converge(const ExperimentConfig& config_in, std::ostream& log) {
  const ExperimentConfig config = prepared(config_in);
  if (config.meshes.size() < 3) bad("converge needs at least three mesh sizes");
  ConvergeRun run;
  run.points = convergence_study([&](int n) { return config.layout(n); }, config.quadrature_spec(), config.meshes,
                                 config.mode);
  std::vector<double> h, e;
  for (const auto& p : run.points) {
    h.push_back(p.h);
    e.push_back(p.ev_rel);
  }
  run.fit = fit_log_slope(h, e);

  Csv csv(config, "elements,h,ev_rel");
  for (const auto& p : run.points) csv.row(p.elements, p.h, p.ev_rel);
  csv.comment("slope=" + format_double(run.fit.slope) + " intercept=" + format_double(run.fit.intercept) +
              " points_used=" + std::to_string(run.fit.points_used));
  csv.emit(config.out);
  log << "converge: slope " << format_double(run.fit.slope) << " from " << run.fit.points_used << " meshes\n";

  if (!config.svg.empty()) {
    PlotSeries s{"|ev_rel| mode " + std::to_string(config.mode), h, {}};
    for (double v : e) s.y.push_back(std::abs(v));
    write_file(config.svg, render_plot({PlotPanel{"Convergence", "h", "|ev_rel|", true, true, {s}}}));
  }
  if (config.assert_slope) {
    run.assertion_passed = std::abs(run.fit.slope - *config.assert_slope) <= config.slope_tolerance;
    if (!run.assertion_passed) {
      throw Error(ErrorCode::SlopeAssertion, "slope " + format_double(run.fit.slope) + " outside " +
                                                 format_double(*config.assert_slope) + " +- " +
                                                 format_double(config.slope_tolerance));
    }
  }
  return run;
}

StoppingBandReport cmd_stopbands(const ExperimentConfig& config_in, std::ostream& log) {
  const ExperimentConfig config = prepared(config_in);
  if (config.method == Method::Iga) bad("stopbands needs a riga or fea layout");
  const BlockLayout layout = config.layout();
  const DiscreteOperator op = assemble_1d(layout, config.quadrature_spec());
  const DofPartition part = partition_dofs(op.knots, layout);
  const Spectrum spectrum = solve_gevp(op, SolveMode::EigenvaluesOnly);
  const StoppingBandReport report = detect_stopping_bands(spectrum, local_bubble_spectra(op, part), layout);

  Csv csv(config, "band,lambda_b,multiplicity,nearest_position,lambda_global,rel_gap,matched");
  for (std::size_t k = 0; k < report.bands.size(); ++k) {
    const StoppingBand& b = report.bands[k];
    csv.row(static_cast<int>(k) + 1, b.lambda_b, b.multiplicity, b.nearest_position, b.lambda_global, b.rel_gap,
            b.matched);
  }
  csv.comment("summary: bands=" + std::to_string(report.band_count()) +
              " expected=" + std::to_string(report.expected_count) + " matched=" + std::to_string(report.matched_count));
  csv.emit(config.out);
  log << "stopbands: " << report.band_count() << " bands (expected " << report.expected_count << "), "
      << report.matched_count << " matched\n";

  if (!config.svg.empty()) {
    PlotSeries ev{"ev_rel", {}, {}}, bands{"stopping bands", {}, {}};
    const double n0 = layout.reference_dofs();
    for (int k = 0; k < spectrum.size(); ++k) {
      const double exact = exact_for_position(k + 1, layout.boundary);
      ev.x.push_back((k + 1) / n0);
      ev.y.push_back((spectrum.eigenvalues[k] - exact) / exact);
    }
    for (const auto& b : report.bands) {
      const double exact = exact_for_position(b.nearest_position, layout.boundary);
      bands.x.insert(bands.x.end(), {b.nearest_position / n0, b.nearest_position / n0});
      bands.y.insert(bands.y.end(), {(b.lambda_global - exact) / exact, std::nan("")});
    }
    write_file(config.svg, render_plot({PlotPanel{"Spectrum with stopping bands", "j / N0", "ev_rel", false, true,
                                                  {ev, bands}}}));
  }
  return report;
}

OutlierReport cmd_outliers(const ExperimentConfig& config_in, std::ostream& log) {
  const ExperimentConfig config = prepared(config_in);
  const BlockLayout layout = config.layout();
  const DiscreteOperator op = assemble_1d(layout, config.quadrature_spec());
  const Spectrum spectrum = solve_gevp(op, SolveMode::WithVectors);
  const int samples = config.samples > 0 ? config.samples : default_samples(spectrum.size());
  const OutlierReport report = outlier_census(op, spectrum, samples);

  Csv csv(config,
          "position,ev_rel,ratio_to_decile_median,flagged,dominant_frequency,peak_to_median,A1,f1,A2,f2,two_peaks,"
          "defect_dofs,defect_elements,misfit,misfit_any_phase");
  csv.comment("predicted=" + std::to_string(report.predicted) + " predicted_iga=" +
              std::to_string(report.predicted_iga) + " observed=" + std::to_string(report.observed) +
              " decile_median=" + format_double(report.decile_median) + " threshold=" + format_double(kOutlierFactor) +
              "x (convention)");
  for (const auto& e : report.entries) {
    csv.row(e.position, e.ev_rel, e.ratio, e.flagged, FrequencyContent::frequency(e.dominant_bin), e.peak_to_median,
            e.fit.a1, e.fit.f1, e.fit.a2, e.fit.f2, e.fit.two_peaks, e.fit.defect_dofs, e.fit.defect_elements,
            e.fit.misfit, e.fit.misfit_any_phase);
  }
  csv.emit(config.out);
  log << "outliers: predicted " << report.predicted << ", observed " << report.observed << "\n";

  if (!config.freq_out.empty() || !config.svg.empty()) {
    std::vector<FrequencyContent> content;
    for (const auto& e : report.entries) {
      content.push_back(frequency_content(spectrum.eigenvectors.col(e.position - 1), op.knots, samples, layout.boundary));
    }
    if (!config.freq_out.empty()) {
      std::string header = "bin,frequency";
      for (const auto& e : report.entries) header += ",mode_" + std::to_string(e.position);
      Csv f(config, header);
      for (int k = 0; k <= samples; ++k) {
        std::string line = std::to_string(k) + "," + format_double(FrequencyContent::frequency(k));
        for (const auto& c : content) line += "," + format_double(c.magnitude[k]);
        f.row(line);
      }
      f.emit(config.freq_out);
    }
    if (!config.svg.empty()) {
      PlotPanel panel{"Frequency content of the highest modes", "frequency (cycles per unit length)", "magnitude",
                      false, false, {}};
      for (std::size_t m = 0; m < content.size(); ++m) {
        PlotSeries s{"mode " + std::to_string(report.entries[m].position), {}, content[m].magnitude};
        for (int k = 0; k <= samples; ++k) s.x.push_back(FrequencyContent::frequency(k));
        panel.series.push_back(std::move(s));
      }
      if (panel.series.empty()) panel.series.push_back(PlotSeries{"no outliers", {0.0}, {0.0}});
      write_file(config.svg, render_plot({panel}));
    }
  }
  return report;
}

Spectrum2DRun cmd_spectrum2d(const ExperimentConfig& config_in, std::ostream& log) {
  ExperimentConfig c = config_in;
  c.dimension = 2;
  const ExperimentConfig config = prepared(c);
  const BlockLayout layout = config.layout();
  const DiscreteOperator op = assemble_1d(layout, config.quadrature_spec());
  const Spectrum s1 = solve_gevp(op, SolveMode::EigenvaluesOnly);
  Spectrum2DRun run;
  run.n1 = s1.size();
  run.modes = errors_2d(s1.eigenvalues);

  Csv csv(config, "rank,j,k,lambda_exact,lambda_h,ev_rel,lambda_exact_sorted,ev_rel_sorted");
  for (const auto& m : run.modes) {
    csv.row(m.rank, m.j, m.k, m.lambda_exact, m.lambda_h, m.ev_rel, m.lambda_exact_sorted, m.ev_rel_sorted);
  }
  csv.emit(config.out);
  double quartile = 0.0;
  const std::size_t q = run.modes.size() / 4;
  for (std::size_t k = 0; k < q; ++k) quartile = std::max(quartile, std::abs(run.modes[k].ev_rel_sorted));
  log << "spectrum2d: " << run.modes.size() << " modes, max |ev_rel| over the lowest quartile = "
      << format_double(quartile) << "\n";

  if (!config.svg.empty()) {
    Heatmap map{"Relative eigenvalue error, log10 |ev_rel|", "j", "k", "log10", run.n1, run.n1, {}};
    map.values.assign(static_cast<std::size_t>(run.n1) * run.n1, std::nan(""));
    for (const auto& m : run.modes) {
      const double a = std::abs(m.ev_rel);
      map.values[static_cast<std::size_t>(m.k - 1) * run.n1 + (m.j - 1)] = a > 0.0 ? std::log10(a) : std::nan("");
    }
    write_file(config.svg, render_heatmap(map));
  }
  return run;
}

double cmd_tau(const ExperimentConfig& config_in, std::ostream& log) {
  ExperimentConfig c = config_in;
  c.tau_optimal = true;
  c.quadrature = QuadratureKind::Blended;
  const ExperimentConfig config = prepared(c);
  Csv csv(config, "p,tau");
  csv.row(config.degree, config.tau);
  csv.emit(config.out);
  log << "tau: p = " << config.degree << ", optimal blend " << format_double(config.tau) << "\n";
  return config.tau;
}

int exit_code_for(const std::exception& e) noexcept {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    if (err->code() == ErrorCode::SlopeAssertion) return 4;
    return err->is_numerical() ? 3 : 2;
  }
  return 3;
}

int run_command(std::string_view command, ExperimentConfig config, std::ostream& log) {
  try {
    if (command == "spectrum") {
      if (config.dimension == 2) cmd_spectrum2d(config, log);
      else cmd_spectrum(config, log);
    } else if (command == "converge") {
      cmd_converge(config, log);
    } else if (command == "stopbands") {
      cmd_stopbands(config, log);
    } else if (command == "outliers") {
      cmd_outliers(config, log);
    } else if (command == "spectrum2d") {
      cmd_spectrum2d(config, log);
    } else if (command == "tau") {
      cmd_tau(config, log);
    } else {
      bad("unknown command '" + std::string(command) + "'");
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}

}  // namespace rigaspec
