#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "rigaspec/cli.hpp"

namespace {

struct Key {
  const char* name;
  const char* help;
};

// Applied in this order, so quadrature is set before tau.
const std::vector<Key> kKeys = {
    {"method", "fea | iga | riga"},
    {"p", "polynomial degree"},
    {"elements", "number of elements (per direction in 2D)"},
    {"block", "elements per block (riga)"},
    {"continuity", "separator continuity (riga), default 0"},
    {"bc", "dirichlet | neumann"},
    {"quadrature", "gauss | lobatto | blend"},
    {"points", "quadrature points per element, default p+1"},
    {"tau", "Lobatto fraction of the blend, or 'optimal'"},
    {"dimension", "1 or 2"},
    {"meshes", "comma-separated element counts (converge)"},
    {"mode", "mode index tracked by converge"},
    {"assert-slope", "expected slope; mismatch exits with code 4"},
    {"slope-tol", "tolerance for --assert-slope"},
    {"samples", "DFT size for outliers (power of two)"},
    {"out", "CSV output path (stdout when absent)"},
    {"svg", "SVG output path"},
    {"freq-out", "per-outlier frequency content CSV"},
    {"dump", "prefix for mass/stiffness dumps (row col value)"},
};

const std::vector<std::pair<const char*, const char*>> kCommands = {
    {"spectrum", "per-mode eigenvalue and eigenfunction error budget"},
    {"converge", "leading-mode convergence study with slope fit"},
    {"stopbands", "local bubble eigenvalues and their global matches"},
    {"outliers", "outlier census with frequency content and AM fits"},
    {"spectrum2d", "2D eigenvalue errors on the unit square"},
    {"tau", "optimal Gauss/Lobatto blending parameter for degree p"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of FEA, IGA and refined IGA discretizations of -u'' = lambda u"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::string> config_files;
  for (const auto& [name, help] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    for (const Key& k : kKeys) sub->add_option(std::string("--") + k.name, values[name][k.name], k.help);
    sub->add_option("--config", config_files[name], "key=value file; its entries override flags");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  CLI::App* sub = app.get_subcommand(command);
  rigaspec::ExperimentConfig config;
  try {
    for (const Key& k : kKeys) {
      if (sub->count(std::string("--") + k.name) > 0) rigaspec::set_config_value(config, k.name, values[command][k.name]);
    }
    if (!config_files[command].empty()) rigaspec::apply_config_file(config, config_files[command]);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rigaspec::exit_code_for(e);
  }
  return rigaspec::run_command(command, config, std::cerr);
}
