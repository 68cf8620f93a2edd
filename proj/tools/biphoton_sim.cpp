// Command-line front end: run a scenario, regenerate a figure dataset, or
// Schmidt-decompose a sampled JSA.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "biphoton/csv.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/figures.hpp"
#include "biphoton/scenario.hpp"
#include "biphoton/spectral.hpp"

namespace fs = std::filesystem;
using namespace biphoton;

namespace {

int cmd_run(const fs::path& config_path) {
  const ScenarioConfig cfg = load_scenario(config_path);
  const ScenarioResult result = run_scenario(cfg);
  if (cfg.output_csv) {
    if (cfg.output_csv->has_parent_path()) fs::create_directories(cfg.output_csv->parent_path());
    std::ofstream os(*cfg.output_csv, std::ios::binary);
    if (!os) throw ConfigError("output.csv: cannot open " + cfg.output_csv->string());
    result.write_csv(os, cfg.precision);
    std::cerr << "wrote " << cfg.output_csv->string() << "\n";
  } else {
    result.write_csv(std::cout, cfg.precision);
  }
  return 0;
}

int cmd_figure(const std::string& name, const fs::path& out_dir, std::optional<std::size_t> points, bool svg) {
  const FigureData fig = make_figure(name, points);
  fs::create_directories(out_dir);
  const fs::path csv_path = out_dir / (name + ".csv");
  std::ofstream os(csv_path, std::ios::binary);
  if (!os) throw ConfigError("--out: cannot write " + csv_path.string());
  fig.write_csv(os);
  std::cerr << "wrote " << csv_path.string() << "\n";
  if (svg) {
    const fs::path svg_path = out_dir / (name + ".svg");
    std::ofstream s(svg_path, std::ios::binary);
    fig.write_svg(s);
    std::cerr << "wrote " << svg_path.string() << "\n";
  }
  return 0;
}

int cmd_schmidt(const fs::path& jsa_path, std::optional<std::size_t> rank) {
  std::ifstream is(jsa_path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + jsa_path.string());
  const DiscretizedJsa jsa = read_jsa_csv(is);
  const SchmidtSpectrum s = schmidt_decompose(jsa, rank);
  csv::Writer w(std::cout);
  w.comment("schmidt_number=" + csv::format_number(schmidt_number(s)));
  w.comment("truncation_tail=" + csv::format_number(s.truncation_tail));
  w.header({"j", "coefficient", "lambda"});
  for (std::size_t j = 0; j < s.coefficients.size(); ++j) {
    const double c = s.coefficients[j];
    w.row(std::vector<double>{static_cast<double>(j), c, c * c});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate photon statistics of parametric down-conversion sources"};
  app.require_subcommand(1);

  fs::path config_path;
  auto* run = app.add_subcommand("run", "Run a JSON scenario and write results as CSV");
  run->add_option("config", config_path, "Scenario file (JSON)")->required();

  std::string fig_name;
  fs::path out_dir = ".";
  std::optional<std::size_t> points;
  bool svg = false;
  auto* figure = app.add_subcommand("figure", "Write a figure dataset as CSV");
  figure->add_option("name", fig_name, "fig1, fig2, fig3 or fig4")->required();
  figure->add_option("--out", out_dir, "Output directory");
  figure->add_option("--points", points, "Number of sample points");
  figure->add_flag("--svg", svg, "Also write an SVG plot");

  fs::path jsa_path;
  std::optional<std::size_t> rank;
  auto* schmidt = app.add_subcommand("schmidt", "Schmidt-decompose a JSA given as CSV");
  schmidt->add_option("jsa", jsa_path, "JSA file (CSV)")->required();
  schmidt->add_option("--rank", rank, "Keep only the k largest modes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(config_path);
    if (*figure) return cmd_figure(fig_name, out_dir, points, svg);
    if (*schmidt) return cmd_schmidt(jsa_path, rank);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
