#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "affspec/report.hpp"

using namespace affspec;

namespace {

Window parse_window(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) v.push_back(std::stod(part));
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3]))
    throw CLI::ValidationError("--window", "expected x0,x1,y0,y1 with x0 < x1 and y0 < y1");
  return Window{v[0], v[1], v[2], v[3]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrality and orthogonal exponentials of planar self-affine measures"};
  app.require_subcommand(1);
  bool json = false;
  std::string report_path;
  app.add_flag("--json", json, "print the structured report instead of text");
  app.add_option("--report", report_path, "also write the structured report to this file");

  std::string problem;
  RunOptions opts;
  std::string window, size;
  std::optional<unsigned> kmax, radius, seed;

  auto add_problem = [&](CLI::App* sc) { sc->add_option("problem", problem, "problem file")->required()->check(CLI::ExistingFile); };

  auto* zeros = app.add_subcommand("zeros", "zero structure of the digit mask");
  auto* classify = app.add_subcommand("classify", "spectrality and orthogonality verdicts");
  auto* construct = app.add_subcommand("construct", "build a frequency family and verify it is bi-zero");
  auto* hadamard = app.add_subcommand("hadamard", "explicit Hadamard triple and exact check");
  auto* qscan = app.add_subcommand("qscan", "grid scan of Q for a spectrum truncation");
  auto* clique = app.add_subcommand("clique", "maximum orthogonal set in a candidate pool");
  auto* render = app.add_subcommand("render", "attractor image (and optional |mu_hat|^2 heat map)");
  auto* all = app.add_subcommand("all", "full pipeline");
  for (auto* sc : {zeros, classify, construct, hadamard, qscan, clique, render, all}) add_problem(sc);

  construct->add_option("family", opts.family, "truncation | infinite | graded | p-element")->required();
  construct->add_option("--n", opts.n, "family size parameter")->capture_default_str();
  qscan->add_option("--grid", opts.grid, "grid resolution per axis")->capture_default_str();
  qscan->add_option("--window", window, "x0,x1,y0,y1 (default 0,1,0,1)");
  qscan->add_option("--n", opts.n, "truncation depth")->capture_default_str();
  qscan->add_option("--family", opts.family, "frequency family")->capture_default_str();
  clique->add_option("--kmax", kmax, "candidate depth (default from problem file)");
  clique->add_option("--radius", radius, "lattice radius (default from problem file)");
  clique->add_option("--seed-graded", seed, "add graded_family(N) to the pool");
  render->add_option("--depth", opts.depth, "attractor depth")->capture_default_str();
  render->add_option("--size", size, "WxH (default 512x512)");
  render->add_flag("--heat", opts.heat, "also render |mu_hat|^2 over --window (default -5,5,-5,5)");
  render->add_option("--window", window, "heat map window x0,x1,y0,y1");
  render->add_option("--site-depth", opts.site_depth, "zero-set depth marked in the heat map")->capture_default_str();
  for (auto* sc : {render, all}) sc->add_option("--out", opts.output_dir, "output directory (default from problem file)");

  try {
    app.parse(argc, argv);
    if (!window.empty()) opts.window = parse_window(window);
    if (!size.empty()) {
      auto x = size.find('x');
      if (x == std::string::npos) throw CLI::ValidationError("--size", "expected WxH");
      opts.width = std::stoi(size.substr(0, x));
      opts.height = std::stoi(size.substr(x + 1));
      if (opts.width <= 0 || opts.height <= 0) throw CLI::ValidationError("--size", "dimensions must be positive");
    }
    opts.kmax = kmax;
    opts.radius = radius;
    opts.seed_graded = seed;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  ProblemFile pf;
  try {
    pf = load_problem(problem);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  RunResult r = run_command(command, pf, opts);
  if (json) std::cout << r.report.dump(2) << "\n";
  else std::cout << r.text;
  if (!report_path.empty()) {
    std::ofstream os(report_path);
    if (!os) {
      std::cerr << "error: cannot write " << report_path << "\n";
      return 1;
    }
    os << r.report.dump(2) << "\n";
  }
  return r.exit_code;
}
