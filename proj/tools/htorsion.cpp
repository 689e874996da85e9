// htorsion: invariant Hermitian geometry from the command line.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure,
// 3 not critical / not converged / variation check failed.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "htorsion/errors.hpp"
#include "htorsion/report.hpp"

namespace {

using namespace htorsion;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitNegative = 3;

constexpr double kDefaultTol = 1e-9;
constexpr const char* kTolEnv = "HTORSION_TOL";

struct InputSource {
  std::string path;
  std::string catalog;

  void attach(CLI::App* cmd) {
    cmd->add_option("input", path, "input JSON file ('-' for stdin)");
    cmd->add_option("--catalog", catalog, "use a catalog entry instead of an input file");
  }

  InputDocument load() const {
    if (path.empty() == catalog.empty()) throw InvalidInput("give exactly one of an input file or --catalog");
    return path.empty() ? catalog_input(catalog) : load_input(path);
  }
};

double resolve_tol(const std::optional<double>& flag) {
  double tol = kDefaultTol;
  if (flag) {
    tol = *flag;
  } else if (const char* env = std::getenv(kTolEnv); env && *env) {
    char* end = nullptr;
    tol = std::strtod(env, &end);
    if (end == env || *end != '\0') throw InvalidInput(std::string(kTolEnv) + " is not a number");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidInput("tolerance must be positive and finite");
  return tol;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torsion of left-invariant Hermitian metrics on Lie groups"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<double> tol_flag;
  std::string format = "text";
  std::string output;
  app.add_option("--tol", tol_flag, "tolerance for flags and criticality (default 1e-9, or $HTORSION_TOL)");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--output", output, "write the report to this file instead of stdout");

  InputSource analyze_in;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "full analysis of a structure");
  analyze_in.attach(analyze_cmd);

  InputSource critical_in;
  std::string functional = "torsion";
  CLI::App* critical_cmd = app.add_subcommand("check-critical", "Euler-Lagrange residual of F or G");
  critical_in.attach(critical_cmd);
  critical_cmd->add_option("--functional", functional, "torsion or gauduchon")
      ->check(CLI::IsMember({"torsion", "gauduchon"}));

  InputSource variation_in;
  int directions = 10;
  double variation_step = 1e-4;
  std::uint64_t variation_seed = 0;
  CLI::App* variation_cmd = app.add_subcommand("variation-check", "analytic first variation against finite differences");
  variation_in.attach(variation_cmd);
  variation_cmd->add_option("--directions", directions, "number of random Hermitian directions");
  variation_cmd->add_option("--fd-step", variation_step, "finite-difference step");
  variation_cmd->add_option("--seed", variation_seed, "seed for the directions");

  InputSource optimize_in;
  OptimConfig cfg;
  std::string objective = "torsion";
  std::uint64_t optimize_seed = 0;
  double perturb = 0.1;
  CLI::App* optimize_cmd = app.add_subcommand("optimize", "descent on the metric cone");
  optimize_in.attach(optimize_cmd);
  optimize_cmd->add_option("--objective", objective, "torsion, gauduchon, residual_norm or gauduchon_residual")
      ->check(CLI::IsMember({"torsion", "gauduchon", "residual_norm", "gauduchon_residual"}));
  optimize_cmd->add_option("--max-iter", cfg.max_iter, "iteration limit");
  optimize_cmd->add_option("--grad-tol", cfg.grad_tol, "gradient norm tolerance");
  optimize_cmd->add_option("--fd-step", cfg.fd_step, "finite-difference step of the gradient");
  optimize_cmd->add_option("--seed", optimize_seed, "seed for the start perturbation");
  optimize_cmd->add_option("--perturb", perturb, "norm of the random start perturbation");
  optimize_cmd->add_flag("--det-normalized", cfg.det_normalized, "keep det H fixed");

  CLI::App* catalog_cmd = app.add_subcommand("catalog", "built-in examples");
  catalog_cmd->require_subcommand(1);
  catalog_cmd->add_subcommand("list", "list catalog entries");
  std::string show_name;
  CLI::App* show_cmd = catalog_cmd->add_subcommand("show", "structure equations of an entry");
  show_cmd->add_option("name", show_name, "entry name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  const bool json = format == "json";
  std::string report;
  int code = kExitOk;
  try {
    const double tol = resolve_tol(tol_flag);
    if (analyze_cmd->parsed()) {
      const AnalysisResult r = run_analysis(analyze_in.load(), tol);
      report = json ? dump(to_json(r)) : to_text(r);
    } else if (critical_cmd->parsed()) {
      const CriticalResult r = run_check_critical(critical_in.load(), functional, tol);
      report = json ? dump(to_json(r)) : to_text(r);
      if (!r.critical) code = kExitNegative;
    } else if (variation_cmd->parsed()) {
      const VariationResult r = run_variation_check(variation_in.load(), directions, variation_step, variation_seed);
      report = json ? dump(to_json(r)) : to_text(r);
      if (!r.passed) code = kExitNegative;
    } else if (optimize_cmd->parsed()) {
      cfg.objective = objective_from_string(objective);
      const OptimizeResult r = run_optimize(optimize_in.load(), cfg, optimize_seed, perturb, tol);
      report = json ? dump(to_json(r)) : to_text(r);
      if (!r.trace.converged) code = kExitNegative;
    } else if (show_cmd->parsed()) {
      report = json ? dump(catalog_show_json(show_name)) : catalog_show_text(show_name);
    } else {
      report = json ? dump(catalog_list_json()) : catalog_list_text();
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }

  // The report is complete at this point, so a failure never leaves a partial file.
  if (output.empty()) {
    std::cout << report;
  } else {
    const std::string tmp = output + ".partial";
    std::ofstream out(tmp, std::ios::binary);
    out << report;
    out.close();
    std::error_code ec;
    if (out.fail() || (std::filesystem::rename(tmp, output, ec), ec)) {
      std::filesystem::remove(tmp, ec);
      std::cerr << "error: cannot write " << output << "\n";
      return kExitInvalid;
    }
  }
  return code;
}
