// fermidq command-line front end: scenario reports, sweeps, expression
// evaluation and the verification suite.
//
// Exit codes: 0 ok, 1 verification or pipeline failure, 2 usage/config error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fermidq/fermidq.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct ParamFlags {
  std::optional<double> hbar, omega, c, d;

  void add(CLI::App* app) {
    app->add_option("--hbar", hbar, "Planck constant (default 1)");
    app->add_option("--omega", omega, "oscillator frequency (default 1)");
    app->add_option("--c", c, "deformation of the (th1, th2) pair");
    app->add_option("--d", d, "deformation of the (th3, th4) pair");
  }

  void apply(fermidq::Parameters& p) const {
    if (hbar) p.hbar = *hbar;
    if (omega) p.omega = *omega;
    if (c) p.c = *c;
    if (d) p.d = *d;
  }
};

/// Writes to `path`, or stdout when it is empty.
bool emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return true;
}

int cmd_scenario(const std::string& preset, const std::string& config_path, const ParamFlags& flags,
                 std::optional<double> alpha, const std::string& out_path, const fermidq::Tolerances& tol) {
  fermidq::ScenarioConfig cfg;
  try {
    if (!config_path.empty()) cfg = fermidq::load_config(config_path);
    if (!preset.empty()) cfg.preset = preset;
    flags.apply(cfg.params);
    if (alpha) cfg.renyi_alpha = alpha;
    if (!out_path.empty()) cfg.out = out_path;
    cfg.validate();
  } catch (const fermidq::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  }
  const nlohmann::json report = fermidq::run_scenario(cfg, fermidq::PipelineOptions{true, tol});
  if (!emit(cfg.out, report.dump(2) + "\n")) return kUsage;
  if (report.contains("error")) {
    std::cerr << "stage '" << report["error"]["stage"].get<std::string>()
              << "' failed: " << report["error"]["message"].get<std::string>() << '\n';
    return kFailure;
  }
  return kOk;
}

int cmd_sweep(const std::string& config_path, const ParamFlags& flags, const std::string& link, const std::string& param,
              double from, double to, int steps, const std::string& quantities, const std::string& out_path,
              const fermidq::Tolerances& tol) {
  fermidq::SweepSpec spec;
  fermidq::Parameters base;
  try {
    if (!config_path.empty()) base = fermidq::load_config(config_path).params;
    flags.apply(base);
    spec.link = fermidq::parse_link(link);
    spec.parameter = param;
    spec.from = from;
    spec.to = to;
    spec.steps = steps;
    spec.quantities = fermidq::split_list(quantities);
    if (spec.quantities.empty()) throw fermidq::DomainError("no sweep quantities requested");
    spec.validate(base.hbar);
    if (!(base.hbar > 0.0) || !(base.omega > 0.0)) throw fermidq::DomainError("hbar and omega must be positive");
  } catch (const fermidq::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  }
  std::vector<fermidq::SweepRow> rows;
  try {
    rows = fermidq::run_sweep(spec, base, tol);
  } catch (const fermidq::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const fermidq::Error& e) {
    std::cerr << "sweep failed: " << e.what() << '\n';
    return kFailure;
  }
  std::ostringstream csv;
  fermidq::write_sweep_csv(csv, spec, rows);
  return emit(out_path, csv.str()) ? kOk : kUsage;
}

int cmd_eval(const std::string& text, bool use_star, const ParamFlags& flags) {
  fermidq::Parameters prm;
  flags.apply(prm);
  try {
    const fermidq::Expr ast = fermidq::parse_expression(text);
    const auto extent = fermidq::generator_extent(ast);
    int n = 4;
    for (const auto& [family, k] : extent) n = std::max(n, k);
    const bool momenta = extent.count("pi") > 0;
    if (use_star && (momenta || n != 4)) {
      throw fermidq::DomainError("--star evaluates on th1..th4 only");
    }
    if ((momenta ? 2 * n : n) > fermidq::kMaxGenerators) throw fermidq::DomainError("too many generators");
    const fermidq::Algebra algebra = momenta ? fermidq::phase_space(n) : fermidq::numbered_algebra("th", n);
    std::optional<fermidq::StarProduct> product;
    if (use_star) product.emplace(fermidq::build_nac_form(prm, algebra).form);
    const fermidq::Element value = fermidq::evaluate(ast, algebra, prm, product ? &*product : nullptr);
    std::cout << "expr:  " << fermidq::to_string(ast) << '\n';
    std::cout << "value: " << fermidq::to_string(value) << '\n';
    std::cout << "parity: " << fermidq::to_string(value.parity()) << '\n';
  } catch (const fermidq::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    std::cerr << "  " << text << '\n' << "  " << std::string(e.column() - 1, ' ') << "^\n";
    return kUsage;
  } catch (const fermidq::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

int cmd_verify(const std::string& grid, bool perturb_hodge, const std::string& json_path,
               const fermidq::Tolerances& tol) {
  fermidq::VerifyOptions opt;
  if (grid == "fine") {
    opt.grid = fermidq::Grid::Fine;
  } else if (grid != "coarse") {
    std::cerr << "config error: --grid must be coarse or fine\n";
    return kUsage;
  }
  if (perturb_hodge) opt.hodge = fermidq::HodgeSign::Flipped;
  opt.tol = tol;
  const auto results = fermidq::run_verify(opt);
  bool all = true;
  for (const auto& r : results) {
    std::cout << fermidq::format_result(r);
    all = all && r.pass();
  }
  std::cout << (all ? "all criteria passed\n" : "verification FAILED\n");
  if (!json_path.empty() && !emit(json_path, fermidq::results_json(results).dump(2) + "\n")) return kUsage;
  return all ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fermidq: deformation quantisation of fermionic oscillators"};
  app.require_subcommand(1);

  std::string config_path;

  auto* scenario = app.add_subcommand("scenario", "run a preset pipeline and write a JSON report");
  std::string preset = "nac";
  std::optional<double> alpha;
  std::string scenario_out;
  ParamFlags scenario_flags;
  scenario->add_option("preset", preset, "scenario preset")->check(CLI::IsMember({"nac"}));
  scenario->add_option("--config", config_path, "key=value or JSON config file");
  scenario_flags.add(scenario);
  scenario->add_option("--renyi-alpha", alpha, "also report Renyi entropies of this order");
  scenario->add_option("--out", scenario_out, "report path (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "evaluate quantities along a deformation sweep, CSV output");
  ParamFlags sweep_flags;
  std::string link = "c=d", param = "c", quantities = "ep_pp,ep_pm", sweep_out;
  double from = -0.9, to = 0.9;
  int steps = 181;
  sweep->add_option("--config", config_path, "key=value or JSON config file for the base point");
  sweep_flags.add(sweep);
  sweep->add_option("--link", link, "c=d, c=-d or none");
  sweep->add_option("--param", param, "swept parameter when unlinked (c or d)");
  sweep->add_option("--from", from, "start, in units of hbar");
  sweep->add_option("--to", to, "end, in units of hbar");
  sweep->add_option("--steps", steps, "number of grid points");
  sweep->add_option("--quantities", quantities, "comma list of ep_pp, ep_pm, energies, p1, p2");
  sweep->add_option("--out", sweep_out, "CSV path (default stdout)");

  auto* eval = app.add_subcommand("eval", "parse and evaluate a Grassmann expression");
  std::string expr;
  bool use_star = false;
  ParamFlags eval_flags;
  eval->add_option("--expr", expr, "expression")->required();
  eval->add_flag("--star", use_star, "interpret '*' as the deformed star product");
  eval_flags.add(eval);

  auto* verify = app.add_subcommand("verify", "run the verification criteria");
  std::string grid = "coarse", verify_json;
  bool perturb_hodge = false;
  verify->add_option("--grid", grid, "coarse or fine");
  verify->add_flag("--perturb-hodge", perturb_hodge, "negative control: flip the Hodge sign in traces");
  verify->add_option("--json", verify_json, "also write machine-readable results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  fermidq::Tolerances tol;
  try {
    tol = fermidq::Tolerances::from_environment();
  } catch (const fermidq::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  }

  if (*scenario) return cmd_scenario(preset, config_path, scenario_flags, alpha, scenario_out, tol);
  if (*sweep) {
    return cmd_sweep(config_path, sweep_flags, link, param, from, to, steps, quantities, sweep_out, tol);
  }
  if (*eval) return cmd_eval(expr, use_star, eval_flags);
  return cmd_verify(grid, perturb_hodge, verify_json, tol);
}
