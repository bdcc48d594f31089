// Command-line front end: validate, tstar, lb, run, sweep, reproduce, report.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hisched/experiments.hpp"
#include "hisched/rng.hpp"
#include "hisched/scenario_io.hpp"
#include "hisched/solver.hpp"
#include "hisched/sweep.hpp"

namespace {

using namespace hisched;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kAcceptanceFailed = 2;

struct PolicyFlags {
  std::string policy = "hier";
  Slot f = 10000;
  double eta = 0.1;
  double initial_rho = 1.0;
  bool rd_saturate = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--policy", policy, "hier, vw, rd or cmu")->capture_default_str();
    cmd->add_option("--f", f, "weight update period (vw)")->capture_default_str();
    cmd->add_option("--eta", eta, "weight step size (vw)")->capture_default_str();
    cmd->add_option("--rho0", initial_rho, "initial virtual weight (vw)")->capture_default_str();
    cmd->add_flag("--rd-saturate", rd_saturate,
                  "rd: scale latency service probabilities to sum to 1 instead of rejecting");
  }

  PolicySpec spec() const {
    PolicySpec s;
    s.kind = parse_policy_kind(policy);
    s.vw.period = f;
    s.vw.eta = eta;
    s.vw.initial_rho = initial_rho;
    s.rd_saturate = rd_saturate;
    return s;
  }
};

void emit_table(const Table& t, const std::string& out) {
  if (out.empty() || out == "-") {
    write_csv(std::cout, t);
    return;
  }
  std::ofstream file(out);
  if (!file) throw ConfigError("cannot write " + out);
  write_csv(file, t);
}

int cmd_validate(const std::string& path) {
  const Scenario s = parse_scenario(path);
  const auto r = validate(s);
  Table t;
  t.header = {"load", "zeta", "feasible", "theta_sum", "rd_feasible"};
  t.add_row({fmt(r.load), fmt(r.zeta), r.feasible ? "1" : "0", fmt(r.theta_sum),
             r.rd_feasible ? (*r.rd_feasible ? "1" : "0") : ""});
  write_csv(std::cout, t);
  return kOk;
}

int cmd_tstar(const std::string& path) {
  const Scenario s = parse_scenario(path);
  const auto feas = validate(s);
  std::vector<UeConfig> aoi;
  for (const auto& u : s.ues()) {
    if (u.is_aoi()) aoi.push_back(u);
  }
  if (aoi.empty()) throw ConfigError("scenario has no AoI UEs");
  const auto sol = compute_t_star(aoi, feas.zeta);
  Table t;
  t.header = {"ue_id", "t_star", "threshold", "mu", "binding"};
  for (std::size_t i = 0; i < sol.t_star.size(); ++i) {
    const auto& e = sol.t_star[i];
    t.add_row({std::to_string(e.id), fmt(e.t_star), std::to_string(hier_threshold(e.t_star, *aoi[i].q)),
               fmt(sol.mu), sol.binding ? "1" : "0"});
  }
  write_csv(std::cout, t);
  return kOk;
}

int cmd_lb(const std::string& path, Slot horizon, std::uint64_t seed) {
  const auto lb = lower_bound(parse_scenario(path), horizon, seed);
  Table t;
  t.header = {"lb_f1", "lb_f2", "lb"};
  t.add_row({fmt(lb.lb_f1), fmt(lb.lb_f2), fmt(lb.lb)});
  write_csv(std::cout, t);
  return kOk;
}

int cmd_run(const std::string& path, const PolicyFlags& pf, Slot horizon, std::uint64_t seed, int seeds,
            Slot warmup, bool with_lb, const std::string& out) {
  if (seeds < 1) throw ConfigError("--seeds must be at least 1");
  const Scenario s = parse_scenario(path);
  std::vector<std::pair<std::string, RunReport>> runs;
  for (int r = 0; r < seeds; ++r) {
    const std::uint64_t run_seed = seeds == 1 ? seed : derive_seed(seed, 0, static_cast<std::uint64_t>(r));
    RunConfig cfg{s, pf.spec(), horizon, run_seed, warmup};
    auto report = run(cfg);
    if (with_lb) report.lb = lower_bound(s, horizon, run_seed);
    runs.emplace_back(std::to_string(r), std::move(report));
  }
  emit_table(run_table(runs), out);
  return kOk;
}

int cmd_sweep(const std::string& path, const PolicyFlags& pf, Slot horizon, std::uint64_t seed, int seeds,
              Slot warmup, bool with_lb, const std::string& param, const std::string& grid,
              std::optional<int> ue, unsigned threads, const std::string& out) {
  SweepSpec spec{RunConfig{parse_scenario(path), pf.spec(), horizon, seed, warmup}};
  spec.param = parse_sweep_param(param);
  spec.grid = grid.empty() ? std::vector<double>{} : parse_grid(grid);
  spec.ue_id = ue;
  spec.seeds = seeds;
  spec.with_lb = with_lb;
  spec.threads = threads;
  emit_table(sweep_table(sweep(spec), spec.param), out);
  return kOk;
}

int cmd_reproduce(const std::vector<std::string>& names, const PresetOptions& opts, const std::string& out_dir) {
  std::vector<Preset> presets;
  for (const auto& n : names) {
    if (n == "all") {
      presets = all_presets();
      break;
    }
    presets.push_back(parse_preset(n));
  }
  std::filesystem::create_directories(out_dir);
  bool all_pass = true;
  for (Preset p : presets) {
    const Table t = run_preset(p, opts);
    const auto file = std::filesystem::path(out_dir) / (std::string(to_string(p)) + ".csv");
    std::ofstream os(file);
    if (!os) throw ConfigError("cannot write " + file.string());
    write_csv(os, t);
    std::cout << to_string(p) << ": " << t.rows.size() << " rows -> " << file.string() << '\n';
    for (const auto& v : preset_verdicts(p, t)) {
      all_pass = all_pass && v.pass;
      std::cout << "  [" << (v.pass ? "PASS" : "FAIL") << "] " << v.criterion << " (" << v.detail << ")\n";
    }
  }
  return all_pass ? kOk : kAcceptanceFailed;
}

int cmd_report(const std::string& path, const std::string& out) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  const std::string md = render_report(read_csv(in, path));
  if (out.empty() || out == "-") {
    std::cout << md;
  } else {
    std::ofstream os(out);
    if (!os) throw ConfigError("cannot write " + out);
    os << md;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical index scheduling simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out;
  Slot horizon = 1'000'000;
  std::uint64_t seed = 1;
  int seeds = 1;
  Slot warmup = 0;
  bool with_lb = false;
  unsigned threads = 0;
  PolicyFlags policy;

  auto* validate_cmd = app.add_subcommand("validate", "check a scenario and print its load");
  validate_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();

  auto* tstar_cmd = app.add_subcommand("tstar", "print target spacings and thresholds");
  tstar_cmd->add_option("scenario", scenario_path)->required();

  auto* lb_cmd = app.add_subcommand("lb", "print the cost lower bound");
  lb_cmd->add_option("scenario", scenario_path)->required();
  lb_cmd->add_option("--horizon", horizon)->capture_default_str();
  lb_cmd->add_option("--seed", seed)->capture_default_str();

  auto* run_cmd = app.add_subcommand("run", "simulate one scenario");
  run_cmd->add_option("scenario", scenario_path)->required();
  policy.attach(run_cmd);
  run_cmd->add_option("--horizon", horizon)->capture_default_str();
  run_cmd->add_option("--seed", seed)->capture_default_str();
  run_cmd->add_option("--seeds", seeds, "replicates; seeds derived from --seed")->capture_default_str();
  run_cmd->add_option("--warmup", warmup, "slots excluded from averages")->capture_default_str();
  run_cmd->add_flag("--lb", with_lb, "attach the lower bound to the summary row");
  run_cmd->add_option("--out", out, "CSV path (default stdout)");

  std::string param = "alpha";
  std::string grid;
  std::optional<int> ue;
  auto* sweep_cmd = app.add_subcommand("sweep", "simulate a parameter grid");
  sweep_cmd->add_option("scenario", scenario_path)->required();
  policy.attach(sweep_cmd);
  sweep_cmd->add_option("--param", param, "alpha or beta")->capture_default_str();
  sweep_cmd->add_option("--grid", grid, "a:b:step")->required();
  sweep_cmd->add_option("--ue", ue, "UE the parameter applies to");
  sweep_cmd->add_option("--horizon", horizon)->capture_default_str();
  sweep_cmd->add_option("--seed", seed, "seed base")->capture_default_str();
  sweep_cmd->add_option("--seeds", seeds)->capture_default_str();
  sweep_cmd->add_option("--warmup", warmup)->capture_default_str();
  sweep_cmd->add_option("--threads", threads, "0: all cores")->capture_default_str();
  sweep_cmd->add_flag("--lb", with_lb);
  sweep_cmd->add_option("--out", out);

  std::vector<std::string> preset_names;
  PresetOptions preset_opts;
  std::optional<Slot> preset_horizon;
  std::string out_dir = "results";
  auto* reproduce_cmd = app.add_subcommand("reproduce", "run figure presets and check acceptance");
  reproduce_cmd->add_option("preset", preset_names, "fig4 fig5_cost fig5_weights fig6 fig8 or all")->required();
  reproduce_cmd->add_option("--horizon", preset_horizon, "override the preset horizon");
  reproduce_cmd->add_option("--seeds", preset_opts.seeds)->capture_default_str();
  reproduce_cmd->add_option("--seed", preset_opts.seed)->capture_default_str();
  reproduce_cmd->add_option("--threads", preset_opts.threads)->capture_default_str();
  reproduce_cmd->add_option("--out-dir", out_dir)->capture_default_str();

  std::string csv_path;
  auto* report_cmd = app.add_subcommand("report", "render a CSV as markdown with verdicts");
  report_cmd->add_option("csv", csv_path)->required();
  report_cmd->add_option("--out", out, "markdown path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }

  try {
    if (*validate_cmd) return cmd_validate(scenario_path);
    if (*tstar_cmd) return cmd_tstar(scenario_path);
    if (*lb_cmd) return cmd_lb(scenario_path, horizon, seed);
    if (*run_cmd) return cmd_run(scenario_path, policy, horizon, seed, seeds, warmup, with_lb, out);
    if (*sweep_cmd) {
      return cmd_sweep(scenario_path, policy, horizon, seed, seeds, warmup, with_lb, param, grid, ue, threads, out);
    }
    if (*reproduce_cmd) {
      preset_opts.horizon = preset_horizon;
      return cmd_reproduce(preset_names, preset_opts, out_dir);
    }
    if (*report_cmd) return cmd_report(csv_path, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
