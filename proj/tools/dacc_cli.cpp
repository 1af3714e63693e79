// dacc: command-line front end for the caching optimizers, sweeps and checks.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dacc/benchmark_policies.hpp"
#include "dacc/experiment.hpp"
#include "dacc/placement_optimizer.hpp"
#include "dacc/stream_sim.hpp"
#include "dacc/verify.hpp"

using nlohmann::json;
using namespace dacc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitConfig = 2;

struct Globals {
  std::optional<std::uint64_t> seed;
  bool strict_lmin = false;
};

ExperimentSpec load(const std::string& path, const Globals& g) {
  ExperimentSpec spec = load_experiment(path);
  if (g.seed) spec.system.seed = *g.seed;
  if (g.strict_lmin) spec.strict_lmin = true;
  return spec;
}

json plan_json(const CachePlan& plan) {
  return {{"M", plan.M}, {"segments_used", plan.segments_used()}};
}

int cmd_optimize(const ExperimentSpec& spec) {
  const DelayLevels levels(spec.system.T);
  const std::size_t floor = fairness_floor_level(levels, spec.system.D_max, spec.strict_lmin);
  const std::int64_t budget = spec.single_budget();
  json out = json::array();
  for (double w : spec.w_values) {
    const auto p = spec.library(w);
    for (Policy policy : spec.policies) {
      json row = {{"w", w}, {"policy", to_string(policy)}, {"budget_segments", budget}};
      try {
        OptimizerOutcome o;
        switch (policy) {
          case Policy::Proposed: o = minimize_delay(p, levels, budget, floor); break;
          case Policy::Mpfc: o = mpfc_delay(p, levels, budget, floor); break;
          case Policy::Efc: o = efc_delay(p, levels, budget, floor); break;
        }
        row["status"] = "ok";
        row["avg_delay"] = o.avg_delay;
        row["approx_avg_delay"] = o.approx_avg_delay;
        row["exact_termination"] = o.exact_termination;
        row["epsilon_pad"] = epsilon_pad(o, levels);
        row["plan"] = plan_json(o.plan);
      } catch (const InfeasibleError& e) {
        row["status"] = "infeasible";
        row["reason"] = e.what();
      }
      out.push_back(std::move(row));
    }
  }
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_cost_min(const ExperimentSpec& spec) {
  if (spec.d_avg_max.empty()) throw ConfigError("cost-min needs D_avgMax");
  const DelayLevels levels(spec.system.T);
  const std::size_t floor = fairness_floor_level(levels, spec.system.D_max, spec.strict_lmin);
  const std::int64_t budget = spec.single_budget();
  json out = json::array();
  for (double w : spec.w_values) {
    const auto p = spec.library(w);
    for (double x : spec.d_avg_max) {
      for (Policy policy : spec.policies) {
        json row = {{"w", w}, {"d_avg_max", x}, {"policy", to_string(policy)},
                    {"budget_segments", budget}};
        try {
          CostOutcome o;
          switch (policy) {
            case Policy::Proposed: o = minimize_cost(p, levels, budget, floor, x); break;
            case Policy::Mpfc: o = mpfc_cost(p, levels, budget, floor, x); break;
            case Policy::Efc: o = efc_cost(p, levels, budget, floor, x); break;
          }
          row["status"] = "ok";
          row["theta"] = o.theta;
          row["avg_delay"] = o.avg_delay;
          row["cached_count"] = o.cached_set.size();
          row["evictions"] = o.evictions;
          row["plan"] = plan_json(o.plan);
        } catch (const InfeasibleError& e) {
          row["status"] = "infeasible";
          row["reason"] = e.what();
        }
        out.push_back(std::move(row));
      }
    }
  }
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_simulate(const ExperimentSpec& spec) {
  const SimulationReport r = run_simulation(spec);
  if (!spec.trace.empty()) {
    std::ofstream trace(spec.trace);
    if (!trace) throw ConfigError("cannot write trace '" + spec.trace + "'");
    write_trace(trace, r.first_trace);
  }
  const json out = {{"fragment_sizes", r.plan.fragment_sizes},
                    {"expected_delay", r.expected_delay},
                    {"trials", r.stats.trials},
                    {"mean_delay", r.stats.mean},
                    {"min_delay", r.stats.min},
                    {"max_delay", r.stats.max},
                    {"real_coding", spec.real_coding},
                    {"payload_intact", r.payload_intact}};
  std::cout << out.dump(2) << '\n';
  return r.payload_intact ? kExitOk : kExitVerify;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

int cmd_sweep(const ExperimentSpec& spec, std::string out) {
  if (out.empty()) out = spec.output;
  std::string csv;
  switch (spec.scenario) {
    case Scenario::DelaySweep:
      if (spec.c_hat.empty()) throw ConfigError("delay sweep needs c_hat values");
      csv = to_csv(run_delay_sweep(spec));
      break;
    case Scenario::CostSweep:
      if (spec.d_avg_max.empty()) throw ConfigError("cost sweep needs D_avgMax values");
      csv = to_csv(run_cost_sweep(spec));
      break;
    default:
      throw ConfigError("sweep needs scenario delay_sweep or cost_sweep");
  }
  if (out.empty() || out == "-") {
    std::cout << csv;
  } else {
    write_file(out, csv);
  }
  if (!spec.gnuplot.empty())
    write_file(spec.gnuplot, gnuplot_script(spec.scenario, spec, out.empty() ? "-" : out));
  return kExitOk;
}

int cmd_verify(const Globals& g) {
  const VerifyReport report = run_verify(g.seed.value_or(1));
  print_report(std::cout, report);
  return report.passed() ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-aware coded caching for high-mobility video streaming"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides the config)");
  app.add_flag("--strict-lmin", g.strict_lmin, "fairness floor uses D^(l) < D_max");

  std::string config;
  std::string out;
  auto* optimize = app.add_subcommand("optimize", "minimize average delay for a cache budget");
  optimize->add_option("--config", config, "JSON configuration")->required();
  auto* cost = app.add_subcommand("cost-min", "minimize uncached mass under a delay cap");
  cost->add_option("--config", config, "JSON configuration")->required();
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo streaming sessions");
  simulate->add_option("--config", config, "JSON configuration")->required();
  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  sweep->add_option("--config", config, "JSON configuration")->required();
  sweep->add_option("--out", out, "CSV path (default: config output, else stdout)");
  auto* verify = app.add_subcommand("verify", "run the self-check suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  try {
    if (verify->parsed()) return cmd_verify(g);
    const ExperimentSpec spec = load(config, g);
    if (optimize->parsed()) return cmd_optimize(spec);
    if (cost->parsed()) return cmd_cost_min(spec);
    if (simulate->parsed()) return cmd_simulate(spec);
    if (sweep->parsed()) return cmd_sweep(spec, out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerify;
  }
  return kExitConfig;
}
