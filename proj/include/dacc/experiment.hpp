#pragma once

// Experiment configuration, parameter sweeps and their CSV output.
//
// A configuration is one JSON object; unknown keys are rejected. Keys:
//
//   scenario     "delay_sweep" | "cost_sweep" | "simulate" | "verify"
//   N K F B T lambda C D_max seed     as in SystemConfig
//   w            number or list (sweeps iterate over the list)
//   c_hat        number or list, normalized cache size in (0, 1]
//   D_avgMax     number or list (the cost sweep axis)
//   popularity   explicit request probabilities instead of Zipf
//   policies     subset of ["proposed", "mpfc", "efc"]
//   output       CSV path for `sweep` when --out is not given
//   gnuplot      optional path for a companion gnuplot script
//   strict_lmin  use D^(l) < D_max for the fairness floor
//   fragments    simulate: fragment count M (near-equal split)
//   fragment_sizes  simulate: explicit sizes, overriding `fragments`
//   trials       simulate: number of random paths
//   real_coding  simulate: carry GF(2^8) payloads through the session
//   trace        simulate: file receiving the first session's trace

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dacc/core_model.hpp"
#include "dacc/placement_optimizer.hpp"
#include "dacc/stream_sim.hpp"

namespace dacc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario { DelaySweep, CostSweep, Simulate, Verify };
enum class Policy { Proposed, Mpfc, Efc };

const char* to_string(Policy policy);

struct ExperimentSpec {
  Scenario scenario = Scenario::DelaySweep;
  SystemConfig system;
  std::vector<double> w_values;
  std::vector<double> c_hat;
  std::vector<double> d_avg_max;
  std::optional<std::vector<double>> popularity;
  std::vector<Policy> policies{Policy::Proposed, Policy::Mpfc, Policy::Efc};
  std::string output;
  std::string gnuplot;
  bool strict_lmin = false;
  bool has_capacity = false;  // C given explicitly
  std::optional<int> fragments;
  std::vector<int> fragment_sizes;
  std::size_t trials = 100;
  bool real_coding = false;
  std::string trace;

  /// Popularity vector for skewness w (or the explicit vector).
  std::vector<double> library(double w) const;
  /// floor(c_hat * K * T) segments.
  std::int64_t budget_for(double c_hat) const;
  /// Segment budget of a single-instance run: C/B when C is set, else the
  /// first c_hat value.
  std::int64_t single_budget() const;
};

/// Throws ConfigError on malformed input.
ExperimentSpec parse_experiment(const nlohmann::json& doc);
ExperimentSpec load_experiment(const std::string& path);

struct DelayRow {
  double w = 0.0;
  double c_hat = 0.0;
  Policy policy = Policy::Proposed;
  std::optional<OptimizerOutcome> outcome;  // empty when infeasible
  std::int64_t budget_segments = 0;
};

struct CostRow {
  double w = 0.0;
  double d_avg_max = 0.0;
  Policy policy = Policy::Proposed;
  std::optional<CostOutcome> outcome;  // empty when infeasible
};

/// One row per (w, c_hat, policy); the proposed policy is minimize_delay.
std::vector<DelayRow> run_delay_sweep(const ExperimentSpec& spec);

/// One row per (w, D_avgMax, policy) at the budget of the first c_hat (or C);
/// the proposed policy is minimize_cost.
std::vector<CostRow> run_cost_sweep(const ExperimentSpec& spec);

inline constexpr const char* kDelayCsvHeader =
    "w,c_hat,policy,avg_delay,budget_segments,exact_termination,status";
inline constexpr const char* kCostCsvHeader =
    "w,d_avg_max,policy,theta,avg_delay,cached_count,status";

std::string to_csv(const std::vector<DelayRow>& rows);
std::string to_csv(const std::vector<CostRow>& rows);

struct SimulationReport {
  FragmentationPlan plan;
  DelayStats stats;
  int expected_delay = 0;   // largest fragment
  bool payload_intact = true;
  SessionTrace first_trace;
};

/// Monte Carlo sessions over random paths for the configured fragmentation.
SimulationReport run_simulation(const ExperimentSpec& spec);

/// Gnuplot script plotting one curve per policy for each w from `csv_path`.
std::string gnuplot_script(Scenario scenario, const ExperimentSpec& spec,
                           const std::string& csv_path);

/// %.9g formatting used for every floating CSV field.
std::string format_number(double v);

}  // namespace dacc
