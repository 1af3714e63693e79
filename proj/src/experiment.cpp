#include "dacc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "dacc/benchmark_policies.hpp"
#include "dacc/delay_model.hpp"

namespace dacc {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "scenario", "N",        "K",          "F",          "B",       "T",
      "lambda",   "C",        "w",          "D_max",      "D_avgMax", "seed",
      "c_hat",    "popularity", "policies", "output",     "gnuplot", "strict_lmin",
      "fragments", "fragment_sizes", "trials", "real_coding", "trace"};
  return keys;
}

std::vector<double> number_or_list(const json& v, const char* key) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array() && !v.empty()) return v.get<std::vector<double>>();
  throw ConfigError(std::string(key) + " must be a number or a non-empty list");
}

Scenario parse_scenario(const std::string& s) {
  if (s == "delay_sweep") return Scenario::DelaySweep;
  if (s == "cost_sweep") return Scenario::CostSweep;
  if (s == "simulate") return Scenario::Simulate;
  if (s == "verify") return Scenario::Verify;
  throw ConfigError("unknown scenario '" + s + "'");
}

Policy parse_policy(const std::string& s) {
  if (s == "proposed") return Policy::Proposed;
  if (s == "mpfc") return Policy::Mpfc;
  if (s == "efc") return Policy::Efc;
  throw ConfigError("unknown policy '" + s + "'");
}

template <class Row, class Axis>
void sort_rows(std::vector<Row>& rows, Axis axis) {
  std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
    if (a.w != b.w) return a.w < b.w;
    if (axis(a) != axis(b)) return axis(a) < axis(b);
    return a.policy < b.policy;
  });
}

}  // namespace

const char* to_string(Policy policy) {
  switch (policy) {
    case Policy::Proposed: return "proposed";
    case Policy::Mpfc: return "mpfc";
    case Policy::Efc: return "efc";
  }
  return "?";
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<double> ExperimentSpec::library(double w) const {
  if (popularity) return *popularity;
  return zipf_popularity(static_cast<std::size_t>(system.K), w);
}

std::int64_t ExperimentSpec::budget_for(double c) const {
  const double segments = c * system.K * system.T;
  // absorb representation error such as 0.29 * 100 = 28.999999999999996
  return static_cast<std::int64_t>(std::floor(segments + 1e-9));
}

std::int64_t ExperimentSpec::single_budget() const {
  if (has_capacity || c_hat.empty()) return system.segment_budget();
  return budget_for(c_hat.front());
}

ExperimentSpec parse_experiment(const json& doc) {
  if (!doc.is_object() || doc.empty()) throw ConfigError("empty configuration");
  for (const auto& item : doc.items())
    if (!known_keys().count(item.key()))
      throw ConfigError("unknown configuration key '" + item.key() + "'");

  ExperimentSpec spec;
  try {
    if (doc.contains("scenario")) spec.scenario = parse_scenario(doc["scenario"]);
    if (doc.contains("popularity")) {
      spec.popularity = doc["popularity"].get<std::vector<double>>();
      try {
        VideoLibrary check(*spec.popularity);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("popularity: ") + e.what());
      }
    }
    if (!doc.contains("T")) throw ConfigError("T is required");
    SystemConfig& sys = spec.system;
    sys.T = doc["T"].get<int>();
    if (doc.contains("K")) {
      sys.K = doc["K"].get<int>();
    } else if (spec.popularity) {
      sys.K = static_cast<int>(spec.popularity->size());
    } else {
      throw ConfigError("K is required");
    }
    if (spec.popularity && static_cast<int>(spec.popularity->size()) != sys.K)
      throw ConfigError("popularity must list exactly K probabilities");
    sys.B = doc.value("B", std::int64_t{8});
    sys.F = doc.value("F", static_cast<std::int64_t>(sys.T) * sys.B);
    sys.lambda = doc.value("lambda", sys.B);
    sys.N = doc.value("N", sys.T);
    sys.D_max = doc.value("D_max", sys.T);
    sys.seed = doc.value("seed", std::uint64_t{1});

    if (doc.contains("w")) {
      spec.w_values = number_or_list(doc["w"], "w");
    } else if (spec.popularity) {
      spec.w_values = {0.0};
    } else {
      throw ConfigError("w is required unless popularity is given");
    }
    sys.w = spec.w_values.front();
    if (doc.contains("c_hat")) spec.c_hat = number_or_list(doc["c_hat"], "c_hat");
    for (double c : spec.c_hat)
      if (!(c > 0.0 && c <= 1.0)) throw ConfigError("c_hat values must lie in (0, 1]");
    if (doc.contains("D_avgMax")) {
      spec.d_avg_max = number_or_list(doc["D_avgMax"], "D_avgMax");
      sys.D_avgMax = spec.d_avg_max.front();
    }
    if (doc.contains("C")) {
      spec.has_capacity = true;
      sys.C = doc["C"].get<std::int64_t>();
    } else if (!spec.c_hat.empty()) {
      sys.C = spec.budget_for(spec.c_hat.front()) * sys.B;
    }
    if (doc.contains("policies")) {
      spec.policies.clear();
      for (const auto& p : doc["policies"]) spec.policies.push_back(parse_policy(p));
      if (spec.policies.empty()) throw ConfigError("policies must not be empty");
    }
    spec.output = doc.value("output", std::string{});
    spec.gnuplot = doc.value("gnuplot", std::string{});
    spec.trace = doc.value("trace", std::string{});
    spec.strict_lmin = doc.value("strict_lmin", false);
    if (doc.contains("fragments")) spec.fragments = doc["fragments"].get<int>();
    if (doc.contains("fragment_sizes"))
      spec.fragment_sizes = doc["fragment_sizes"].get<std::vector<int>>();
    spec.trials = doc.value("trials", std::size_t{100});
    spec.real_coding = doc.value("real_coding", false);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }

  try {
    spec.system.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (double x : spec.d_avg_max)
    if (!(x >= 1.0) || x > spec.system.D_max)
      throw ConfigError("D_avgMax values must lie in [1, D_max]");
  for (double w : spec.w_values)
    if (!(w >= 0.0)) throw ConfigError("w values must be >= 0");
  return spec;
}

ExperimentSpec load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_experiment(doc);
}

std::vector<DelayRow> run_delay_sweep(const ExperimentSpec& spec) {
  const DelayLevels levels(spec.system.T);
  std::vector<DelayRow> rows;
  for (double w : spec.w_values) {
    const std::vector<double> p = spec.library(w);
    std::optional<std::size_t> floor_level;
    try {
      floor_level = fairness_floor_level(levels, spec.system.D_max, spec.strict_lmin);
    } catch (const InfeasibleError&) {
    }
    for (double c : spec.c_hat) {
      const std::int64_t budget = spec.budget_for(c);
      for (Policy policy : spec.policies) {
        DelayRow row{w, c, policy, std::nullopt, budget};
        if (floor_level) {
          try {
            switch (policy) {
              case Policy::Proposed:
                row.outcome = minimize_delay(p, levels, budget, *floor_level);
                break;
              case Policy::Mpfc:
                row.outcome = mpfc_delay(p, levels, budget, *floor_level);
                break;
              case Policy::Efc:
                row.outcome = efc_delay(p, levels, budget, *floor_level);
                break;
            }
          } catch (const InfeasibleError&) {
          }
        }
        rows.push_back(std::move(row));
      }
    }
  }
  sort_rows(rows, [](const DelayRow& r) { return r.c_hat; });
  return rows;
}

std::vector<CostRow> run_cost_sweep(const ExperimentSpec& spec) {
  const DelayLevels levels(spec.system.T);
  const std::int64_t budget = spec.single_budget();
  std::vector<CostRow> rows;
  for (double w : spec.w_values) {
    const std::vector<double> p = spec.library(w);
    std::optional<std::size_t> floor_level;
    try {
      floor_level = fairness_floor_level(levels, spec.system.D_max, spec.strict_lmin);
    } catch (const InfeasibleError&) {
    }
    for (double x : spec.d_avg_max) {
      for (Policy policy : spec.policies) {
        CostRow row{w, x, policy, std::nullopt};
        if (floor_level) {
          try {
            switch (policy) {
              case Policy::Proposed:
                row.outcome = minimize_cost(p, levels, budget, *floor_level, x);
                break;
              case Policy::Mpfc:
                row.outcome = mpfc_cost(p, levels, budget, *floor_level, x);
                break;
              case Policy::Efc:
                row.outcome = efc_cost(p, levels, budget, *floor_level, x);
                break;
            }
          } catch (const InfeasibleError&) {
          }
        }
        rows.push_back(std::move(row));
      }
    }
  }
  sort_rows(rows, [](const CostRow& r) { return r.d_avg_max; });
  return rows;
}

std::string to_csv(const std::vector<DelayRow>& rows) {
  std::ostringstream out;
  out << kDelayCsvHeader << '\n';
  for (const DelayRow& r : rows) {
    out << format_number(r.w) << ',' << format_number(r.c_hat) << ',' << to_string(r.policy)
        << ',';
    if (r.outcome) {
      out << format_number(r.outcome->avg_delay) << ',' << r.budget_segments << ','
          << (r.outcome->exact_termination ? "true" : "false") << ",ok\n";
    } else {
      out << ',' << r.budget_segments << ",,infeasible\n";
    }
  }
  return out.str();
}

std::string to_csv(const std::vector<CostRow>& rows) {
  std::ostringstream out;
  out << kCostCsvHeader << '\n';
  for (const CostRow& r : rows) {
    out << format_number(r.w) << ',' << format_number(r.d_avg_max) << ','
        << to_string(r.policy) << ',';
    if (r.outcome) {
      out << format_number(r.outcome->theta) << ',' << format_number(r.outcome->avg_delay)
          << ',' << r.outcome->cached_set.size() << ",ok\n";
    } else {
      out << ",,,infeasible\n";
    }
  }
  return out.str();
}

SimulationReport run_simulation(const ExperimentSpec& spec) {
  SimulationReport report;
  report.plan.fragment_sizes =
      !spec.fragment_sizes.empty()
          ? spec.fragment_sizes
          : make_fragmentation(spec.system.T, spec.fragments.value_or(1));
  if (report.plan.segments() != spec.system.T)
    throw ConfigError("fragment_sizes must sum to T");
  report.expected_delay = cumulative_delay(report.plan.fragment_sizes);

  SessionOptions options;
  options.real_coding = spec.real_coding;
  options.segment_bits = spec.system.B;
  options.payload_seed = spec.system.seed;
  options.N = spec.system.N;
  if (spec.real_coding && spec.system.N > 255)
    throw ConfigError("real coding supports at most 255 SBSs");

  std::mt19937_64 rng(spec.system.seed);
  {
    std::mt19937_64 first(spec.system.seed);
    const MobilityPath path = generate_path(spec.system.N, spec.system.T, first);
    report.first_trace = simulate_session(report.plan, path, options);
    report.payload_intact = report.first_trace.displayed == report.first_trace.original;
  }
  report.stats = monte_carlo_delay(report.plan, spec.system.N, spec.trials, rng, options);
  return report;
}

std::string gnuplot_script(Scenario scenario, const ExperimentSpec& spec,
                           const std::string& csv_path) {
  const bool delay = scenario == Scenario::DelaySweep;
  std::ostringstream out;
  out << "set datafile separator ','\n"
      << "set grid\n"
      << "set xlabel '" << (delay ? "normalized cache size" : "max average delay (slots)")
      << "'\n"
      << "set ylabel '" << (delay ? "average re-buffering delay (slots)" : "MBS load")
      << "'\n";
  const int value_column = 4;
  for (double w : spec.w_values) {
    out << "set title 'w = " << format_number(w) << "'\n"
        << "plot ";
    for (std::size_t i = 0; i < spec.policies.size(); ++i) {
      const char* name = to_string(spec.policies[i]);
      out << (i ? ", \\\n     " : "") << "'" << csv_path << "' using ($1 == "
          << format_number(w) << " && strcol(3) eq '" << name << "' ? $2 : 1/0):"
          << value_column << " with linespoints title '" << name << "'";
    }
    out << "\npause -1\n";
  }
  return out.str();
}

}  // namespace dacc
