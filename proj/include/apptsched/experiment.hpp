#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "apptsched/analytics.hpp"
#include "apptsched/bop.hpp"
#include "apptsched/errors.hpp"
#include "apptsched/io.hpp"
#include "apptsched/model.hpp"
#include "apptsched/montecarlo.hpp"
#include "apptsched/schedules.hpp"

namespace apptsched {

enum class ScheduleKind { Fluid, Diffusion, DiffusionLegacy, Uniform, File };

inline ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "fluid") return ScheduleKind::Fluid;
  if (name == "diffusion") return ScheduleKind::Diffusion;
  if (name == "diffusion_legacy") return ScheduleKind::DiffusionLegacy;
  if (name == "uniform") return ScheduleKind::Uniform;
  if (name == "file") return ScheduleKind::File;
  throw DomainError("unknown schedule_kind '" + std::string(name) + "'");
}

// Batch experiment description, read from a JSON file.
//
// Core keys: params, n_list, reps, seed, schedule_kind, dt, out. Optional:
// schedule_file (schedule_kind = file), beta_list and h_list (bop, rbm),
// t_list and sigma (rbm).
struct ExperimentConfig {
  ModelParams params;
  std::vector<std::int64_t> n_list;
  std::int64_t reps = 2;
  std::uint64_t seed = 0;
  std::optional<ScheduleKind> schedule_kind;
  std::optional<double> dt;
  std::string out;
  std::string schedule_file;
  std::vector<double> beta_list;
  std::vector<double> h_list;
  std::vector<double> t_list;
  std::optional<double> sigma;
};

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  static const char* const kKeys[] = {"params", "n_list", "reps",   "seed",   "schedule_kind", "dt",   "out",
                                      "schedule_file", "beta_list", "h_list", "t_list", "sigma"};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw DomainError("unknown config key '" + key + "'");
  }
  ExperimentConfig cfg;
  try {
    if (!j.contains("params")) throw DomainError("config needs 'params'");
    cfg.params = params_from_json(j.at("params"));
    if (j.contains("n_list")) cfg.n_list = j.at("n_list").get<std::vector<std::int64_t>>();
    if (j.contains("reps")) cfg.reps = j.at("reps").get<std::int64_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("schedule_kind")) cfg.schedule_kind = parse_schedule_kind(j.at("schedule_kind").get<std::string>());
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("schedule_file")) cfg.schedule_file = j.at("schedule_file").get<std::string>();
    if (j.contains("beta_list")) cfg.beta_list = j.at("beta_list").get<std::vector<double>>();
    if (j.contains("h_list")) cfg.h_list = j.at("h_list").get<std::vector<double>>();
    if (j.contains("t_list")) cfg.t_list = j.at("t_list").get<std::vector<double>>();
    if (j.contains("sigma")) cfg.sigma = j.at("sigma").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad config value: ") + e.what());
  }
  if (cfg.reps < 2) throw DomainError("reps must be >= 2");
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    if (cfg.n_list[i] < 1) throw DomainError("n_list entries must be positive");
    if (i > 0 && cfg.n_list[i] < cfg.n_list[i - 1]) throw DomainError("n_list must be sorted");
  }
  if (cfg.dt && !(*cfg.dt > 0.0)) throw DomainError("dt must be positive");
  return cfg;
}

struct RunOptions {
  unsigned threads = 0;
  bool deterministic = false;
};

namespace detail {

inline void require_n_list(const ExperimentConfig& cfg) {
  if (cfg.n_list.empty()) throw DomainError("n_list must not be empty");
}

inline Schedule make_schedule(const ExperimentConfig& cfg, const SystemInstance& inst, ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Fluid: return fluid_schedule(inst);
    case ScheduleKind::Diffusion: return diffusion_schedule(inst, DriftConvention::Optimal);
    case ScheduleKind::DiffusionLegacy: return diffusion_schedule(inst, DriftConvention::Legacy);
    case ScheduleKind::Uniform: return uniform_schedule(inst);
    case ScheduleKind::File: {
      if (cfg.schedule_file.empty()) throw DomainError("schedule_kind = file needs schedule_file");
      Schedule s = read_schedule_csv(cfg.schedule_file, inst.params.horizon);
      if (s.size() != inst.population) {
        throw SizeMismatch("schedule file has " + std::to_string(s.size()) + " times, N_n = " +
                           std::to_string(inst.population));
      }
      return s;
    }
  }
  throw DomainError("unhandled schedule kind");
}

// Drift of the linear diffusion control a schedule kind corresponds to.
inline std::optional<double> kind_drift(const ModelParams& params, ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Fluid: return 0.0;
    case ScheduleKind::Diffusion: return diffusion_drift(params, DriftConvention::Optimal);
    case ScheduleKind::DiffusionLegacy: return diffusion_drift(params, DriftConvention::Legacy);
    default: return std::nullopt;
  }
}

inline McOptions mc_options(const ExperimentConfig& cfg, const RunOptions& run) {
  return {cfg.reps, RngPolicy{cfg.seed}, run.threads};
}

inline std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return format_real(v);
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const RunOptions& run, std::string_view header) : os_(os) {
    if (!run.deterministic) {
      const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      std::tm utc{};
      gmtime_r(&now, &utc);
      os_ << "# generated " << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ") << '\n';
    }
    os_ << header << '\n';
  }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(std::int64_t v) { return std::to_string(v); }

  std::ostream& os_;
};

inline void run_fluid_conv(const ExperimentConfig& cfg, const RunOptions& run, std::ostream& os) {
  require_n_list(cfg);
  const double v_bar = fluid_summary(cfg.params).v_bar;
  const ScheduleKind kind = cfg.schedule_kind.value_or(ScheduleKind::Fluid);
  CsvWriter csv(os, run, "n,cost_mean,cost_stderr,v_bar,gap");
  for (const std::int64_t n : cfg.n_list) {
    const SystemInstance inst = build_instance(cfg.params, n);
    const Estimate est = estimate_cost(inst, make_schedule(cfg, inst, kind), mc_options(cfg, run));
    csv.row(n, est.mean, est.std_error, v_bar, est.mean - v_bar);
  }
}

inline void run_diff_conv(const ExperimentConfig& cfg, const RunOptions& run, std::ostream& os) {
  require_n_list(cfg);
  const ScheduleKind kind = cfg.schedule_kind.value_or(ScheduleKind::Diffusion);
  const DiffusionConstants dc = diffusion_constants(cfg.params);
  const double h = cfg.params.horizon;
  const std::optional<double> drift = kind_drift(cfg.params, kind);
  const double bop = drift ? linear_bop_cost(*drift, h, cfg.params) : std::numeric_limits<double>::quiet_NaN();
  CsvWriter csv(os, run, "n,H,hatJ_mean,hatJ_stderr,bop_linear_cost,v_star");
  for (const std::int64_t n : cfg.n_list) {
    const SystemInstance inst = build_instance(cfg.params, n);
    const Estimate cost = estimate_cost(inst, make_schedule(cfg, inst, kind), mc_options(cfg, run));
    const Estimate scaled = scaled_diffusion_cost(cost, cfg.params, n);
    csv.row(n, h, scaled.mean / h, scaled.std_error / h, bop, dc.v_star);
  }
}

inline void run_sg(const ExperimentConfig& cfg, const RunOptions& run, std::ostream& os) {
  require_n_list(cfg);
  const ScheduleKind kind = cfg.schedule_kind.value_or(ScheduleKind::Fluid);
  CsvWriter csv(os, run, "n,sg_mean,sg_stderr");
  for (const std::int64_t n : cfg.n_list) {
    const SystemInstance inst = build_instance(cfg.params, n);
    const Estimate sg = estimate_sg(inst, make_schedule(cfg, inst, kind), mc_options(cfg, run));
    csv.row(n, sg.mean, sg.std_error);
  }
}

inline void run_ci(const ExperimentConfig& cfg, const RunOptions& run, std::ostream& os) {
  require_n_list(cfg);
  const double v_bar = fluid_summary(cfg.params).v_bar;
  CsvWriter csv(os, run, "n,ci_cost_mean,ci_cost_stderr,v_bar");
  for (const std::int64_t n : cfg.n_list) {
    const SystemInstance inst = build_instance(cfg.params, n);
    const Estimate ci = estimate_ci_cost(inst, mc_options(cfg, run));
    csv.row(n, ci.mean, ci.std_error, v_bar);
  }
}

inline void run_bop(const ExperimentConfig& cfg, const RunOptions& run, std::ostream& os) {
  const BopCoefficients coeffs = bop_coefficients(cfg.params);
  std::vector<double> betas = cfg.beta_list;
  if (betas.empty()) betas.push_back(diffusion_constants(cfg.params).beta_star);
  std::vector<double> horizons = cfg.h_list;
  if (horizons.empty()) horizons.push_back(cfg.params.horizon);
  CsvWriter csv(os, run, "beta,H,mc_mean,mc_stderr,quadrature");
  for (const double beta : betas) {
    for (const double h : horizons) {
      const double dt = cfg.dt.value_or(h / 16384.0);
      const Estimate mc =
          bop_cost_mc(PiecewiseLinearControl::linear(beta, h), coeffs, h, dt, cfg.reps, cfg.seed, run.threads);
      csv.row(beta, h, mc.mean, mc.std_error, linear_bop_cost(beta, h, coeffs));
    }
  }
}

inline void run_rbm(const ExperimentConfig& cfg, const RunOptions& run, std::ostream& os) {
  if (cfg.t_list.empty()) throw DomainError("rbm needs a non-empty t_list");
  const double sigma = cfg.sigma ? *cfg.sigma : diffusion_sigma(cfg.params);
  std::vector<double> betas = cfg.beta_list;
  if (betas.empty()) betas.push_back(diffusion_constants(cfg.params).beta_star);
  CsvWriter csv(os, run, "t,beta,sigma,mean,stationary_mean");
  for (const double t : cfg.t_list) {
    for (const double beta : betas) {
      const double stationary =
          beta < 0.0 ? rbm_stationary_mean(beta, sigma) : std::numeric_limits<double>::infinity();
      csv.row(t, beta, sigma, rbm_mean(t, beta, sigma), stationary);
    }
  }
}

struct ReplicationTotals {
  double cost;
  double makespan;
  double overage;
};

inline void run_simulate(const ExperimentConfig& cfg, const RunOptions& run, std::ostream& os) {
  require_n_list(cfg);
  const ScheduleKind kind = cfg.schedule_kind.value_or(ScheduleKind::Fluid);
  CsvWriter csv(os, run, "n,cost_mean,cost_stderr,makespan_mean,overage_mean");
  for (const std::int64_t n : cfg.n_list) {
    const SystemInstance inst = build_instance(cfg.params, n);
    const Schedule schedule = make_schedule(cfg, inst, kind);
    const RngPolicy policy{cfg.seed};
    const auto reps = run_indexed(
        cfg.reps, run.threads, [] { return Realization{}; },
        [&](std::int64_t k, Realization& r) {
          Philox4x64 rng = policy.substream(static_cast<std::uint64_t>(k));
          sample_realization_into(inst, rng, r);
          const SimTotals s = simulate_totals(inst, schedule, r);
          return ReplicationTotals{inst.cw_n * s.makespan_W + inst.co_n * s.overage_O, s.makespan_W, s.overage_O};
        });
    std::vector<double> costs;
    std::vector<double> makespans;
    std::vector<double> overages;
    for (const auto& r : reps) {
      costs.push_back(r.cost);
      makespans.push_back(r.makespan);
      overages.push_back(r.overage);
    }
    const Estimate cost = summarize(costs);
    csv.row(n, cost.mean, cost.std_error, summarize(makespans).mean, summarize(overages).mean);
  }
}

}  // namespace detail

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"fluid-conv", "diff-conv", "sg", "bop", "rbm", "ci", "simulate"};
  return names;
}

// Runs one subcommand and writes its CSV to `os`. Throws DomainError for bad
// configs and NumericalError for numerical failures.
inline void run_experiment(std::string_view subcommand, const ExperimentConfig& cfg, const RunOptions& run,
                           std::ostream& os) {
  if (subcommand == "fluid-conv") return detail::run_fluid_conv(cfg, run, os);
  if (subcommand == "diff-conv") return detail::run_diff_conv(cfg, run, os);
  if (subcommand == "sg") return detail::run_sg(cfg, run, os);
  if (subcommand == "bop") return detail::run_bop(cfg, run, os);
  if (subcommand == "rbm") return detail::run_rbm(cfg, run, os);
  if (subcommand == "ci") return detail::run_ci(cfg, run, os);
  if (subcommand == "simulate") return detail::run_simulate(cfg, run, os);
  throw DomainError("unknown subcommand '" + std::string(subcommand) + "'");
}

}  // namespace apptsched
