#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "aiaas/ai/linear.hpp"
#include "aiaas/ai/lstm.hpp"
#include "aiaas/ai/model_io.hpp"
#include "aiaas/common/error.hpp"
#include "aiaas/common/random.hpp"
#include "aiaas/control/scheduler.hpp"
#include "aiaas/harness/scenarios.hpp"
#include "aiaas/metrics/csv.hpp"
#include "aiaas/sdi/topology_io.hpp"

namespace aiaas::harness {

namespace {

constexpr std::uint64_t kCpuNoiseStream = 0x63707530ULL;

struct ForecastData {
  std::vector<double> traffic;
  double interval_ms = 60000.0;
  double traffic_min = 0.0;
  double traffic_max = 1.0;
  ai::LinearModel fit;
  ai::RecurrentModel model;
  double capacity = 0.0;
  double headroom = 0.0;

  double normalize(double t) const { return (t - traffic_min) / (traffic_max - traffic_min); }
  std::size_t index_at(std::int64_t now_ms) const {
    const auto i = static_cast<std::size_t>(std::llround(static_cast<double>(now_ms) / interval_ms));
    if (i >= traffic.size()) throw NotFoundError("no traffic sample at t=" + std::to_string(now_ms) + " ms");
    return i;
  }
};

void register_forecasting(control::FunctionRegistry& registry, std::shared_ptr<const ForecastData> data) {
  registry.add("monitor.vnf_traffic", [data](const control::StepContext& ctx, control::StepIo& io) {
    const std::size_t i = data->index_at(ctx.now_ms);
    io.observations["traffic"] = data->traffic[i];
    io.observations["sample"] = static_cast<double>(i);
  });
  registry.add("analyze.traffic_forecast", [data](const control::StepContext& ctx, control::StepIo& io) {
    auto it = io.observations.find("sample");
    if (it == io.observations.end()) throw StateError("analyze.traffic_forecast: no traffic observed");
    const auto i = static_cast<std::size_t>(it->second);
    const std::size_t w = data->model.window;
    double peak = data->traffic[i];
    if (i + 1 >= w) {
      const auto f = ai::rnn_predict(data->model, std::span(data->traffic).subspan(i + 1 - w, w));
      peak = *std::max_element(f.begin(), f.end());
    }
    const double need = ai::lin_predict(data->fit, data->normalize(peak)) * data->capacity;
    io.analyses.push_back({"traffic_forecast_peak", peak, ctx.now_ms});
    io.analyses.push_back({ctx.step.param_text("output_kind", "cpu_forecast_millicores"),
                           need * (1.0 + data->headroom), ctx.now_ms});
  });
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

RunReport run_adaptive_vnf(const ScenarioConfig& config) {
  RunReport report;
  report.scenario = Scenario::AdaptiveVnf;
  report.seed = config.seed;
  const auto& out = config.output_dir;
  const AdaptiveParams& p = config.adaptive;

  const metrics::TimeSeries traffic = metrics::generate_workload(config.workload);
  const std::size_t n = traffic.size();
  const auto n_train = static_cast<std::size_t>(std::floor(p.training_ratio * static_cast<double>(n)));
  if (n_train <= p.window + p.horizon || n - n_train < p.horizon + 1) {
    throw ValidationError("adaptive-vnf: workload too short for window " + std::to_string(p.window) +
                          " and horizon " + std::to_string(p.horizon));
  }

  // Planted relation on normalized data: cpu = slope * traffic + intercept + noise.
  const auto train_begin = traffic.values.begin();
  const auto train_end = train_begin + static_cast<std::ptrdiff_t>(n_train);
  const double t_min = *std::min_element(train_begin, train_end);
  const double t_max = *std::max_element(train_begin, train_end);
  if (!(t_max > t_min)) throw ValidationError("adaptive-vnf: training traffic is constant");
  std::vector<double> traffic_norm(n);
  std::vector<double> cpu_norm(n);
  std::vector<double> need(n);
  Rng noise(config.seed ^ kCpuNoiseStream);
  for (std::size_t i = 0; i < n; ++i) {
    traffic_norm[i] = (traffic.values[i] - t_min) / (t_max - t_min);
    cpu_norm[i] = p.planted_slope * traffic_norm[i] + p.planted_intercept + noise.normal(0.0, p.noise_sigma);
    need[i] = cpu_norm[i] * static_cast<double>(p.vnf_capacity_millicores);
  }

  // Phase 1: the traffic to cpu relation.
  const ai::LinearModel fit =
      ai::linfit(std::span(traffic_norm).first(n_train), std::span(cpu_norm).first(n_train));
  const double slope_error = std::abs(fit.slope - p.planted_slope) / std::abs(p.planted_slope);

  // Phase 2: the traffic predictor, scored against persistence on held-out data.
  const ai::RecurrentTrainResult trained = ai::rnn_train(std::span(traffic.values).first(n_train), p.window,
                                                         p.horizon, config.train, p.hidden_size);
  double se_model = 0.0;
  double se_persist = 0.0;
  std::size_t count = 0;
  std::vector<std::vector<double>> forecast_rows;
  for (std::size_t s = n_train; s + p.horizon <= n; ++s) {
    const auto f = ai::rnn_predict(trained.model, std::span(traffic.values).subspan(s - p.window, p.window));
    const double last = traffic.values[s - 1];
    for (std::size_t h = 0; h < p.horizon; ++h) {
      const double actual = traffic.values[s + h];
      se_model += (f[h] - actual) * (f[h] - actual);
      se_persist += (last - actual) * (last - actual);
      ++count;
      forecast_rows.push_back({traffic.timestamps[s - 1], static_cast<double>(h + 1), actual, f[h], last});
    }
  }
  const double mse_model = se_model / static_cast<double>(count);
  const double mse_persist = se_persist / static_cast<double>(count);
  const double ratio = mse_persist > 0.0 ? mse_model / mse_persist : std::numeric_limits<double>::infinity();

  // Phase 3: the control loop resizing the firewall's cpu knob.
  sdi::TopologyState live(sdi::resolve_topology(config.topology));
  const double need_peak = *std::max_element(need.begin(), need.begin() + static_cast<std::ptrdiff_t>(n_train));
  const auto static_alloc = static_cast<std::int64_t>(std::ceil(need_peak * (1.0 + p.headroom)));
  const sdi::Allocation& vnf = live.allocate(p.vnf_node, {static_alloc, 0, 0, 0}, p.vnf_owner);
  const std::string vnf_id = vnf.id;

  auto data = std::make_shared<ForecastData>();
  data->traffic = traffic.values;
  data->interval_ms = config.workload.interval * 1000.0;
  data->traffic_min = t_min;
  data->traffic_max = t_max;
  data->fit = fit;
  data->model = trained.model;
  data->capacity = static_cast<double>(p.vnf_capacity_millicores);
  data->headroom = p.headroom;

  control::FunctionRegistry registry = control::FunctionRegistry::with_builtins();
  register_forecasting(registry, data);
  control::Orchestrator orch(live, std::move(registry), config.catalog, {});
  orch.instantiate(config.chains.front());
  orch.run(static_cast<std::int64_t>(std::llround(static_cast<double>(n) * data->interval_ms)));

  // Allocation in force at each sample: the last change strictly before it.
  std::vector<double> adaptive(n, static_cast<double>(static_alloc));
  {
    const std::string key = vnf_id + "/vnf.cpu.millicores";
    std::vector<std::pair<std::int64_t, double>> changes;
    for (const control::KnobChange& c : orch.knob_changes()) {
      if (c.knob == key) changes.emplace_back(c.time_ms, c.after);
    }
    std::size_t k = 0;
    double current = static_cast<double>(static_alloc);
    for (std::size_t i = 0; i < n; ++i) {
      const auto t = static_cast<std::int64_t>(std::llround(static_cast<double>(i) * data->interval_ms));
      while (k < changes.size() && changes[k].first < t) current = changes[k++].second;
      adaptive[i] = current;
    }
  }
  std::vector<double> over_adaptive;
  std::vector<double> over_static;
  std::vector<double> alloc_adaptive;
  std::size_t under = 0;
  for (std::size_t i = n_train; i < n; ++i) {
    alloc_adaptive.push_back(adaptive[i]);
    over_adaptive.push_back(adaptive[i] - need[i]);
    over_static.push_back(static_cast<double>(static_alloc) - need[i]);
    if (adaptive[i] < need[i]) ++under;
  }

  {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({traffic.timestamps[i], traffic.values[i], traffic_norm[i], cpu_norm[i]});
    }
    write_output(report, out, "traffic.csv",
                 metrics::render_table({"timestamp", "traffic", "traffic_norm", "cpu_norm"}, rows), true);
  }
  write_output(report, out, "forecast.csv",
               metrics::render_table({"origin", "lead", "actual", "forecast", "persistence"}, forecast_rows), true);
  {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({traffic.timestamps[i], traffic.values[i], need[i], adaptive[i], static_cast<double>(static_alloc),
                      i >= n_train ? 1.0 : 0.0});
    }
    write_output(report, out, "provisioning.csv",
                 metrics::render_table({"timestamp", "traffic", "need", "adaptive", "static", "held_out"}, rows), true);
  }
  write_output(report, out, "model.json", ai::render_recurrent(trained.model, config.train), false);
  {
    std::vector<std::vector<double>> rows{{0.0, trained.initial_loss}};
    for (std::size_t e = 0; e < trained.loss_history.size(); ++e) {
      rows.push_back({static_cast<double>(e + 1), trained.loss_history[e]});
    }
    write_output(report, out, "loss.csv", metrics::render_table({"epoch", "loss"}, rows), true);
  }
  write_output(report, out, "trace.csv", orch.trace_csv(), true);
  write_output(report, out, "fcaps.csv", orch.fcaps_csv(), true);

  const auto& s = orch.summary();
  const double adaptive_mean = mean(alloc_adaptive);
  report.add_metric("samples", static_cast<double>(n));
  report.add_metric("held_out_samples", static_cast<double>(n - n_train));
  report.add_metric("planted_slope", p.planted_slope);
  report.add_metric("planted_intercept", p.planted_intercept);
  report.add_metric("fit_slope", fit.slope);
  report.add_metric("fit_intercept", fit.intercept);
  report.add_metric("fit_slope_relative_error", slope_error);
  report.add_metric("fit_mse", fit.fit_mse);
  report.add_metric("predictor_mse", mse_model);
  report.add_metric("persistence_mse", mse_persist);
  report.add_metric("predictor_persistence_ratio", ratio);
  report.add_metric("static_millicores", static_cast<double>(static_alloc));
  report.add_metric("adaptive_mean_millicores", adaptive_mean);
  report.add_metric("adaptive_mean_overprovision", mean(over_adaptive));
  report.add_metric("static_mean_overprovision", mean(over_static));
  report.add_metric("adaptive_underprovisioned_fraction",
                    static_cast<double>(under) / static_cast<double>(n - n_train));
  report.add_metric("loop_ticks", static_cast<double>(s.ticks));
  report.add_metric("loop_faults", static_cast<double>(s.faults));
  report.add_metric("knob_writes", static_cast<double>(s.applied));
  report.add_metric("invariant_checks", static_cast<double>(s.invariant_checks));
  report.add_metric("invariant_failures", static_cast<double>(s.invariant_failures));

  report.check("fit_slope_relative_error", slope_error, "<", kSlopeTolerance);
  report.check("fit_mse", fit.fit_mse, "<", kFitMseBound);
  report.check("predictor_persistence_ratio", ratio, "<", kPredictorRatioBound);
  report.check("adaptive_mean_millicores", adaptive_mean, "<", static_cast<double>(static_alloc));
  report.check("invariant_failures", static_cast<double>(s.invariant_failures), "==", 0.0);
  return report;
}

}  // namespace aiaas::harness
