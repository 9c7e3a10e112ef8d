#include <cmath>
#include <memory>

#include "aiaas/ai/autoencoder.hpp"
#include "aiaas/ai/error_distribution.hpp"
#include "aiaas/ai/model_io.hpp"
#include "aiaas/common/error.hpp"
#include "aiaas/control/scheduler.hpp"
#include "aiaas/harness/scenarios.hpp"
#include "aiaas/metrics/csv.hpp"
#include "aiaas/metrics/scrape.hpp"
#include "aiaas/sdi/topology_io.hpp"

namespace aiaas::harness {

namespace {

// What the serving loop reads: the scraped frames and the trained model.
struct ServingData {
  metrics::Dataset raw;
  metrics::Dataset normalized;
  metrics::Scaler scaler;
  ai::Autoencoder model;
  std::size_t cpu_column = 0;
  double interval_s = 1.0;
};

std::size_t frame_at(const ServingData& d, std::int64_t now_ms) {
  const auto row = static_cast<std::size_t>(std::llround(static_cast<double>(now_ms) / 1000.0 / d.interval_s));
  if (row >= d.raw.rows()) throw NotFoundError("no frame scraped at t=" + std::to_string(now_ms) + " ms");
  return row;
}

void register_serving(control::FunctionRegistry& registry, std::shared_ptr<const ServingData> data) {
  registry.add("monitor.scrape", [data](const control::StepContext& ctx, control::StepIo& io) {
    const std::size_t row = frame_at(*data, ctx.now_ms);
    io.observations["frame"] = static_cast<double>(row);
    io.observations["cpu"] = data->raw.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(data->cpu_column));
  });
  registry.add("analyze.autoencoder_compress", [data](const control::StepContext& ctx, control::StepIo& io) {
    auto it = io.observations.find("frame");
    if (it == io.observations.end()) throw StateError("analyze.autoencoder_compress: no frame observed");
    const auto row = static_cast<Eigen::Index>(it->second);
    const Eigen::VectorXd x = data->normalized.values.row(row).transpose();
    const Eigen::VectorXd code = data->model.encode(x);
    const Eigen::VectorXd y = data->model.decode(code);
    const auto col = static_cast<Eigen::Index>(data->cpu_column);
    const double real = data->raw.values(row, col);
    const double recon = data->scaler.inverse_value(data->cpu_column, y(col));
    io.analyses.push_back({"frame_mse", (y - x).squaredNorm() / static_cast<double>(x.size()), ctx.now_ms});
    io.analyses.push_back({"code_width", static_cast<double>(code.size()), ctx.now_ms});
    if (std::abs(real) > 0.0) io.analyses.push_back({"cpu_eta", (real - recon) / real, ctx.now_ms});
  });
}

std::string knowledge_csv(const std::deque<control::MklInstance>& instances) {
  std::string out = "instance,time_ms,key,value\n";
  for (const control::MklInstance& inst : instances) {
    for (const control::KnowledgeRecord& r : inst.knowledge()) {
      out += inst.id() + ',' + std::to_string(r.time_ms) + ',' + r.key + ',' + metrics::format_double(r.value) + '\n';
    }
  }
  return out;
}

}  // namespace

RunReport run_compress(const ScenarioConfig& config) {
  RunReport report;
  report.scenario = Scenario::Compress;
  report.seed = config.seed;
  const auto& out = config.output_dir;

  sdi::TopologyState live(sdi::resolve_topology(config.topology));
  const metrics::TimeSeries workload = metrics::generate_workload(config.workload);
  const metrics::MetricCatalog catalog = metrics::MetricCatalog::paper(live.topology(), config.seed);
  const auto cpu_column = catalog.index_of(metrics::kDesignatedCpuMetric);
  if (!cpu_column) throw ValidationError("catalog lacks " + std::string(metrics::kDesignatedCpuMetric));

  metrics::Dataset raw = metrics::scrape_series(live, workload, catalog);
  metrics::split_chronological(raw, config.compress.training_ratio);
  auto [normalized, scaler] = metrics::normalize_minmax(raw);
  ai::Autoencoder model = ai::Autoencoder::init(config.train.seed);
  const ai::TrainResult trained = ai::ae_train(model, normalized.select(metrics::Split::Training), config.train);
  const auto data = std::make_shared<const ServingData>(ServingData{
      std::move(raw), std::move(normalized), std::move(scaler), std::move(model), *cpu_column, config.workload.interval});

  const std::vector<std::size_t> val_rows = data->normalized.rows_in(metrics::Split::Validation);
  const Eigen::MatrixXd val = data->normalized.select(metrics::Split::Validation);
  const Eigen::MatrixXd recon = data->model.reconstruct_rows(val);
  const double val_mse = (recon - val).squaredNorm() / static_cast<double>(val.size());

  const auto col = static_cast<Eigen::Index>(data->cpu_column);
  metrics::TimeSeries real_cpu{std::string(metrics::kDesignatedCpuMetric), {}, {}};
  metrics::TimeSeries recon_cpu = real_cpu;
  for (Eigen::Index r = 0; r < val.rows(); ++r) {
    const double ts = data->raw.timestamps[val_rows[static_cast<std::size_t>(r)]];
    real_cpu.timestamps.push_back(ts);
    recon_cpu.timestamps.push_back(ts);
    real_cpu.values.push_back(data->raw.values(static_cast<Eigen::Index>(val_rows[static_cast<std::size_t>(r)]), col));
    recon_cpu.values.push_back(data->scaler.inverse_value(data->cpu_column, recon(r, col)));
  }
  const ai::ErrorDistributionOptions hist_options;
  const ai::ErrorDistribution dist =
      ai::relative_error_distribution(real_cpu, recon_cpu, config.compress.eta_threshold, hist_options);

  write_output(report, out, "dataset.csv", metrics::render_csv(data->raw), true);
  write_output(report, out, "model.json", ai::render_autoencoder(data->model, config.train), false);
  {
    std::vector<std::vector<double>> rows{{0.0, trained.initial_loss}};
    for (std::size_t e = 0; e < trained.loss_history.size(); ++e) {
      rows.push_back({static_cast<double>(e + 1), trained.loss_history[e]});
    }
    write_output(report, out, "loss.csv", metrics::render_table({"epoch", "loss"}, rows), true);
  }
  {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < real_cpu.size(); ++i) {
      const double real = real_cpu.values[i];
      const double rec = recon_cpu.values[i];
      const double eta = std::abs(real) < hist_options.epsilon ? std::nan("") : (real - rec) / real;
      rows.push_back({real_cpu.timestamps[i], real, rec, eta});
    }
    write_output(report, out, "eta.csv", metrics::render_table({"timestamp", "real", "reconstructed", "eta"}, rows),
                 true);
  }
  {
    std::vector<std::vector<double>> rows;
    const auto& h = dist.histogram;
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      rows.push_back({h.edges[b], h.edges[b + 1], static_cast<double>(h.counts[b])});
    }
    write_output(report, out, "error_histogram.csv", metrics::render_table({"eta_low", "eta_high", "count"}, rows),
                 true);
  }

  // Serve the trained model inside the configured chains.
  control::FunctionRegistry registry = control::FunctionRegistry::with_builtins();
  register_serving(registry, data);
  control::OrchestratorOptions options;
  control::Orchestrator orch(live, std::move(registry), config.catalog, options);
  for (const chain::MklChain& c : config.chains) orch.instantiate(c);
  if (!config.chains.empty()) {
    orch.run(static_cast<std::int64_t>(std::llround(config.workload.duration * 1000.0)));
  }
  write_output(report, out, "knowledge.csv", knowledge_csv(orch.instances()), true);
  write_output(report, out, "trace.csv", orch.trace_csv(), true);
  write_output(report, out, "fcaps.csv", orch.fcaps_csv(), true);

  std::size_t served_eta = 0;
  std::size_t served_below = 0;
  for (const control::MklInstance& inst : orch.instances()) {
    for (const control::KnowledgeRecord& r : inst.knowledge()) {
      if (r.key != "analysis:cpu_eta") continue;
      ++served_eta;
      if (std::abs(r.value) < config.compress.eta_threshold) ++served_below;
    }
  }

  const auto& s = orch.summary();
  report.add_metric("rows", static_cast<double>(data->raw.rows()));
  report.add_metric("width", static_cast<double>(data->raw.width()));
  report.add_metric("training_rows", static_cast<double>(data->raw.rows() - val_rows.size()));
  report.add_metric("validation_rows", static_cast<double>(val_rows.size()));
  report.add_metric("code_width", static_cast<double>(data->model.code_width()));
  report.add_metric("compression_ratio", data->model.compression_ratio());
  report.add_metric("initial_loss", trained.initial_loss);
  report.add_metric("final_loss", trained.loss_history.empty() ? trained.initial_loss : trained.loss_history.back());
  report.add_metric("validation_mse", val_mse);
  report.add_metric("cpu_eta_samples", static_cast<double>(dist.included));
  report.add_metric("cpu_eta_excluded", static_cast<double>(dist.excluded));
  report.add_metric("cpu_fraction_below_threshold", dist.fraction_below);
  report.add_metric("histogram_underflow", static_cast<double>(dist.histogram.underflow));
  report.add_metric("histogram_overflow", static_cast<double>(dist.histogram.overflow));
  report.add_metric("served_ticks", static_cast<double>(s.ticks));
  report.add_metric("served_faults", static_cast<double>(s.faults));
  report.add_metric("served_fraction_below_threshold",
                    served_eta == 0 ? 0.0 : static_cast<double>(served_below) / static_cast<double>(served_eta));
  report.add_metric("invariant_checks", static_cast<double>(s.invariant_checks));
  report.add_metric("invariant_failures", static_cast<double>(s.invariant_failures));

  report.check("cpu_fraction_below_threshold", dist.fraction_below, ">=", kCpuFidelityTarget);
  report.check("compression_ratio", data->model.compression_ratio(), "==",
               static_cast<double>(ai::kCodeWidth) / static_cast<double>(ai::kInputWidth));
  report.check("invariant_failures", static_cast<double>(s.invariant_failures), "==", 0.0);
  return report;
}

}  // namespace aiaas::harness
