#pragma once

#include "aiaas/harness/config.hpp"
#include "aiaas/harness/report.hpp"

namespace aiaas::harness {

// Thresholds scored by the scenario checks.
inline constexpr double kCpuFidelityTarget = 0.80;    // fraction of |eta| below the threshold
inline constexpr double kSlopeTolerance = 0.01;       // relative
inline constexpr double kFitMseBound = 1e-5;
inline constexpr double kPredictorRatioBound = 0.8;  // predictor MSE / persistence MSE
inline constexpr double kMinReversalsPer100Ticks = 10.0;

/// Generates the workload, scrapes the 111-wide dataset, trains the
/// autoencoder on the chronological training split and scores the
/// designated cpu metric on the validation split. Configured chains are
/// then run to serve the model on every scraped frame.
///
/// Writes dataset.csv, model.json, loss.csv, eta.csv, error_histogram.csv,
/// knowledge.csv, trace.csv and fcaps.csv. Throws DivergenceError when
/// training diverges.
RunReport run_compress(const ScenarioConfig& config);

/// Firewall VNF whose cpu need is a planted linear function of traffic.
/// Fits the relation, trains the recurrent predictor on the training part
/// of the traffic, then runs the configured chain, which resizes the VNF's
/// cpu knob ahead of the forecast peak. Provisioning is scored on the
/// held-out part against static peak provisioning.
///
/// Writes traffic.csv, forecast.csv, provisioning.csv, model.json,
/// loss.csv, trace.csv and fcaps.csv.
RunReport run_adaptive_vnf(const ScenarioConfig& config);

/// Runs the configured chains against one shared knob twice: with
/// arbitration and sandbox off, then on.
///
/// Writes trace_off.csv, trace_on.csv, knobs_off.csv, knobs_on.csv,
/// fcaps_off.csv and fcaps_on.csv.
RunReport run_conflict_demo(const ScenarioConfig& config);

/// Dispatches on config.scenario, times the run, and writes summary.txt and
/// report.json.
RunReport run_scenario(const ScenarioConfig& config);

}  // namespace aiaas::harness
