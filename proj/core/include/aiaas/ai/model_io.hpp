#pragma once

// Model files are JSON text:
//
//   {
//     "format": "aiaas-model",
//     "version": 1,
//     "kind": "autoencoder" | "recurrent",
//     "train_config": {"learning_rate", "epochs", "batch_size", "seed",
//                      "optimizer", "shuffle", "beta1", "beta2", "epsilon"},
//     // autoencoder
//     "bottleneck_index": 3,
//     "layers": [{"inputs", "outputs", "activation",
//                 "weights": [row-major, outputs*inputs values],
//                 "bias": [outputs values]}, ...],
//     // recurrent
//     "hidden_size", "window", "horizon", "series_min", "series_max",
//     "gate_weights", "gate_bias", "readout_weights", "readout_bias"
//   }
//
// Doubles are written with shortest round-trip precision, so a load after a
// save reproduces every weight bit-for-bit.

#include <filesystem>
#include <string>

#include "aiaas/ai/autoencoder.hpp"
#include "aiaas/ai/lstm.hpp"
#include "aiaas/ai/optimizer.hpp"

namespace aiaas::ai {

inline constexpr int kModelFormatVersion = 1;

std::string render_autoencoder(const Autoencoder& model, const TrainConfig& config);
std::string render_recurrent(const RecurrentModel& model, const TrainConfig& config);

/// Throws ParseError on malformed text, ValidationError on a wrong kind,
/// unsupported version, or inconsistent dimensions.
Autoencoder parse_autoencoder(const std::string& text, TrainConfig* config = nullptr);
RecurrentModel parse_recurrent(const std::string& text, TrainConfig* config = nullptr);

void save_autoencoder(const std::filesystem::path& path, const Autoencoder& model, const TrainConfig& config);
Autoencoder load_autoencoder(const std::filesystem::path& path, TrainConfig* config = nullptr);
void save_recurrent(const std::filesystem::path& path, const RecurrentModel& model, const TrainConfig& config);
RecurrentModel load_recurrent(const std::filesystem::path& path, TrainConfig* config = nullptr);

}  // namespace aiaas::ai
