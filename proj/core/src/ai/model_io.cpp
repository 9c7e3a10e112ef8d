#include "aiaas/ai/model_io.hpp"

#include <string>
#include <vector>

#include "ai/model_json.hpp"
#include "aiaas/common/error.hpp"

namespace aiaas::ai {

namespace detail {

using aiaas::detail::Json;
using aiaas::detail::get_or;

Json train_config_to_json(const TrainConfig& c) {
  return Json{{"learning_rate", c.learning_rate}, {"epochs", c.epochs},
              {"batch_size", c.batch_size},       {"seed", c.seed},
              {"optimizer", to_string(c.optimizer)}, {"shuffle", c.shuffle},
              {"beta1", c.beta1},                 {"beta2", c.beta2},
              {"epsilon", c.epsilon}};
}

TrainConfig train_config_from_json(const Json& j, TrainConfig base) {
  if (!j.is_object()) throw ValidationError("train config: expected an object");
  TrainConfig c = base;
  c.learning_rate = get_or(j, "learning_rate", c.learning_rate);
  c.epochs = get_or(j, "epochs", c.epochs);
  c.batch_size = get_or(j, "batch_size", c.batch_size);
  c.seed = get_or(j, "seed", c.seed);
  c.optimizer = parse_optimizer(get_or<std::string>(j, "optimizer", std::string(to_string(c.optimizer))));
  c.shuffle = get_or(j, "shuffle", c.shuffle);
  c.beta1 = get_or(j, "beta1", c.beta1);
  c.beta2 = get_or(j, "beta2", c.beta2);
  c.epsilon = get_or(j, "epsilon", c.epsilon);
  c.validate();
  return c;
}

}  // namespace detail

namespace {

using aiaas::detail::Json;
using aiaas::detail::get_required;

Json row_major(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::MatrixXd matrix_from(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  const auto values = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(values.size()) != rows * cols) {
    throw ValidationError(what + ": expected " + std::to_string(rows * cols) + " values, got " +
                          std::to_string(values.size()));
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = values[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

Eigen::VectorXd vector_from(const Json& j, Eigen::Index n, const std::string& what) {
  return matrix_from(j, n, 1, what).col(0);
}

Json header(const char* kind, const TrainConfig& config) {
  return Json{{"format", "aiaas-model"},
              {"version", kModelFormatVersion},
              {"kind", kind},
              {"train_config", detail::train_config_to_json(config)}};
}

Json open_container(const std::string& text, const char* kind, TrainConfig* config) {
  const Json j = aiaas::detail::parse_json_text(text, "model");
  if (!j.is_object() || j.value("format", std::string{}) != "aiaas-model") {
    throw ValidationError("model: not an aiaas-model document");
  }
  const int version = get_required<int>(j, "version", "model");
  if (version != kModelFormatVersion) {
    throw ValidationError("model: unsupported format version " + std::to_string(version));
  }
  const auto actual = get_required<std::string>(j, "kind", "model");
  if (actual != kind) throw ValidationError("model: expected kind '" + std::string(kind) + "', got '" + actual + "'");
  if (config != nullptr) *config = detail::train_config_from_json(get_required<Json>(j, "train_config", "model"));
  return j;
}

template <typename F>
auto wrap_json_errors(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model: ") + e.what());
  }
}

}  // namespace

std::string render_autoencoder(const Autoencoder& model, const TrainConfig& config) {
  Json j = header("autoencoder", config);
  j["bottleneck_index"] = model.bottleneck_index();
  Json layers = Json::array();
  for (const DenseLayer& layer : model.net().layers()) {
    layers.push_back(Json{{"inputs", layer.inputs()},
                          {"outputs", layer.outputs()},
                          {"activation", to_string(layer.activation)},
                          {"weights", row_major(layer.weights)},
                          {"bias", vector_json(layer.bias)}});
  }
  j["layers"] = std::move(layers);
  return aiaas::detail::dump_canonical(j);
}

Autoencoder parse_autoencoder(const std::string& text, TrainConfig* config) {
  return wrap_json_errors([&] {
    const Json j = open_container(text, "autoencoder", config);
    std::vector<DenseLayer> layers;
    const Json& arr = get_required<Json>(j, "layers", "model");
    for (std::size_t l = 0; l < arr.size(); ++l) {
      const Json& lj = arr[l];
      const std::string ctx = "layer " + std::to_string(l);
      DenseLayer layer;
      const auto in = get_required<Eigen::Index>(lj, "inputs", ctx);
      const auto out = get_required<Eigen::Index>(lj, "outputs", ctx);
      if (in < 1 || out < 1) throw ValidationError(ctx + ": widths must be >= 1");
      layer.activation = parse_activation(get_required<std::string>(lj, "activation", ctx));
      layer.weights = matrix_from(get_required<Json>(lj, "weights", ctx), out, in, ctx + " weights");
      layer.bias = vector_from(get_required<Json>(lj, "bias", ctx), out, ctx + " bias");
      layers.push_back(std::move(layer));
    }
    return Autoencoder(DenseNet(std::move(layers)), get_required<std::size_t>(j, "bottleneck_index", "model"));
  });
}

std::string render_recurrent(const RecurrentModel& model, const TrainConfig& config) {
  model.validate();
  Json j = header("recurrent", config);
  j["hidden_size"] = model.hidden_size;
  j["window"] = model.window;
  j["horizon"] = model.horizon;
  j["series_min"] = model.series_min;
  j["series_max"] = model.series_max;
  j["gate_weights"] = row_major(model.gate_weights);
  j["gate_bias"] = vector_json(model.gate_bias);
  j["readout_weights"] = row_major(model.readout_weights);
  j["readout_bias"] = vector_json(model.readout_bias);
  return aiaas::detail::dump_canonical(j);
}

RecurrentModel parse_recurrent(const std::string& text, TrainConfig* config) {
  return wrap_json_errors([&] {
    const Json j = open_container(text, "recurrent", config);
    RecurrentModel m;
    m.hidden_size = get_required<Eigen::Index>(j, "hidden_size", "model");
    m.window = get_required<std::size_t>(j, "window", "model");
    m.horizon = get_required<std::size_t>(j, "horizon", "model");
    if (m.hidden_size < 1 || m.window < 1 || m.horizon < 1) {
      throw ValidationError("model: hidden_size, window and horizon must be >= 1");
    }
    m.series_min = get_required<double>(j, "series_min", "model");
    m.series_max = get_required<double>(j, "series_max", "model");
    const Eigen::Index H = m.hidden_size;
    const auto hz = static_cast<Eigen::Index>(m.horizon);
    m.gate_weights = matrix_from(get_required<Json>(j, "gate_weights", "model"), 4 * H, 1 + H, "gate_weights");
    m.gate_bias = vector_from(get_required<Json>(j, "gate_bias", "model"), 4 * H, "gate_bias");
    m.readout_weights =
        matrix_from(get_required<Json>(j, "readout_weights", "model"), hz, H, "readout_weights");
    m.readout_bias = vector_from(get_required<Json>(j, "readout_bias", "model"), hz, "readout_bias");
    m.validate();
    return m;
  });
}

void save_autoencoder(const std::filesystem::path& path, const Autoencoder& model, const TrainConfig& config) {
  aiaas::detail::write_text_file(path, render_autoencoder(model, config));
}

Autoencoder load_autoencoder(const std::filesystem::path& path, TrainConfig* config) {
  return parse_autoencoder(aiaas::detail::read_text_file(path), config);
}

void save_recurrent(const std::filesystem::path& path, const RecurrentModel& model, const TrainConfig& config) {
  aiaas::detail::write_text_file(path, render_recurrent(model, config));
}

RecurrentModel load_recurrent(const std::filesystem::path& path, TrainConfig* config) {
  return parse_recurrent(aiaas::detail::read_text_file(path), config);
}

}  // namespace aiaas::ai
