#include "graphsum/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "graphsum/errors.hpp"

namespace graphsum {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const json& j) {
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  std::vector<double> data = j.at("data").get<std::vector<double>>();
  if (data.size() != rows * cols) {
    throw CheckpointError("checkpoint: matrix data length " + std::to_string(data.size()) +
                          " does not match shape " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
  Matrix m(rows, cols);
  m.data() = std::move(data);
  return m;
}

json tensor_to_json(const ParamTensor& t) {
  return json{{"name", t.name},
              {"value", matrix_to_json(t.value)},
              {"moment1", matrix_to_json(t.moment1)},
              {"moment2", matrix_to_json(t.moment2)},
              {"steps", t.steps}};
}

ParamTensor tensor_from_json(const json& j) {
  ParamTensor t(j.at("name").get<std::string>(), matrix_from_json(j.at("value")));
  t.moment1 = matrix_from_json(j.at("moment1"));
  t.moment2 = matrix_from_json(j.at("moment2"));
  t.steps = j.at("steps").get<std::size_t>();
  if (!t.moment1.same_shape(t.value) || !t.moment2.same_shape(t.value)) {
    throw CheckpointError("checkpoint: moment shape mismatch for parameter '" + t.name + "'");
  }
  return t;
}

json gae_to_json(const GaeParams& p) {
  json j;
  j["decoder"] = decoder_kind_name(p.decoder);
  j["encoder_weight"] = tensor_to_json(p.encoder_weight);
  if (p.decoder_weight) {
    j["decoder_weight"] = tensor_to_json(*p.decoder_weight);
  }
  return j;
}

GaeParams gae_from_json(const json& j) {
  GaeParams p;
  p.decoder = decoder_kind_from_name(j.at("decoder").get<std::string>());
  p.encoder_weight = tensor_from_json(j.at("encoder_weight"));
  if (j.contains("decoder_weight")) {
    p.decoder_weight = tensor_from_json(j.at("decoder_weight"));
  }
  if (p.decoder == DecoderKind::Gcn && !p.decoder_weight) {
    throw CheckpointError("checkpoint: GCN decoder without decoder weight");
  }
  return p;
}

json summarizer_to_json(const SummarizerParams& p) {
  json j;
  json tensors = json::array();
  for (const ParamTensor* t : p.tensors()) {
    tensors.push_back(tensor_to_json(*t));
  }
  j["tensors"] = std::move(tensors);
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["margin"] = p.margin;
  return j;
}

SummarizerParams summarizer_from_json(const json& j) {
  SummarizerParams p;
  const auto& tensors = j.at("tensors");
  const std::vector<ParamTensor*> slots = p.tensors();
  if (!tensors.is_array() || tensors.size() != slots.size()) {
    throw CheckpointError("checkpoint: expected " + std::to_string(slots.size()) +
                          " summarizer tensors");
  }
  for (std::size_t i = 0; i < slots.size(); ++i) {
    *slots[i] = tensor_from_json(tensors[i]);
  }
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.margin = j.at("margin").get<double>();
  return p;
}

}  // namespace

std::string model_to_json(const ModelState& model) {
  json j;
  j["format_version"] = kFormatVersion;
  j["config"] = json::parse(config_to_json(model.config));
  j["input_dim"] = model.input_dim;
  j["gae_doc"] = model.gae_doc ? gae_to_json(*model.gae_doc) : json(nullptr);
  j["gae_sent"] = model.gae_sent ? gae_to_json(*model.gae_sent) : json(nullptr);
  j["summarizer"] = summarizer_to_json(model.summarizer);
  return j.dump();
}

ModelState model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CheckpointError(std::string("checkpoint: unparseable (") + e.what() + ")");
  }
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw CheckpointError("checkpoint: format version " + std::to_string(version) +
                            " not supported (expected " + std::to_string(kFormatVersion) + ")");
    }
    ModelState model;
    model.config = config_from_json_text(j.at("config").dump());
    model.input_dim = j.at("input_dim").get<std::size_t>();
    if (!j.at("gae_doc").is_null()) {
      model.gae_doc = gae_from_json(j.at("gae_doc"));
    }
    if (!j.at("gae_sent").is_null()) {
      model.gae_sent = gae_from_json(j.at("gae_sent"));
    }
    model.summarizer = summarizer_from_json(j.at("summarizer"));
    return model;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("checkpoint: malformed (") + e.what() + ")");
  }
}

void save_model(const std::string& path, const ModelState& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw CheckpointError("checkpoint: cannot open '" + path + "' for writing");
  }
  out << model_to_json(model);
  out << '\n';
  if (!out) {
    throw CheckpointError("checkpoint: write to '" + path + "' failed");
  }
}

ModelState load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CheckpointError("checkpoint: cannot open '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace graphsum
