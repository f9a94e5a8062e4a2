#include "graphsum/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "graphsum/errors.hpp"

namespace graphsum {

using nlohmann::json;

std::size_t RunConfig::resolve_latent_dim(std::size_t input_dim) const {
  if (latent_dim != 0) {
    return latent_dim;
  }
  return input_dim <= 300 ? 128 : 256;
}

void RunConfig::validate() const {
  if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0) {
    throw ValidationError("config: alpha and beta must lie in [0,1]");
  }
  if (std::fabs(alpha + beta - 1.0) > 1e-9) {
    throw ValidationError("config: alpha + beta must equal 1");
  }
  if (margin <= 0.0) {
    throw ValidationError("config: margin must be positive");
  }
  if (lr_phase1 <= 0.0 || lr_phase2 <= 0.0) {
    throw ValidationError("config: learning rates must be positive");
  }
  if (epochs_phase1 < 1 || epochs_phase1 > 40 || epochs_phase2 < 1 || epochs_phase2 > 40) {
    throw ValidationError("config: epochs must lie in [1,40] per phase");
  }
  if (clusters < 1) {
    throw ValidationError("config: cluster count must be at least 1");
  }
  if (min_edge_weight < 0.0 || min_edge_weight > 1.0) {
    throw ValidationError("config: min_edge_weight must lie in [0,1]");
  }
}

std::string decoder_kind_name(DecoderKind kind) {
  return kind == DecoderKind::InnerProduct ? "inner_product" : "gcn";
}

DecoderKind decoder_kind_from_name(const std::string& name) {
  if (name == "inner_product") {
    return DecoderKind::InnerProduct;
  }
  if (name == "gcn") {
    return DecoderKind::Gcn;
  }
  throw ValidationError("config: unknown decoder kind '" + name +
                        "' (expected inner_product or gcn)");
}

std::string rel_norm_name(RelNorm norm) {
  return norm == RelNorm::Softmax ? "softmax" : "ratio";
}

RelNorm rel_norm_from_name(const std::string& name) {
  if (name == "softmax") {
    return RelNorm::Softmax;
  }
  if (name == "ratio") {
    return RelNorm::Ratio;
  }
  throw ValidationError("config: unknown normalization '" + name +
                        "' (expected softmax or ratio)");
}

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) {
    throw ValidationError("config: top level must be a JSON object");
  }
  RunConfig cfg;
  auto get_size = [&](const char* key, std::size_t& target) {
    if (j.contains(key)) target = j.at(key).get<std::size_t>();
  };
  auto get_double = [&](const char* key, double& target) {
    if (j.contains(key)) target = j.at(key).get<double>();
  };
  auto get_bool = [&](const char* key, bool& target) {
    if (j.contains(key)) target = j.at(key).get<bool>();
  };
  try {
    get_size("latent_dim", cfg.latent_dim);
    get_size("attention_dim", cfg.attention_dim);
    get_size("clusters", cfg.clusters);
    get_size("top_k", cfg.top_k);
    get_double("alpha", cfg.alpha);
    get_double("beta", cfg.beta);
    get_double("margin", cfg.margin);
    get_double("lr_phase1", cfg.lr_phase1);
    get_double("lr_phase2", cfg.lr_phase2);
    get_size("epochs_phase1", cfg.epochs_phase1);
    get_size("epochs_phase2", cfg.epochs_phase2);
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("decoder")) {
      cfg.decoder = decoder_kind_from_name(j.at("decoder").get<std::string>());
    }
    if (j.contains("normalization")) {
      cfg.normalization = rel_norm_from_name(j.at("normalization").get<std::string>());
    }
    get_bool("no_clustering", cfg.no_clustering);
    get_bool("no_position", cfg.no_position);
    get_bool("no_gae_sent", cfg.no_gae_sent);
    get_bool("no_gae_doc", cfg.no_gae_doc);
    get_double("min_edge_weight", cfg.min_edge_weight);
    get_size("negatives", cfg.negatives);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  for (const auto& [key, value] : j.items()) {
    static const std::set<std::string> known = {
        "latent_dim",    "attention_dim", "clusters",      "top_k",         "alpha",
        "beta",          "margin",        "lr_phase1",     "lr_phase2",     "epochs_phase1",
        "epochs_phase2", "seed",          "decoder",       "normalization", "no_clustering",
        "no_position",   "no_gae_sent",   "no_gae_doc",    "min_edge_weight", "negatives"};
    if (known.find(key) == known.end()) {
      throw ValidationError("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open config file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["latent_dim"] = cfg.latent_dim;
  j["attention_dim"] = cfg.attention_dim;
  j["clusters"] = cfg.clusters;
  j["top_k"] = cfg.top_k;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["margin"] = cfg.margin;
  j["lr_phase1"] = cfg.lr_phase1;
  j["lr_phase2"] = cfg.lr_phase2;
  j["epochs_phase1"] = cfg.epochs_phase1;
  j["epochs_phase2"] = cfg.epochs_phase2;
  j["seed"] = cfg.seed;
  j["decoder"] = decoder_kind_name(cfg.decoder);
  j["normalization"] = rel_norm_name(cfg.normalization);
  j["no_clustering"] = cfg.no_clustering;
  j["no_position"] = cfg.no_position;
  j["no_gae_sent"] = cfg.no_gae_sent;
  j["no_gae_doc"] = cfg.no_gae_doc;
  j["min_edge_weight"] = cfg.min_edge_weight;
  j["negatives"] = cfg.negatives;
  return j.dump(2);
}

}  // namespace graphsum
