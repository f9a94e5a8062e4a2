#ifndef GRAPHSUM_CONFIG_HPP
#define GRAPHSUM_CONFIG_HPP

#include <cstdint>
#include <string>

#include "graphsum/gae.hpp"
#include "graphsum/summarizer.hpp"

namespace graphsum {

/// Every run-level knob of the pipeline, with its default. `latent_dim` and
/// `attention_dim` accept 0 for "derive from the input": 128 latent units
/// for inputs up to 300 dimensions and 256 above, attention matching the
/// representation width.
struct RunConfig {
  std::size_t latent_dim = 0;
  std::size_t attention_dim = 0;
  std::size_t clusters = 3;   // M
  std::size_t top_k = 0;      // K; 0 follows the cluster count
  double alpha = 0.6;
  double beta = 0.4;
  double margin = 1.0;
  double lr_phase1 = 1e-3;
  double lr_phase2 = 5e-4;
  std::size_t epochs_phase1 = 40;
  std::size_t epochs_phase2 = 40;
  std::uint64_t seed = 1;
  DecoderKind decoder = DecoderKind::InnerProduct;
  RelNorm normalization = RelNorm::Softmax;
  bool no_clustering = false;
  bool no_position = false;
  bool no_gae_sent = false;
  bool no_gae_doc = false;
  double min_edge_weight = 0.0;
  std::size_t negatives = 4;

  /// Resolved latent width for a given input dimension.
  std::size_t resolve_latent_dim(std::size_t input_dim) const;
  std::size_t resolve_top_k() const { return top_k == 0 ? clusters : top_k; }

  /// Throws ValidationError on out-of-range values (alpha+beta must be 1,
  /// epochs in [1,40], positive rates, positive margin).
  void validate() const;
};

RunConfig config_from_json_file(const std::string& path);
RunConfig config_from_json_text(const std::string& text);
std::string config_to_json(const RunConfig& cfg);

std::string decoder_kind_name(DecoderKind kind);
DecoderKind decoder_kind_from_name(const std::string& name);
std::string rel_norm_name(RelNorm norm);
RelNorm rel_norm_from_name(const std::string& name);

}  // namespace graphsum

#endif  // GRAPHSUM_CONFIG_HPP
