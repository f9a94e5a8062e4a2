#ifndef GRAPHSUM_GAE_HPP
#define GRAPHSUM_GAE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "graphsum/graph.hpp"
#include "graphsum/matrix.hpp"
#include "graphsum/optim.hpp"

namespace graphsum {

enum class DecoderKind { InnerProduct, Gcn };

/// Learnable state of one graph autoencoder. `decoder_weight` exists only
/// for the GCN decoder variant.
struct GaeParams {
  ParamTensor encoder_weight;                   // input_dim x latent_dim
  std::optional<ParamTensor> decoder_weight;    // latent_dim x latent_dim
  DecoderKind decoder = DecoderKind::InnerProduct;

  static GaeParams init(std::size_t input_dim, std::size_t latent_dim, DecoderKind kind,
                        Rng& rng);

  std::size_t input_dim() const { return encoder_weight.rows(); }
  std::size_t latent_dim() const { return encoder_weight.cols(); }
  std::vector<ParamTensor*> tensors();
  std::vector<const ParamTensor*> tensors() const;
};

struct GaeOutput {
  Matrix latent;          // n x latent_dim
  Matrix reconstruction;  // n x n, entries in (0,1)
  double recon_loss = 0.0;
};

/// One-layer graph-convolution encoder: latent = tanh(normalized * X * W).
Matrix encode(const WeightedGraph& g, const Matrix& features, const GaeParams& p);

/// Adjacency reconstruction from latents. Inner-product decoder:
/// sigmoid(Z Z^T). GCN decoder: M = normalized * Z * W_dec, then
/// sigmoid(M M^T / latent_dim) so the output is a symmetric n x n map.
Matrix decode(const Matrix& latent, const WeightedGraph& g, const GaeParams& p);

/// Mean squared error over all n^2 entries of two same-shape matrices.
double recon_loss(const Matrix& reconstruction, const Matrix& target);

/// Reconstruction target: the adjacency with unit diagonal (self-similarity).
Matrix recon_target(const Matrix& adjacency);

/// Intermediate values of one encode+decode pass, kept for the backward pass.
struct GaeCache {
  Matrix propagated;      // normalized * X
  Matrix latent;          // Z
  Matrix decode_hidden;   // GCN decoder: normalized * Z
  Matrix decode_map;      // GCN decoder: normalized * Z * W_dec
  Matrix reconstruction;  // A_hat
};

GaeCache forward_cached(const WeightedGraph& g, const Matrix& features, const GaeParams& p);

/// Gradient of mean squared error w.r.t. the reconstruction.
Matrix recon_loss_backward(const Matrix& reconstruction, const Matrix& target);

/// Backward through the decoder; accumulates into decoder_weight.grad when
/// present and returns the gradient w.r.t. the latent matrix.
Matrix decode_backward(const GaeCache& cache, const WeightedGraph& g, const Matrix& d_recon,
                       GaeParams& p);

/// Backward through the encoder; accumulates into encoder_weight.grad.
void encode_backward(const GaeCache& cache, const Matrix& d_latent, GaeParams& p);

struct GaeTrainConfig {
  std::size_t latent_dim = 16;
  DecoderKind decoder = DecoderKind::InnerProduct;
  double lr = 1e-3;
  std::size_t epochs = 40;
  std::uint64_t seed = 1;
};

struct GaeTrainResult {
  GaeParams params;
  GaeOutput output;
  std::vector<double> loss_trace;  // one entry per epoch, pre-update loss
};

/// Full-batch Adam training of a fresh Glorot-initialized autoencoder
/// against the graph's own adjacency (unit diagonal target). Throws
/// NumericError with the epoch index if the loss turns non-finite.
GaeTrainResult train_gae(const WeightedGraph& g, const Matrix& features,
                         const GaeTrainConfig& cfg);

}  // namespace graphsum

#endif  // GRAPHSUM_GAE_HPP
