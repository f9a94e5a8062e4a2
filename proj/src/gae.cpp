#include "graphsum/gae.hpp"

#include <cmath>
#include <string>

#include "graphsum/errors.hpp"

namespace graphsum {

GaeParams GaeParams::init(std::size_t input_dim, std::size_t latent_dim, DecoderKind kind,
                          Rng& rng) {
  GaeParams p;
  p.decoder = kind;
  p.encoder_weight = ParamTensor("gae.encoder_weight", glorot_uniform(input_dim, latent_dim, rng));
  if (kind == DecoderKind::Gcn) {
    p.decoder_weight =
        ParamTensor("gae.decoder_weight", glorot_uniform(latent_dim, latent_dim, rng));
  }
  return p;
}

std::vector<ParamTensor*> GaeParams::tensors() {
  std::vector<ParamTensor*> out{&encoder_weight};
  if (decoder_weight) {
    out.push_back(&*decoder_weight);
  }
  return out;
}

std::vector<const ParamTensor*> GaeParams::tensors() const {
  std::vector<const ParamTensor*> out{&encoder_weight};
  if (decoder_weight) {
    out.push_back(&*decoder_weight);
  }
  return out;
}

namespace {

void check_encode_shapes(const WeightedGraph& g, const Matrix& features, const GaeParams& p) {
  if (features.rows() != g.n) {
    throw DimensionError("encode: feature rows (" + std::to_string(features.rows()) +
                         ") disagree with graph size (" + std::to_string(g.n) + ")");
  }
  if (features.cols() != p.encoder_weight.rows()) {
    throw DimensionError("encode: feature columns (" + std::to_string(features.cols()) +
                         ") disagree with encoder weight (" + p.encoder_weight.value.shape_str() +
                         ")");
  }
}

}  // namespace

Matrix encode(const WeightedGraph& g, const Matrix& features, const GaeParams& p) {
  check_encode_shapes(g, features, p);
  return activate(matmul(matmul(g.normalized, features), p.encoder_weight.value),
                  Activation::Tanh);
}

Matrix decode(const Matrix& latent, const WeightedGraph& g, const GaeParams& p) {
  if (latent.rows() != g.n) {
    throw DimensionError("decode: latent rows (" + std::to_string(latent.rows()) +
                         ") disagree with graph size (" + std::to_string(g.n) + ")");
  }
  if (p.decoder == DecoderKind::InnerProduct) {
    return activate(matmul(latent, transpose(latent)), Activation::Sigmoid);
  }
  if (!p.decoder_weight) {
    throw PreconditionError("decode: GCN decoder selected but no decoder weight present");
  }
  if (latent.cols() != p.decoder_weight->rows()) {
    throw DimensionError("decode: latent columns (" + std::to_string(latent.cols()) +
                         ") disagree with decoder weight (" +
                         p.decoder_weight->value.shape_str() + ")");
  }
  const Matrix mapped = matmul(matmul(g.normalized, latent), p.decoder_weight->value);
  Matrix pre = matmul(mapped, transpose(mapped));
  scale_in_place(pre, 1.0 / static_cast<double>(latent.cols()));
  return activate(pre, Activation::Sigmoid);
}

double recon_loss(const Matrix& reconstruction, const Matrix& target) {
  require_same_shape(reconstruction, target, "recon_loss");
  double acc = 0.0;
  for (std::size_t i = 0; i < reconstruction.size(); ++i) {
    const double d = reconstruction.data()[i] - target.data()[i];
    acc += d * d;
  }
  return acc / static_cast<double>(reconstruction.size());
}

Matrix recon_target(const Matrix& adjacency) {
  Matrix t = adjacency;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    t(i, i) = 1.0;
  }
  return t;
}

GaeCache forward_cached(const WeightedGraph& g, const Matrix& features, const GaeParams& p) {
  check_encode_shapes(g, features, p);
  GaeCache cache;
  cache.propagated = matmul(g.normalized, features);
  cache.latent = activate(matmul(cache.propagated, p.encoder_weight.value), Activation::Tanh);
  if (p.decoder == DecoderKind::InnerProduct) {
    cache.reconstruction =
        activate(matmul(cache.latent, transpose(cache.latent)), Activation::Sigmoid);
  } else {
    cache.decode_hidden = matmul(g.normalized, cache.latent);
    cache.decode_map = matmul(cache.decode_hidden, p.decoder_weight->value);
    Matrix pre = matmul(cache.decode_map, transpose(cache.decode_map));
    scale_in_place(pre, 1.0 / static_cast<double>(cache.latent.cols()));
    cache.reconstruction = activate(pre, Activation::Sigmoid);
  }
  return cache;
}

Matrix recon_loss_backward(const Matrix& reconstruction, const Matrix& target) {
  require_same_shape(reconstruction, target, "recon_loss_backward");
  Matrix d = sub(reconstruction, target);
  scale_in_place(d, 2.0 / static_cast<double>(reconstruction.size()));
  return d;
}

Matrix decode_backward(const GaeCache& cache, const WeightedGraph& g, const Matrix& d_recon,
                       GaeParams& p) {
  // dPre = dA_hat * sigmoid'(pre), with sigmoid' expressed via the output.
  Matrix d_pre = hadamard(d_recon, activate_grad_from_output(cache.reconstruction,
                                                             Activation::Sigmoid));
  if (p.decoder == DecoderKind::InnerProduct) {
    // pre = Z Z^T  =>  dZ = (dPre + dPre^T) Z
    return matmul(add(d_pre, transpose(d_pre)), cache.latent);
  }
  // pre = M M^T / latent_dim with M = normalized * Z * W_dec
  const double inv_dim = 1.0 / static_cast<double>(cache.latent.cols());
  Matrix d_map = matmul(add(d_pre, transpose(d_pre)), cache.decode_map);
  scale_in_place(d_map, inv_dim);
  add_in_place(p.decoder_weight->grad, matmul_grad_rhs(cache.decode_hidden, d_map));
  const Matrix d_hidden = matmul_grad_lhs(d_map, p.decoder_weight->value);
  // normalized is symmetric, so propagating the gradient reuses it directly.
  return matmul(g.normalized, d_hidden);
}

void encode_backward(const GaeCache& cache, const Matrix& d_latent, GaeParams& p) {
  const Matrix d_pre =
      hadamard(d_latent, activate_grad_from_output(cache.latent, Activation::Tanh));
  add_in_place(p.encoder_weight.grad, matmul_grad_rhs(cache.propagated, d_pre));
}

GaeTrainResult train_gae(const WeightedGraph& g, const Matrix& features,
                         const GaeTrainConfig& cfg) {
  if (cfg.epochs < 1) {
    throw PreconditionError("train_gae: epochs must be at least 1");
  }
  Rng rng(cfg.seed);
  GaeTrainResult result;
  result.params = GaeParams::init(features.cols(), cfg.latent_dim, cfg.decoder, rng);
  const Matrix target = recon_target(g.adjacency);
  AdamConfig adam;
  adam.lr = cfg.lr;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    GaeCache cache = forward_cached(g, features, result.params);
    const double loss = recon_loss(cache.reconstruction, target);
    if (!std::isfinite(loss)) {
      throw NumericError("train_gae: non-finite loss at epoch " + std::to_string(epoch));
    }
    result.loss_trace.push_back(loss);

    const Matrix d_recon = recon_loss_backward(cache.reconstruction, target);
    const Matrix d_latent = decode_backward(cache, g, d_recon, result.params);
    encode_backward(cache, d_latent, result.params);
    for (ParamTensor* p : result.params.tensors()) {
      adam_step(*p, adam);
    }
  }

  result.output.latent = encode(g, features, result.params);
  result.output.reconstruction = decode(result.output.latent, g, result.params);
  result.output.recon_loss = recon_loss(result.output.reconstruction, target);
  return result;
}

}  // namespace graphsum
