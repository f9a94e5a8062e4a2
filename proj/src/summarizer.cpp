#include "graphsum/summarizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "graphsum/errors.hpp"

namespace graphsum {

SummarizerParams SummarizerParams::init(std::size_t rep_dim, std::size_t attention_dim,
                                        double alpha, double beta, double margin, Rng& rng) {
  if (attention_dim == 0) {
    attention_dim = rep_dim;
  }
  SummarizerParams p;
  auto mat = [&](const char* name, std::size_t r, std::size_t c) {
    return ParamTensor(name, glorot_uniform(r, c, rng));
  };
  auto bias = [&](const char* name, std::size_t r) {
    return ParamTensor(name, Matrix(r, 1, 0.0));
  };
  p.gru.in_update = mat("gru.in_update", rep_dim, rep_dim);
  p.gru.rec_update = mat("gru.rec_update", rep_dim, rep_dim);
  p.gru.bias_update = bias("gru.bias_update", rep_dim);
  p.gru.in_reset = mat("gru.in_reset", rep_dim, rep_dim);
  p.gru.rec_reset = mat("gru.rec_reset", rep_dim, rep_dim);
  p.gru.bias_reset = bias("gru.bias_reset", rep_dim);
  p.gru.in_cand = mat("gru.in_cand", rep_dim, rep_dim);
  p.gru.rec_cand = mat("gru.rec_cand", rep_dim, rep_dim);
  p.gru.bias_cand = bias("gru.bias_cand", rep_dim);
  p.score_vec = mat("score_vec", attention_dim, 1);
  p.sent_proj = mat("sent_proj", attention_dim, rep_dim);
  p.cluster_proj = mat("cluster_proj", attention_dim, rep_dim);
  p.alpha = alpha;
  p.beta = beta;
  p.margin = margin;
  return p;
}

std::vector<ParamTensor*> SummarizerParams::tensors() {
  return {&gru.in_update, &gru.rec_update, &gru.bias_update,
          &gru.in_reset,  &gru.rec_reset,  &gru.bias_reset,
          &gru.in_cand,   &gru.rec_cand,   &gru.bias_cand,
          &score_vec,     &sent_proj,      &cluster_proj};
}

std::vector<const ParamTensor*> SummarizerParams::tensors() const {
  return {&gru.in_update, &gru.rec_update, &gru.bias_update,
          &gru.in_reset,  &gru.rec_reset,  &gru.bias_reset,
          &gru.in_cand,   &gru.rec_cand,   &gru.bias_cand,
          &score_vec,     &sent_proj,      &cluster_proj};
}

std::vector<double> doc_embedding(const Matrix& sentence_embeddings) {
  if (sentence_embeddings.rows() == 0) {
    throw DegenerateInputError("doc_embedding: empty document");
  }
  std::vector<double> mean(sentence_embeddings.cols(), 0.0);
  for (std::size_t r = 0; r < sentence_embeddings.rows(); ++r) {
    const double* row = sentence_embeddings.row_ptr(r);
    for (std::size_t c = 0; c < sentence_embeddings.cols(); ++c) {
      mean[c] += row[c];
    }
  }
  const double inv = 1.0 / static_cast<double>(sentence_embeddings.rows());
  for (double& v : mean) {
    v *= inv;
  }
  return mean;
}

namespace {

void check_gru_shapes(const Matrix& h_prev, const Matrix& input, const SummarizerParams& p) {
  const std::size_t d = p.gru.in_update.rows();
  if (h_prev.rows() != d || h_prev.cols() != 1 || input.rows() != d || input.cols() != 1) {
    throw DimensionError("gru_step: expected " + std::to_string(d) +
                         "x1 state and input, got state " + h_prev.shape_str() + " and input " +
                         input.shape_str());
  }
}

Matrix gate_preact(const ParamTensor& w_in, const ParamTensor& w_rec, const ParamTensor& b,
                   const Matrix& input, const Matrix& state) {
  Matrix pre = matmul(w_in.value, input);
  add_in_place(pre, matmul(w_rec.value, state));
  add_in_place(pre, b.value);
  return pre;
}

}  // namespace

Matrix gru_step(const Matrix& h_prev, const Matrix& input, const SummarizerParams& p) {
  return gru_step_cached(h_prev, input, p).h_out;
}

GruStepCache gru_step_cached(const Matrix& h_prev, const Matrix& input,
                             const SummarizerParams& p) {
  check_gru_shapes(h_prev, input, p);
  GruStepCache cache;
  cache.input = input;
  cache.h_prev = h_prev;
  cache.update_gate = activate(gate_preact(p.gru.in_update, p.gru.rec_update, p.gru.bias_update,
                                           input, h_prev),
                               Activation::Sigmoid);
  cache.reset_gate = activate(gate_preact(p.gru.in_reset, p.gru.rec_reset, p.gru.bias_reset,
                                          input, h_prev),
                              Activation::Sigmoid);
  const Matrix gated_state = hadamard(cache.reset_gate, h_prev);
  cache.candidate = activate(gate_preact(p.gru.in_cand, p.gru.rec_cand, p.gru.bias_cand, input,
                                         gated_state),
                             Activation::Tanh);
  cache.h_out = Matrix(h_prev.rows(), 1);
  for (std::size_t i = 0; i < h_prev.rows(); ++i) {
    const double z = cache.update_gate(i, 0);
    cache.h_out(i, 0) = (1.0 - z) * h_prev(i, 0) + z * cache.candidate(i, 0);
  }
  return cache;
}

void gru_step_backward(const GruStepCache& cache, const Matrix& d_h_out, SummarizerParams& p,
                       Matrix& d_h_prev, Matrix& d_input) {
  const std::size_t d = cache.h_prev.rows();
  Matrix d_update(d, 1), d_cand(d, 1);
  for (std::size_t i = 0; i < d; ++i) {
    const double g = d_h_out(i, 0);
    const double z = cache.update_gate(i, 0);
    d_update(i, 0) = g * (cache.candidate(i, 0) - cache.h_prev(i, 0));
    d_cand(i, 0) = g * z;
    d_h_prev(i, 0) += g * (1.0 - z);
  }

  // Candidate branch: c = tanh(Wc x + Uc (r.h) + bc)
  const Matrix d_pre_cand = hadamard(d_cand, activate_grad_from_output(cache.candidate,
                                                                       Activation::Tanh));
  const Matrix gated_state = hadamard(cache.reset_gate, cache.h_prev);
  add_in_place(p.gru.in_cand.grad, matmul(d_pre_cand, transpose(cache.input)));
  add_in_place(p.gru.rec_cand.grad, matmul(d_pre_cand, transpose(gated_state)));
  add_in_place(p.gru.bias_cand.grad, d_pre_cand);
  add_in_place(d_input, matmul(transpose(p.gru.in_cand.value), d_pre_cand));
  const Matrix d_gated = matmul(transpose(p.gru.rec_cand.value), d_pre_cand);
  Matrix d_reset(d, 1);
  for (std::size_t i = 0; i < d; ++i) {
    d_reset(i, 0) = d_gated(i, 0) * cache.h_prev(i, 0);
    d_h_prev(i, 0) += d_gated(i, 0) * cache.reset_gate(i, 0);
  }

  // Reset gate: r = sigmoid(Wr x + Ur h + br)
  const Matrix d_pre_reset = hadamard(d_reset, activate_grad_from_output(cache.reset_gate,
                                                                         Activation::Sigmoid));
  add_in_place(p.gru.in_reset.grad, matmul(d_pre_reset, transpose(cache.input)));
  add_in_place(p.gru.rec_reset.grad, matmul(d_pre_reset, transpose(cache.h_prev)));
  add_in_place(p.gru.bias_reset.grad, d_pre_reset);
  add_in_place(d_input, matmul(transpose(p.gru.in_reset.value), d_pre_reset));
  add_in_place(d_h_prev, matmul(transpose(p.gru.rec_reset.value), d_pre_reset));

  // Update gate: z = sigmoid(Wz x + Uz h + bz)
  const Matrix d_pre_update = hadamard(d_update, activate_grad_from_output(cache.update_gate,
                                                                           Activation::Sigmoid));
  add_in_place(p.gru.in_update.grad, matmul(d_pre_update, transpose(cache.input)));
  add_in_place(p.gru.rec_update.grad, matmul(d_pre_update, transpose(cache.h_prev)));
  add_in_place(p.gru.bias_update.grad, d_pre_update);
  add_in_place(d_input, matmul(transpose(p.gru.in_update.value), d_pre_update));
  add_in_place(d_h_prev, matmul(transpose(p.gru.rec_update.value), d_pre_update));
}

namespace {

Matrix latent_row_as_column(const Matrix& latent, std::size_t row) {
  Matrix col(latent.cols(), 1);
  for (std::size_t c = 0; c < latent.cols(); ++c) {
    col(c, 0) = latent(row, c);
  }
  return col;
}

struct ClusterForward {
  std::vector<std::size_t> members;         // ascending document order
  std::vector<GruStepCache> gru_steps;
  Matrix embedding;                         // d x 1, last hidden state
  std::vector<Matrix> head_hidden;          // tanh(W1 z + W2 C) per member
  std::vector<double> raw;                  // relevance before normalization
  std::vector<double> rel;                  // normalized relevance
};

ClusterForward cluster_forward(const Matrix& latent, std::vector<std::size_t> members,
                               const SummarizerParams& p, RelNorm norm) {
  if (members.empty()) {
    throw DegenerateInputError("cluster_embed: empty cluster");
  }
  ClusterForward fwd;
  fwd.members = std::move(members);
  Matrix state(latent.cols(), 1, 0.0);
  for (std::size_t m : fwd.members) {
    fwd.gru_steps.push_back(gru_step_cached(state, latent_row_as_column(latent, m), p));
    state = fwd.gru_steps.back().h_out;
  }
  fwd.embedding = state;

  const Matrix projected_cluster = matmul(p.cluster_proj.value, fwd.embedding);
  fwd.raw.reserve(fwd.members.size());
  for (std::size_t m : fwd.members) {
    Matrix pre = matmul(p.sent_proj.value, latent_row_as_column(latent, m));
    add_in_place(pre, projected_cluster);
    fwd.head_hidden.push_back(activate(pre, Activation::Tanh));
    fwd.raw.push_back(dot(p.score_vec.value, fwd.head_hidden.back()));
  }
  fwd.rel = normalize_relevance(fwd.raw, norm);
  return fwd;
}

// Backward through the relevance head and the GRU fold. d_rel is aligned
// with fwd.members; adds the latent gradient into d_latent rows.
void cluster_backward(const ClusterForward& fwd, const Matrix& latent,
                      const std::vector<double>& d_rel, RelNorm norm, SummarizerParams& p,
                      Matrix& d_latent) {
  const std::size_t m = fwd.members.size();
  // Normalization backward.
  std::vector<double> d_raw(m, 0.0);
  if (norm == RelNorm::Softmax) {
    double inner = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      inner += d_rel[i] * fwd.rel[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
      d_raw[i] = (d_rel[i] - inner) * fwd.rel[i];
    }
  } else {
    // Shifted-ratio rule with the shift treated as constant; the uniform
    // fallback contributes no gradient.
    double shift = 0.0;
    for (double v : fwd.raw) {
      shift = std::min(shift, v);
    }
    double total = 0.0;
    for (double v : fwd.raw) {
      total += v - shift;
    }
    if (total > 1e-12) {
      double inner = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        inner += d_rel[i] * fwd.rel[i];
      }
      for (std::size_t i = 0; i < m; ++i) {
        d_raw[i] = (d_rel[i] - inner) / total;
      }
    }
  }

  // Relevance head backward.
  Matrix d_cluster_embedding(fwd.embedding.rows(), 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (d_raw[i] == 0.0) {
      continue;
    }
    add_in_place(p.score_vec.grad, scale(fwd.head_hidden[i], d_raw[i]));
    Matrix d_pre = hadamard(scale(p.score_vec.value, d_raw[i]),
                            activate_grad_from_output(fwd.head_hidden[i], Activation::Tanh));
    const Matrix z_col = latent_row_as_column(latent, fwd.members[i]);
    add_in_place(p.sent_proj.grad, matmul(d_pre, transpose(z_col)));
    add_in_place(p.cluster_proj.grad, matmul(d_pre, transpose(fwd.embedding)));
    const Matrix d_z = matmul(transpose(p.sent_proj.value), d_pre);
    for (std::size_t c = 0; c < latent.cols(); ++c) {
      d_latent(fwd.members[i], c) += d_z(c, 0);
    }
    add_in_place(d_cluster_embedding, matmul(transpose(p.cluster_proj.value), d_pre));
  }

  // GRU fold backward, last step first.
  Matrix d_state = d_cluster_embedding;
  for (std::size_t step = fwd.gru_steps.size(); step-- > 0;) {
    Matrix d_prev(d_state.rows(), 1, 0.0);
    Matrix d_input(d_state.rows(), 1, 0.0);
    gru_step_backward(fwd.gru_steps[step], d_state, p, d_prev, d_input);
    for (std::size_t c = 0; c < latent.cols(); ++c) {
      d_latent(fwd.members[step], c) += d_input(c, 0);
    }
    d_state = std::move(d_prev);
  }
}

}  // namespace

Matrix cluster_embed(const Matrix& latent, const std::vector<std::size_t>& members,
                     const SummarizerParams& p) {
  if (members.empty()) {
    throw DegenerateInputError("cluster_embed: empty cluster");
  }
  Matrix state(latent.cols(), 1, 0.0);
  for (std::size_t m : members) {
    state = gru_step(state, latent_row_as_column(latent, m), p);
  }
  return state;
}

std::vector<double> normalize_relevance(const std::vector<double>& raw, RelNorm norm) {
  if (raw.empty()) {
    throw DegenerateInputError("normalize_relevance: empty cluster");
  }
  const std::size_t m = raw.size();
  std::vector<double> out(m, 0.0);
  if (norm == RelNorm::Softmax) {
    const double peak = *std::max_element(raw.begin(), raw.end());
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      out[i] = std::exp(raw[i] - peak);
      total += out[i];
    }
    for (double& v : out) {
      v /= total;
    }
    return out;
  }
  double shift = 0.0;
  for (double v : raw) {
    shift = std::min(shift, v);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = raw[i] - shift;
    total += out[i];
  }
  if (total <= 1e-12) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(m));
    return out;
  }
  for (double& v : out) {
    v /= total;
  }
  return out;
}

std::vector<double> relevance_scores(const Matrix& latent, const std::vector<std::size_t>& members,
                                     const Matrix& cluster_embedding, const SummarizerParams& p,
                                     RelNorm norm) {
  if (members.empty()) {
    throw DegenerateInputError("relevance_scores: empty cluster");
  }
  const Matrix projected_cluster = matmul(p.cluster_proj.value, cluster_embedding);
  std::vector<double> raw;
  raw.reserve(members.size());
  for (std::size_t m : members) {
    Matrix pre = matmul(p.sent_proj.value, latent_row_as_column(latent, m));
    add_in_place(pre, projected_cluster);
    raw.push_back(dot(p.score_vec.value, activate(pre, Activation::Tanh)));
  }
  return normalize_relevance(raw, norm);
}

double position_score(std::size_t position, std::size_t doc_len) {
  if (position < 1 || position > doc_len) {
    throw PreconditionError("position_score: position " + std::to_string(position) +
                            " outside document of length " + std::to_string(doc_len));
  }
  const double decayed =
      std::exp(-static_cast<double>(position) / std::cbrt(static_cast<double>(doc_len)));
  return std::max(0.5, decayed);
}

namespace {

std::vector<std::vector<std::size_t>> members_by_cluster(const std::vector<std::size_t>& labels,
                                                         std::size_t cluster_count) {
  std::vector<std::vector<std::size_t>> members(cluster_count);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= cluster_count) {
      throw PreconditionError("cluster label " + std::to_string(labels[i]) +
                              " out of range for " + std::to_string(cluster_count) + " clusters");
    }
    members[labels[i]].push_back(i);  // index order keeps document order
  }
  return members;
}

}  // namespace

std::vector<ScoredSentence> final_scores(const Matrix& latent,
                                         const std::vector<std::size_t>& labels,
                                         std::size_t cluster_count, const SummarizerParams& p,
                                         RelNorm norm) {
  if (labels.size() != latent.rows()) {
    throw DimensionError("final_scores: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(latent.rows()) + " latent rows");
  }
  const std::size_t n = latent.rows();
  std::vector<ScoredSentence> scored(n);
  for (const auto& members : members_by_cluster(labels, cluster_count)) {
    if (members.empty()) {
      continue;
    }
    const Matrix embedding = cluster_embed(latent, members, p);
    const std::vector<double> rel = relevance_scores(latent, members, embedding, p, norm);
    for (std::size_t i = 0; i < members.size(); ++i) {
      const std::size_t idx = members[i];
      ScoredSentence& s = scored[idx];
      s.index = idx;
      s.cluster = labels[idx];
      s.relevance = rel[i];
      s.position = position_score(idx + 1, n);
      s.combined = p.alpha * s.relevance + p.beta * s.position;
    }
  }
  return scored;
}

SummaryResult select_topk(const std::vector<ScoredSentence>& scored, std::size_t k,
                          const std::vector<std::string>& sentences) {
  if (k < 1) {
    throw PreconditionError("select_topk: k must be at least 1");
  }
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scored[a].combined != scored[b].combined) {
      return scored[a].combined > scored[b].combined;
    }
    return scored[a].index < scored[b].index;
  });
  order.resize(std::min(k, scored.size()));
  std::vector<std::size_t> selected;
  selected.reserve(order.size());
  for (std::size_t pos : order) {
    selected.push_back(scored[pos].index);
  }
  std::sort(selected.begin(), selected.end());

  SummaryResult result;
  result.k = k;
  result.selected = std::move(selected);
  result.scores = scored;
  for (std::size_t i = 0; i < result.selected.size(); ++i) {
    if (i > 0) {
      result.text += ' ';
    }
    result.text += sentences.at(result.selected[i]);
  }
  return result;
}

double contrastive_loss(const std::vector<double>& summary_avg,
                        const std::vector<double>& doc_latent,
                        const std::vector<std::vector<double>>& negatives, double margin) {
  if (summary_avg.size() != doc_latent.size()) {
    throw DimensionError("contrastive_loss: summary dimension " +
                         std::to_string(summary_avg.size()) + " vs document dimension " +
                         std::to_string(doc_latent.size()));
  }
  if (margin <= 0.0) {
    throw PreconditionError("contrastive_loss: margin must be positive");
  }
  double positive = 0.0;
  for (std::size_t i = 0; i < summary_avg.size(); ++i) {
    const double d = summary_avg[i] - doc_latent[i];
    positive += d * d;
  }
  double loss = 0.5 * positive;
  if (negatives.empty()) {
    return loss;
  }
  double hinge = 0.0;
  for (const auto& neg : negatives) {
    if (neg.size() != summary_avg.size()) {
      throw DimensionError("contrastive_loss: negative dimension " + std::to_string(neg.size()) +
                           " vs summary dimension " + std::to_string(summary_avg.size()));
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < summary_avg.size(); ++i) {
      const double d = summary_avg[i] - neg[i];
      sq += d * d;
    }
    const double gap = margin - std::sqrt(sq);
    if (gap > 0.0) {
      hinge += 0.5 * gap * gap;
    }
  }
  return loss + hinge / static_cast<double>(negatives.size());
}

std::vector<double> contrastive_loss_backward(const std::vector<double>& summary_avg,
                                              const std::vector<double>& doc_latent,
                                              const std::vector<std::vector<double>>& negatives,
                                              double margin) {
  std::vector<double> grad(summary_avg.size(), 0.0);
  for (std::size_t i = 0; i < summary_avg.size(); ++i) {
    grad[i] = summary_avg[i] - doc_latent[i];
  }
  if (negatives.empty()) {
    return grad;
  }
  const double inv = 1.0 / static_cast<double>(negatives.size());
  for (const auto& neg : negatives) {
    double sq = 0.0;
    for (std::size_t i = 0; i < summary_avg.size(); ++i) {
      const double d = summary_avg[i] - neg[i];
      sq += d * d;
    }
    const double dist = std::sqrt(sq);
    const double gap = margin - dist;
    if (gap <= 0.0 || dist < 1e-12) {
      continue;  // margin satisfied, or coincident point (zero subgradient)
    }
    const double factor = -inv * gap / dist;
    for (std::size_t i = 0; i < summary_avg.size(); ++i) {
      grad[i] += factor * (summary_avg[i] - neg[i]);
    }
  }
  return grad;
}

DocStepOutcome doc_step(const DocInput& doc, GaeParams* gae, SummarizerParams& params,
                        const StepConfig& cfg,
                        const std::vector<std::vector<double>>& negatives, bool accumulate_grads,
                        const std::vector<std::size_t>* frozen_labels,
                        const std::vector<std::size_t>* frozen_selection) {
  const std::size_t n = doc.features.rows();
  if (n == 0) {
    throw DegenerateInputError("doc_step: document '" + doc.id + "' has no sentences");
  }

  DocStepOutcome outcome;

  // Encode. Without an autoencoder the raw features act as the latents.
  GaeCache gae_cache;
  const bool use_gae = gae != nullptr;
  if (use_gae) {
    gae_cache = forward_cached(doc.graph, doc.features, *gae);
    outcome.recon = recon_loss(gae_cache.reconstruction, doc.target);
  }
  const Matrix& latent = use_gae ? gae_cache.latent : doc.features;

  // Cluster on the latents; the assignment is frozen within the step.
  if (frozen_labels != nullptr) {
    outcome.labels = *frozen_labels;
  } else if (cfg.no_clustering || n == 1) {
    outcome.labels.assign(n, 0);
  } else {
    const std::size_t m = std::min(cfg.clusters, n);
    outcome.labels = spectral_cluster(latent, m, doc.cluster_seed).labels;
  }
  const std::size_t cluster_count =
      1 + *std::max_element(outcome.labels.begin(), outcome.labels.end());

  // Score every cluster.
  std::vector<ClusterForward> forwards;
  forwards.reserve(cluster_count);
  std::vector<ScoredSentence> scored(n);
  for (auto& members : members_by_cluster(outcome.labels, cluster_count)) {
    if (members.empty()) {
      forwards.emplace_back();
      continue;
    }
    forwards.push_back(cluster_forward(latent, std::move(members), params, cfg.norm));
    const ClusterForward& fwd = forwards.back();
    for (std::size_t i = 0; i < fwd.members.size(); ++i) {
      const std::size_t idx = fwd.members[i];
      ScoredSentence& s = scored[idx];
      s.index = idx;
      s.cluster = outcome.labels[idx];
      s.relevance = fwd.rel[i];
      s.position = position_score(idx + 1, n);
      s.combined = cfg.alpha * s.relevance + cfg.beta * s.position;
    }
  }

  // Select; the chosen index set is frozen for the rest of the step.
  if (frozen_selection != nullptr) {
    outcome.summary.selected = *frozen_selection;
    outcome.summary.k = frozen_selection->size();
    outcome.summary.scores = scored;
    for (std::size_t i = 0; i < outcome.summary.selected.size(); ++i) {
      if (i > 0) {
        outcome.summary.text += ' ';
      }
      outcome.summary.text += doc.sentences->at(outcome.summary.selected[i]);
    }
  } else {
    outcome.summary = select_topk(scored, cfg.top_k, *doc.sentences);
  }
  const std::vector<std::size_t>& selected = outcome.summary.selected;

  // Relevance-weighted mean of the selected latent rows.
  const std::size_t rep = latent.cols();
  double weight_total = 0.0;
  for (std::size_t idx : selected) {
    weight_total += scored[idx].relevance;
  }
  const bool weights_usable = weight_total > 1e-12;
  std::vector<double> summary_avg(rep, 0.0);
  for (std::size_t idx : selected) {
    const double w = weights_usable
                         ? scored[idx].relevance / weight_total
                         : 1.0 / static_cast<double>(selected.size());
    for (std::size_t c = 0; c < rep; ++c) {
      summary_avg[c] += w * latent(idx, c);
    }
  }

  const bool contrastive_active = !doc.doc_latent.empty();
  if (contrastive_active) {
    outcome.contrastive = contrastive_loss(summary_avg, doc.doc_latent, negatives, cfg.margin);
  }
  outcome.total = outcome.recon + outcome.contrastive;

  if (!accumulate_grads) {
    return outcome;
  }

  Matrix d_latent(n, rep, 0.0);
  std::vector<std::vector<double>> d_rel_by_cluster(cluster_count);
  for (std::size_t c = 0; c < cluster_count; ++c) {
    d_rel_by_cluster[c].assign(forwards[c].members.size(), 0.0);
  }

  if (contrastive_active) {
    const std::vector<double> d_summary =
        contrastive_loss_backward(summary_avg, doc.doc_latent, negatives, cfg.margin);
    for (std::size_t idx : selected) {
      const double w = weights_usable
                           ? scored[idx].relevance / weight_total
                           : 1.0 / static_cast<double>(selected.size());
      // Latent rows receive w * d_summary directly.
      for (std::size_t c = 0; c < rep; ++c) {
        d_latent(idx, c) += w * d_summary[c];
      }
      if (!weights_usable) {
        continue;
      }
      // d/dw_i of (sum w z / sum w) is (z_i - mean) / sum w.
      double d_weight = 0.0;
      for (std::size_t c = 0; c < rep; ++c) {
        d_weight += (latent(idx, c) - summary_avg[c]) * d_summary[c];
      }
      d_weight /= weight_total;
      const std::size_t cl = outcome.labels[idx];
      const auto& members = forwards[cl].members;
      const std::size_t pos =
          std::lower_bound(members.begin(), members.end(), idx) - members.begin();
      d_rel_by_cluster[cl][pos] += d_weight;
    }
    for (std::size_t c = 0; c < cluster_count; ++c) {
      if (forwards[c].members.empty()) {
        continue;
      }
      bool any = false;
      for (double v : d_rel_by_cluster[c]) {
        any = any || v != 0.0;
      }
      if (any) {
        cluster_backward(forwards[c], latent, d_rel_by_cluster[c], cfg.norm, params, d_latent);
      }
    }
  }

  if (use_gae) {
    const Matrix d_recon = recon_loss_backward(gae_cache.reconstruction, doc.target);
    Matrix d_z = decode_backward(gae_cache, doc.graph, d_recon, *gae);
    add_in_place(d_z, d_latent);
    encode_backward(gae_cache, d_z, *gae);
  }
  return outcome;
}

SummaryResult summarize_doc(const DocInput& doc, const GaeParams* gae,
                            const SummarizerParams& params, const StepConfig& cfg) {
  // Gradients are off, so working copies keep the caller's state const.
  SummarizerParams working = params;
  if (gae != nullptr) {
    GaeParams gae_copy = *gae;
    return doc_step(doc, &gae_copy, working, cfg, {}, false).summary;
  }
  return doc_step(doc, nullptr, working, cfg, {}, false).summary;
}

JointTrainResult train_summarizer(const std::vector<DocInput>& docs,
                                  std::optional<GaeParams> gae_sent,
                                  const JointTrainConfig& cfg) {
  if (docs.empty()) {
    throw DegenerateInputError("train_summarizer: empty corpus");
  }
  if (cfg.epochs < 1) {
    throw PreconditionError("train_summarizer: epochs must be at least 1");
  }

  const std::size_t rep_dim =
      gae_sent ? gae_sent->latent_dim() : docs.front().features.cols();
  Rng rng = Rng(cfg.seed).fork(Rng::hash_string("summarizer-init"));
  JointTrainResult result;
  result.params = SummarizerParams::init(rep_dim, cfg.attention_dim, cfg.alpha, cfg.beta,
                                         cfg.margin, rng);
  result.gae = std::move(gae_sent);

  StepConfig step;
  step.clusters = cfg.clusters;
  step.top_k = cfg.top_k;
  step.norm = cfg.norm;
  step.alpha = cfg.alpha;
  step.beta = cfg.beta;
  step.margin = cfg.margin;
  step.no_clustering = cfg.no_clustering;

  AdamConfig adam;
  adam.lr = cfg.lr;

  const std::uint64_t negative_stream = Rng::hash_string("contrastive-negatives");
  double best = std::numeric_limits<double>::infinity();
  SummarizerParams best_params = result.params;
  std::optional<GaeParams> best_gae = result.gae;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    double total = 0.0;
    for (std::size_t di = 0; di < docs.size(); ++di) {
      const DocInput& doc = docs[di];
      std::vector<std::vector<double>> negatives;
      if (!doc.doc_latent.empty() && docs.size() > 1 && cfg.negatives > 0) {
        Rng neg_rng = Rng(cfg.seed).fork(Rng::combine(negative_stream,
                                                      Rng::combine(epoch, di)));
        std::vector<std::size_t> pool;
        pool.reserve(docs.size() - 1);
        for (std::size_t j = 0; j < docs.size(); ++j) {
          if (j != di && !docs[j].doc_latent.empty()) {
            pool.push_back(j);
          }
        }
        const std::size_t want = std::min(cfg.negatives, pool.size());
        for (std::size_t pick = 0; pick < want; ++pick) {
          const std::size_t at = pick + neg_rng.next_index(pool.size() - pick);
          std::swap(pool[pick], pool[at]);
          negatives.push_back(docs[pool[pick]].doc_latent);
        }
      }

      const DocStepOutcome outcome =
          doc_step(doc, result.gae ? &*result.gae : nullptr, result.params, step, negatives,
                   /*accumulate_grads=*/true);
      if (!std::isfinite(outcome.total)) {
        throw NumericError("train_summarizer: non-finite loss for document '" + doc.id +
                           "' at epoch " + std::to_string(epoch));
      }
      total += outcome.total;

      for (ParamTensor* t : result.params.tensors()) {
        adam_step(*t, adam);
      }
      if (result.gae) {
        for (ParamTensor* t : result.gae->tensors()) {
          adam_step(*t, adam);
        }
      }
    }
    result.loss_trace.push_back(total);
    if (total < best) {
      best = total;
      result.best_epoch = epoch;
      best_params = result.params;
      best_gae = result.gae;
    }
  }

  result.params = std::move(best_params);
  result.gae = std::move(best_gae);

  result.summaries.reserve(docs.size());
  for (const DocInput& doc : docs) {
    const DocStepOutcome outcome =
        doc_step(doc, result.gae ? &*result.gae : nullptr, result.params, step, {},
                 /*accumulate_grads=*/false);
    result.summaries.push_back(outcome.summary);
  }
  return result;
}

}  // namespace graphsum
