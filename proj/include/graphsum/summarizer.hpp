#ifndef GRAPHSUM_SUMMARIZER_HPP
#define GRAPHSUM_SUMMARIZER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphsum/clustering.hpp"
#include "graphsum/gae.hpp"
#include "graphsum/graph.hpp"
#include "graphsum/matrix.hpp"
#include "graphsum/optim.hpp"

namespace graphsum {

/// How raw relevance values become per-cluster scores. Softmax is the
/// default; Ratio divides by the cluster sum after shifting negatives up to
/// zero, falling back to uniform when the sum degenerates.
enum class RelNorm { Softmax, Ratio };

struct GruWeights {
  ParamTensor in_update, rec_update, bias_update;
  ParamTensor in_reset, rec_reset, bias_reset;
  ParamTensor in_cand, rec_cand, bias_cand;
};

/// Learnable scoring state: GRU cell for cluster embeddings plus the
/// attention-style relevance head, with the fixed mixing weights and the
/// contrastive margin carried alongside.
struct SummarizerParams {
  GruWeights gru;
  ParamTensor score_vec;     // attention_dim x 1
  ParamTensor sent_proj;     // attention_dim x rep_dim
  ParamTensor cluster_proj;  // attention_dim x rep_dim
  double alpha = 0.6;
  double beta = 0.4;
  double margin = 1.0;

  static SummarizerParams init(std::size_t rep_dim, std::size_t attention_dim, double alpha,
                               double beta, double margin, Rng& rng);

  std::size_t rep_dim() const { return sent_proj.cols(); }
  std::size_t attention_dim() const { return sent_proj.rows(); }
  /// Every trainable tensor in canonical order (GRU gates, then the head).
  std::vector<ParamTensor*> tensors();
  std::vector<const ParamTensor*> tensors() const;
};

/// Arithmetic mean of the rows; the document representation.
std::vector<double> doc_embedding(const Matrix& sentence_embeddings);

/// One GRU step over column vectors:
///   z = sigmoid(Wz x + Uz h + bz), r = sigmoid(Wr x + Ur h + br),
///   c = tanh(Wc x + Uc (r.h) + bc), h' = (1-z).h + z.c
Matrix gru_step(const Matrix& h_prev, const Matrix& input, const SummarizerParams& p);

struct GruStepCache {
  Matrix input, h_prev;
  Matrix update_gate, reset_gate, candidate;  // post-activation z, r, c
  Matrix h_out;
};

GruStepCache gru_step_cached(const Matrix& h_prev, const Matrix& input,
                             const SummarizerParams& p);

/// Accumulates weight gradients and adds this step's contributions into
/// d_h_prev and d_input.
void gru_step_backward(const GruStepCache& cache, const Matrix& d_h_out, SummarizerParams& p,
                       Matrix& d_h_prev, Matrix& d_input);

/// Fold the GRU over the given latent rows (callers supply them in ascending
/// document order) starting from a zero state; returns the last hidden state
/// as a column vector. Throws DegenerateInputError on an empty cluster.
Matrix cluster_embed(const Matrix& latent, const std::vector<std::size_t>& members,
                     const SummarizerParams& p);

/// Raw attention-style relevance of each member against the cluster
/// embedding, normalized into per-cluster scores.
std::vector<double> relevance_scores(const Matrix& latent, const std::vector<std::size_t>& members,
                                     const Matrix& cluster_embedding, const SummarizerParams& p,
                                     RelNorm norm);

std::vector<double> normalize_relevance(const std::vector<double>& raw, RelNorm norm);

/// Position prior max(0.5, exp(-position / cbrt(doc_len))) for a 1-based
/// position. Throws PreconditionError when position is out of [1, doc_len].
double position_score(std::size_t position, std::size_t doc_len);

struct ScoredSentence {
  std::size_t index = 0;  // 0-based position in the document
  double relevance = 0.0;
  double position = 0.0;
  double combined = 0.0;
  std::size_t cluster = 0;
};

struct SummaryResult {
  std::vector<std::size_t> selected;  // ascending document order
  std::size_t k = 0;                  // requested summary length
  std::string text;
  std::vector<ScoredSentence> scores;  // all sentences, document order
};

/// Combined scores alpha*relevance + beta*position for every sentence,
/// given a cluster assignment over the latent rows.
std::vector<ScoredSentence> final_scores(const Matrix& latent,
                                         const std::vector<std::size_t>& labels,
                                         std::size_t cluster_count, const SummarizerParams& p,
                                         RelNorm norm);

/// Top-k by combined score, earlier document position breaking ties,
/// emitted in document order. k greater than the document returns all.
SummaryResult select_topk(const std::vector<ScoredSentence>& scored, std::size_t k,
                          const std::vector<std::string>& sentences);

/// Hinge contrastive loss: 0.5|s - d|^2 plus the mean over negatives of
/// 0.5 max(0, margin - |s - n|)^2.
double contrastive_loss(const std::vector<double>& summary_avg,
                        const std::vector<double>& doc_latent,
                        const std::vector<std::vector<double>>& negatives, double margin);

std::vector<double> contrastive_loss_backward(const std::vector<double>& summary_avg,
                                              const std::vector<double>& doc_latent,
                                              const std::vector<std::vector<double>>& negatives,
                                              double margin);

/// Everything the joint trainer needs to know about one document. The
/// sentence graph and reconstruction target are precomputed because input
/// features never move during phase 2; `doc_latent` is empty when the
/// contrastive term is disabled for this run.
struct DocInput {
  std::string id;
  const std::vector<std::string>* sentences = nullptr;
  Matrix features;
  WeightedGraph graph;
  Matrix target;
  std::vector<double> doc_latent;
  std::uint64_t cluster_seed = 0;
};

struct StepConfig {
  std::size_t clusters = 3;
  std::size_t top_k = 3;
  RelNorm norm = RelNorm::Softmax;
  double alpha = 0.6;
  double beta = 0.4;
  double margin = 1.0;
  bool no_clustering = false;
};

struct DocStepOutcome {
  double recon = 0.0;
  double contrastive = 0.0;
  double total = 0.0;
  SummaryResult summary;
  std::vector<std::size_t> labels;
};

/// One full forward pass over a document (encode, cluster, score, select,
/// losses), optionally accumulating analytic gradients into `params` and
/// `gae`. Pass `gae == nullptr` to score raw features directly (no
/// reconstruction term). `frozen_labels` / `frozen_selection` pin the
/// discrete choices, which the gradient checks rely on.
DocStepOutcome doc_step(const DocInput& doc, GaeParams* gae, SummarizerParams& params,
                        const StepConfig& cfg,
                        const std::vector<std::vector<double>>& negatives, bool accumulate_grads,
                        const std::vector<std::size_t>* frozen_labels = nullptr,
                        const std::vector<std::size_t>* frozen_selection = nullptr);

/// Inference-only scoring of one document with frozen parameters.
SummaryResult summarize_doc(const DocInput& doc, const GaeParams* gae,
                            const SummarizerParams& params, const StepConfig& cfg);

struct JointTrainConfig {
  double lr = 5e-4;
  std::size_t epochs = 40;
  std::size_t clusters = 3;
  std::size_t top_k = 3;
  double alpha = 0.6;
  double beta = 0.4;
  double margin = 1.0;
  RelNorm norm = RelNorm::Softmax;
  std::size_t attention_dim = 0;  // 0: match the representation dimension
  std::size_t negatives = 4;
  std::uint64_t seed = 1;
  bool no_clustering = false;
};

struct JointTrainResult {
  SummarizerParams params;
  std::optional<GaeParams> gae;
  std::vector<SummaryResult> summaries;  // one per document, input order
  std::vector<double> loss_trace;        // total corpus loss per epoch
  std::size_t best_epoch = 0;
};

/// Phase-2 joint training: per epoch and document, run doc_step with
/// gradients and apply one Adam update to the shared autoencoder and the
/// scoring parameters. Keeps a snapshot of the best-loss epoch and returns
/// summaries produced by inference with that snapshot. Negatives are other
/// documents' latents, drawn deterministically from the seed.
JointTrainResult train_summarizer(const std::vector<DocInput>& docs,
                                  std::optional<GaeParams> gae_sent,
                                  const JointTrainConfig& cfg);

}  // namespace graphsum

#endif  // GRAPHSUM_SUMMARIZER_HPP
