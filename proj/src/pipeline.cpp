#include "graphsum/pipeline.hpp"

#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "graphsum/errors.hpp"
#include "graphsum/gae.hpp"
#include "graphsum/graph.hpp"

namespace graphsum {

namespace {

using nlohmann::json;

Matrix embeddings_as_matrix(const CorpusRecord& rec) {
  return Matrix::from_rows(rec.embeddings);
}

std::uint64_t cluster_seed_for(const RunConfig& cfg, const std::string& id) {
  return Rng::combine(Rng::combine(cfg.seed, Rng::hash_string("clustering")),
                      Rng::hash_string(id));
}

StepConfig make_step_config(const RunConfig& cfg) {
  StepConfig step;
  step.clusters = cfg.clusters;
  step.top_k = cfg.resolve_top_k();
  step.norm = cfg.normalization;
  step.alpha = cfg.no_position ? 1.0 : cfg.alpha;
  step.beta = cfg.no_position ? 0.0 : cfg.beta;
  step.margin = cfg.margin;
  step.no_clustering = cfg.no_clustering;
  return step;
}

std::vector<DocInput> make_doc_inputs(const std::vector<CorpusRecord>& corpus,
                                      const RunConfig& cfg, bool use_gae) {
  std::vector<DocInput> docs;
  docs.reserve(corpus.size());
  for (const CorpusRecord& rec : corpus) {
    DocInput doc;
    doc.id = rec.id;
    doc.sentences = &rec.sentences;
    doc.features = embeddings_as_matrix(rec);
    if (use_gae) {
      doc.graph = build_adjacency(doc.features, cfg.min_edge_weight);
      doc.target = recon_target(doc.graph.adjacency);
    }
    doc.cluster_seed = cluster_seed_for(cfg, rec.id);
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::optional<MetricsReport> score_against_references(const std::vector<CorpusRecord>& corpus,
                                                      const std::vector<DocSummary>& summaries) {
  MetricsReport report;
  std::vector<RougeScore> scores;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus[i].has_reference) {
      continue;
    }
    DocMetrics m;
    m.id = corpus[i].id;
    m.score = rouge_score(summaries[i].result.text, corpus[i].reference_summary);
    scores.push_back(m.score);
    report.per_document.push_back(std::move(m));
  }
  if (report.per_document.empty()) {
    return std::nullopt;
  }
  report.corpus_mean = mean_scores(scores);
  return report;
}

void ensure_embeddings(std::vector<CorpusRecord>& corpus, std::uint64_t seed) {
  if (!corpus.empty() && !corpus.front().has_embeddings()) {
    fallback_embed(corpus, seed);
  }
}

}  // namespace

PipelineResult run_pipeline(std::vector<CorpusRecord> corpus, const RunConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) {
    throw DegenerateInputError("run_pipeline: no documents in corpus");
  }
  ensure_embeddings(corpus, cfg.seed);

  const std::size_t input_dim = corpus.front().embeddings.front().size();
  const std::size_t latent_dim = cfg.resolve_latent_dim(input_dim);

  PipelineResult result;
  result.model.config = cfg;
  result.model.input_dim = input_dim;

  // Phase 1: document-level representations.
  Matrix doc_features(corpus.size(), input_dim);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::vector<double> mean = doc_embedding(embeddings_as_matrix(corpus[i]));
    for (std::size_t c = 0; c < input_dim; ++c) {
      doc_features(i, c) = mean[c];
    }
  }
  Matrix doc_latent_table;
  if (cfg.no_gae_doc) {
    doc_latent_table = doc_features;
  } else {
    const WeightedGraph doc_graph = build_adjacency(doc_features, cfg.min_edge_weight);
    GaeTrainConfig phase1;
    phase1.latent_dim = latent_dim;
    phase1.decoder = cfg.decoder;
    phase1.lr = cfg.lr_phase1;
    phase1.epochs = cfg.epochs_phase1;
    phase1.seed = Rng::combine(cfg.seed, Rng::hash_string("doc-autoencoder"));
    GaeTrainResult phase1_result = train_gae(doc_graph, doc_features, phase1);
    for (std::size_t e = 0; e < phase1_result.loss_trace.size(); ++e) {
      result.train_log.push_back({1, e, phase1_result.loss_trace[e]});
    }
    doc_latent_table = phase1_result.output.latent;
    result.model.gae_doc = std::move(phase1_result.params);
  }

  // Phase 2 setup. The contrastive term needs the summary embedding and the
  // document latent in one space; when an ablation leaves them with
  // different widths the term is dropped for the run.
  const bool use_gae_sent = !cfg.no_gae_sent;
  const std::size_t rep_dim = use_gae_sent ? latent_dim : input_dim;
  const bool contrastive_active = rep_dim == doc_latent_table.cols();
  if (!contrastive_active) {
    std::cerr << "note: contrastive loss disabled, sentence representation width "
              << rep_dim << " differs from document latent width " << doc_latent_table.cols()
              << "\n";
  }

  std::vector<DocInput> docs = make_doc_inputs(corpus, cfg, use_gae_sent);
  if (contrastive_active) {
    for (std::size_t i = 0; i < docs.size(); ++i) {
      docs[i].doc_latent = doc_latent_table.row_copy(i);
    }
  }

  std::optional<GaeParams> gae_sent;
  if (use_gae_sent) {
    Rng init_rng = Rng(cfg.seed).fork(Rng::hash_string("sent-autoencoder"));
    gae_sent = GaeParams::init(input_dim, latent_dim, cfg.decoder, init_rng);
  }

  JointTrainConfig phase2;
  phase2.lr = cfg.lr_phase2;
  phase2.epochs = cfg.epochs_phase2;
  phase2.clusters = cfg.clusters;
  phase2.top_k = cfg.resolve_top_k();
  phase2.alpha = cfg.no_position ? 1.0 : cfg.alpha;
  phase2.beta = cfg.no_position ? 0.0 : cfg.beta;
  phase2.margin = cfg.margin;
  phase2.norm = cfg.normalization;
  phase2.attention_dim = cfg.attention_dim;
  phase2.negatives = cfg.negatives;
  phase2.seed = cfg.seed;
  phase2.no_clustering = cfg.no_clustering;

  JointTrainResult phase2_result = train_summarizer(docs, std::move(gae_sent), phase2);
  for (std::size_t e = 0; e < phase2_result.loss_trace.size(); ++e) {
    result.train_log.push_back({2, e, phase2_result.loss_trace[e]});
  }

  result.model.gae_sent = std::move(phase2_result.gae);
  result.model.summarizer = std::move(phase2_result.params);

  result.summaries.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    result.summaries.push_back({corpus[i].id, std::move(phase2_result.summaries[i])});
  }
  result.metrics = score_against_references(corpus, result.summaries);
  return result;
}

PipelineResult run_inference(std::vector<CorpusRecord> corpus, const ModelState& model) {
  model.config.validate();
  if (corpus.empty()) {
    throw DegenerateInputError("run_inference: no documents in corpus");
  }
  ensure_embeddings(corpus, model.config.seed);
  const std::size_t input_dim = corpus.front().embeddings.front().size();
  if (input_dim != model.input_dim) {
    throw ValidationError("run_inference: corpus embedding dimension " +
                          std::to_string(input_dim) + " does not match model input dimension " +
                          std::to_string(model.input_dim));
  }

  const bool use_gae_sent = model.gae_sent.has_value();
  const std::vector<DocInput> docs = make_doc_inputs(corpus, model.config, use_gae_sent);
  const StepConfig step = make_step_config(model.config);

  PipelineResult result;
  result.model = model;
  result.summaries.reserve(corpus.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    SummaryResult summary = summarize_doc(
        docs[i], use_gae_sent ? &*model.gae_sent : nullptr, model.summarizer, step);
    result.summaries.push_back({corpus[i].id, std::move(summary)});
  }
  result.metrics = score_against_references(corpus, result.summaries);
  return result;
}

PipelineResult run_lexrank_baseline(std::vector<CorpusRecord> corpus, const RunConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) {
    throw DegenerateInputError("run_lexrank_baseline: no documents in corpus");
  }
  ensure_embeddings(corpus, cfg.seed);

  PipelineResult result;
  result.model.config = cfg;
  result.model.input_dim = corpus.front().embeddings.front().size();
  const std::size_t k = cfg.resolve_top_k();
  for (const CorpusRecord& rec : corpus) {
    SummaryResult summary;
    summary.k = k;
    summary.selected = baseline_lexrank(embeddings_as_matrix(rec), k);
    for (std::size_t i = 0; i < summary.selected.size(); ++i) {
      if (i > 0) {
        summary.text += ' ';
      }
      summary.text += rec.sentences[summary.selected[i]];
    }
    result.summaries.push_back({rec.id, std::move(summary)});
  }
  result.metrics = score_against_references(corpus, result.summaries);
  return result;
}

MetricsReport evaluate_pairs(const std::vector<std::pair<std::string, std::string>>& id_candidate,
                             const std::vector<CorpusRecord>& reference_corpus) {
  std::map<std::string, const CorpusRecord*> by_id;
  for (const CorpusRecord& rec : reference_corpus) {
    by_id[rec.id] = &rec;
  }
  MetricsReport report;
  std::vector<RougeScore> scores;
  for (const auto& [id, candidate] : id_candidate) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw ValidationError("evaluate: no corpus record with id '" + id + "'");
    }
    if (!it->second->has_reference) {
      throw ValidationError("evaluate: record '" + id + "' has no reference summary");
    }
    DocMetrics m;
    m.id = id;
    m.score = rouge_score(candidate, it->second->reference_summary);
    scores.push_back(m.score);
    report.per_document.push_back(std::move(m));
  }
  report.corpus_mean = mean_scores(scores);
  return report;
}

std::string summaries_to_ndjson(const std::vector<DocSummary>& summaries) {
  std::string out;
  for (const DocSummary& doc : summaries) {
    json j;
    j["id"] = doc.id;
    j["selected_indices"] = doc.result.selected;
    j["summary"] = doc.result.text;
    json scores = json::array();
    for (const ScoredSentence& s : doc.result.scores) {
      scores.push_back({{"index", s.index},
                        {"cluster", s.cluster},
                        {"score_rel", s.relevance},
                        {"score_pos", s.position},
                        {"score", s.combined}});
    }
    j["scores"] = std::move(scores);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string metrics_to_json(const MetricsReport& report) {
  json j;
  j["per_document"] = json::array();
  for (const DocMetrics& m : report.per_document) {
    j["per_document"].push_back(
        {{"id", m.id}, {"r1", m.score.r1}, {"r2", m.score.r2}, {"rl", m.score.rl}});
  }
  j["corpus_mean"] = {{"r1", report.corpus_mean.r1},
                      {"r2", report.corpus_mean.r2},
                      {"rl", report.corpus_mean.rl}};
  return j.dump(2);
}

std::string train_log_to_csv(const std::vector<TrainLogRow>& rows) {
  std::string out = "phase,epoch,loss\n";
  for (const TrainLogRow& row : rows) {
    out += std::to_string(row.phase);
    out += ',';
    out += std::to_string(row.epoch);
    out += ',';
    out += json(row.loss).dump();  // shortest round-trip double formatting
    out += '\n';
  }
  return out;
}

}  // namespace graphsum
