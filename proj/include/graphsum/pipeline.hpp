#ifndef GRAPHSUM_PIPELINE_HPP
#define GRAPHSUM_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "graphsum/config.hpp"
#include "graphsum/corpus.hpp"
#include "graphsum/rouge.hpp"
#include "graphsum/summarizer.hpp"

namespace graphsum {

struct DocSummary {
  std::string id;
  SummaryResult result;
};

struct DocMetrics {
  std::string id;
  RougeScore score;
};

struct MetricsReport {
  std::vector<DocMetrics> per_document;
  RougeScore corpus_mean;
};

struct TrainLogRow {
  int phase = 0;
  std::size_t epoch = 0;
  double loss = 0.0;
};

/// Trained parameters plus the effective configuration; everything a later
/// inference run needs.
struct ModelState {
  RunConfig config;
  std::optional<GaeParams> gae_doc;
  std::optional<GaeParams> gae_sent;
  SummarizerParams summarizer;
  std::size_t input_dim = 0;
};

struct PipelineResult {
  std::vector<DocSummary> summaries;
  std::optional<MetricsReport> metrics;  // present when any reference exists
  std::vector<TrainLogRow> train_log;
  ModelState model;
};

/// Full two-phase run: fallback-embed if needed, train the document-level
/// autoencoder, then the joint sentence/summary phase, then score against
/// references when present. Honors every ablation flag in the config.
PipelineResult run_pipeline(std::vector<CorpusRecord> corpus, const RunConfig& cfg);

/// Score a corpus with an already-trained model; no training happens.
PipelineResult run_inference(std::vector<CorpusRecord> corpus, const ModelState& model);

/// LexRank selection over the corpus with the same output shape as the
/// main pipeline (for the `baseline` subcommand).
PipelineResult run_lexrank_baseline(std::vector<CorpusRecord> corpus, const RunConfig& cfg);

/// ROUGE for explicit candidate/reference pairs (the `evaluate` subcommand).
MetricsReport evaluate_pairs(const std::vector<std::pair<std::string, std::string>>& id_candidate,
                             const std::vector<CorpusRecord>& reference_corpus);

std::string summaries_to_ndjson(const std::vector<DocSummary>& summaries);
std::string metrics_to_json(const MetricsReport& report);
std::string train_log_to_csv(const std::vector<TrainLogRow>& rows);

}  // namespace graphsum

#endif  // GRAPHSUM_PIPELINE_HPP
