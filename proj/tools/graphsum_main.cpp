// Command-line front end: corpus in, summaries/metrics/logs out.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphsum/checkpoint.hpp"
#include "graphsum/config.hpp"
#include "graphsum/corpus.hpp"
#include "graphsum/errors.hpp"
#include "graphsum/pipeline.hpp"

namespace {

using namespace graphsum;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << content;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

// Config file first, then individual flag overrides on top.
struct ConfigCli {
  std::string config_path;
  RunConfig cfg;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its values");
    cmd->add_option("--seed", cfg.seed, "run seed");
    cmd->add_option("--latent-dim", cfg.latent_dim, "latent width (0 = derive from input width)");
    cmd->add_option("--attention-dim", cfg.attention_dim,
                    "relevance head width (0 = representation width)");
    cmd->add_option("--clusters", cfg.clusters, "cluster count M");
    cmd->add_option("--top-k", cfg.top_k, "summary length K (0 = M)");
    cmd->add_option("--alpha", cfg.alpha, "relevance weight");
    cmd->add_option("--beta", cfg.beta, "position weight");
    cmd->add_option("--margin", cfg.margin, "contrastive margin");
    cmd->add_option("--lr-phase1", cfg.lr_phase1, "document autoencoder rate");
    cmd->add_option("--lr-phase2", cfg.lr_phase2, "joint phase rate");
    cmd->add_option("--epochs-phase1", cfg.epochs_phase1, "phase 1 epochs (<=40)");
    cmd->add_option("--epochs-phase2", cfg.epochs_phase2, "phase 2 epochs (<=40)");
    cmd->add_option_function<std::string>(
        "--decoder", [this](const std::string& v) { cfg.decoder = decoder_kind_from_name(v); },
        "decoder kind: inner_product or gcn");
    cmd->add_option_function<std::string>(
        "--normalization",
        [this](const std::string& v) { cfg.normalization = rel_norm_from_name(v); },
        "relevance normalization: softmax or ratio");
    cmd->add_option("--min-edge-weight", cfg.min_edge_weight,
                    "zero out graph edges below this weight");
    cmd->add_option("--negatives", cfg.negatives, "contrastive negatives per step");
    cmd->add_flag("--no-clustering", cfg.no_clustering,
                  "ablation: one cluster spanning the document");
    cmd->add_flag("--no-position", cfg.no_position, "ablation: drop the position score");
    cmd->add_flag("--no-gae-sent", cfg.no_gae_sent,
                  "ablation: score raw embeddings, no sentence autoencoder");
    cmd->add_flag("--no-gae-doc", cfg.no_gae_doc,
                  "ablation: document mean embeddings, no document autoencoder");
  }

  /// Resolve file + flags into the final config. CLI11 has already stored
  /// flag values into a scratch copy; replay them on top of the file values.
  RunConfig resolve(CLI::App* cmd) {
    RunConfig base;
    if (!config_path.empty()) {
      base = config_from_json_file(config_path);
    }
    RunConfig merged = base;
    // Fields whose flag was actually given take the flag value.
    auto given = [&](const char* name) { return cmd->count(name) > 0; };
    if (given("--seed")) merged.seed = cfg.seed;
    if (given("--latent-dim")) merged.latent_dim = cfg.latent_dim;
    if (given("--attention-dim")) merged.attention_dim = cfg.attention_dim;
    if (given("--clusters")) merged.clusters = cfg.clusters;
    if (given("--top-k")) merged.top_k = cfg.top_k;
    if (given("--alpha")) merged.alpha = cfg.alpha;
    if (given("--beta")) merged.beta = cfg.beta;
    if (given("--margin")) merged.margin = cfg.margin;
    if (given("--lr-phase1")) merged.lr_phase1 = cfg.lr_phase1;
    if (given("--lr-phase2")) merged.lr_phase2 = cfg.lr_phase2;
    if (given("--epochs-phase1")) merged.epochs_phase1 = cfg.epochs_phase1;
    if (given("--epochs-phase2")) merged.epochs_phase2 = cfg.epochs_phase2;
    if (given("--decoder")) merged.decoder = cfg.decoder;
    if (given("--normalization")) merged.normalization = cfg.normalization;
    if (given("--min-edge-weight")) merged.min_edge_weight = cfg.min_edge_weight;
    if (given("--negatives")) merged.negatives = cfg.negatives;
    if (given("--no-clustering")) merged.no_clustering = cfg.no_clustering;
    if (given("--no-position")) merged.no_position = cfg.no_position;
    if (given("--no-gae-sent")) merged.no_gae_sent = cfg.no_gae_sent;
    if (given("--no-gae-doc")) merged.no_gae_doc = cfg.no_gae_doc;
    merged.validate();
    return merged;
  }
};

void write_outputs(const PipelineResult& result, const std::string& out_path,
                   const std::string& metrics_path, const std::string& log_path) {
  emit(out_path, summaries_to_ndjson(result.summaries));
  if (!metrics_path.empty()) {
    if (result.metrics) {
      write_file(metrics_path, metrics_to_json(*result.metrics) + "\n");
    } else {
      std::cerr << "note: no reference summaries in corpus, metrics not written\n";
    }
  }
  if (!log_path.empty()) {
    write_file(log_path, train_log_to_csv(result.train_log));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsupervised graph-based extractive summarizer"};
  app.require_subcommand(1);

  // embed
  auto* embed_cmd = app.add_subcommand("embed", "fill in fallback TF-IDF embeddings");
  std::string embed_corpus, embed_out;
  std::uint64_t embed_seed = 1;
  embed_cmd->add_option("--corpus", embed_corpus, "input corpus (NDJSON)")->required();
  embed_cmd->add_option("--out", embed_out, "output corpus path (default stdout)");
  embed_cmd->add_option("--seed", embed_seed, "seed for tokenless-sentence vectors");

  // summarize
  auto* sum_cmd = app.add_subcommand("summarize", "train the model and emit summaries");
  std::string sum_corpus, sum_out, sum_metrics, sum_log, sum_save, sum_load;
  ConfigCli sum_cfg;
  sum_cmd->add_option("--corpus", sum_corpus, "input corpus (NDJSON)")->required();
  sum_cmd->add_option("--out", sum_out, "summaries output path (default stdout)");
  sum_cmd->add_option("--metrics", sum_metrics, "metrics JSON output path");
  sum_cmd->add_option("--train-log", sum_log, "epoch/loss CSV output path");
  sum_cmd->add_option("--save-model", sum_save, "write the trained model checkpoint here");
  sum_cmd->add_option("--load-model", sum_load,
                      "skip training and summarize with this checkpoint");
  sum_cfg.attach(sum_cmd);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "score existing summaries against references");
  std::string eval_candidates, eval_corpus, eval_out;
  eval_cmd->add_option("--candidates", eval_candidates,
                       "NDJSON with id and summary fields")->required();
  eval_cmd->add_option("--corpus", eval_corpus, "corpus with reference summaries")->required();
  eval_cmd->add_option("--out", eval_out, "metrics output path (default stdout)");

  // baseline
  auto* base_cmd = app.add_subcommand("baseline", "LexRank-style selection for comparison");
  std::string base_corpus, base_out, base_metrics;
  ConfigCli base_cfg;
  base_cmd->add_option("--corpus", base_corpus, "input corpus (NDJSON)")->required();
  base_cmd->add_option("--out", base_out, "summaries output path (default stdout)");
  base_cmd->add_option("--metrics", base_metrics, "metrics JSON output path");
  base_cfg.attach(base_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (embed_cmd->parsed()) {
      std::vector<CorpusRecord> corpus = load_corpus(embed_corpus);
      fallback_embed(corpus, embed_seed);
      std::ostringstream out;
      write_corpus(corpus, out);
      emit(embed_out, out.str());
      return 0;
    }

    if (sum_cmd->parsed()) {
      std::vector<CorpusRecord> corpus = load_corpus(sum_corpus);
      PipelineResult result;
      if (!sum_load.empty()) {
        result = run_inference(std::move(corpus), load_model(sum_load));
      } else {
        result = run_pipeline(std::move(corpus), sum_cfg.resolve(sum_cmd));
      }
      write_outputs(result, sum_out, sum_metrics, sum_log);
      if (!sum_save.empty()) {
        save_model(sum_save, result.model);
      }
      return 0;
    }

    if (eval_cmd->parsed()) {
      std::vector<std::pair<std::string, std::string>> pairs;
      {
        std::ifstream in(eval_candidates);
        if (!in) {
          throw ParseError("cannot open candidates file: " + eval_candidates);
        }
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
          ++line_no;
          if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
          }
          nlohmann::json j;
          try {
            j = nlohmann::json::parse(line);
          } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("candidates line " + std::to_string(line_no) + ": " + e.what());
          }
          if (!j.contains("id") || !j.contains("summary")) {
            throw ValidationError("candidates line " + std::to_string(line_no) +
                                  ": needs 'id' and 'summary'");
          }
          pairs.emplace_back(j.at("id").get<std::string>(), j.at("summary").get<std::string>());
        }
      }
      const MetricsReport report = evaluate_pairs(pairs, load_corpus(eval_corpus));
      emit(eval_out, metrics_to_json(report) + "\n");
      return 0;
    }

    if (base_cmd->parsed()) {
      std::vector<CorpusRecord> corpus = load_corpus(base_corpus);
      PipelineResult result = run_lexrank_baseline(std::move(corpus), base_cfg.resolve(base_cmd));
      emit(base_out, summaries_to_ndjson(result.summaries));
      if (!base_metrics.empty()) {
        if (result.metrics) {
          write_file(base_metrics, metrics_to_json(*result.metrics) + "\n");
        } else {
          std::cerr << "note: no reference summaries in corpus, metrics not written\n";
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
