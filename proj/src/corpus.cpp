#include "graphsum/corpus.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "graphsum/errors.hpp"
#include "graphsum/rng.hpp"
#include "graphsum/rouge.hpp"

namespace graphsum {

namespace {

using nlohmann::json;

CorpusRecord record_from_json(const json& j, std::size_t line_no) {
  if (!j.is_object()) {
    throw ValidationError("corpus line " + std::to_string(line_no) + ": record is not an object");
  }
  CorpusRecord rec;
  if (!j.contains("id") || !j.at("id").is_string()) {
    throw ValidationError("corpus line " + std::to_string(line_no) +
                          ": missing or non-string 'id'");
  }
  rec.id = j.at("id").get<std::string>();
  if (!j.contains("sentences") || !j.at("sentences").is_array() || j.at("sentences").empty()) {
    throw ValidationError("record '" + rec.id + "': 'sentences' must be a non-empty array");
  }
  for (const auto& s : j.at("sentences")) {
    if (!s.is_string()) {
      throw ValidationError("record '" + rec.id + "': sentence entries must be strings");
    }
    rec.sentences.push_back(s.get<std::string>());
  }
  if (j.contains("embeddings") && !j.at("embeddings").is_null()) {
    const auto& embs = j.at("embeddings");
    if (!embs.is_array()) {
      throw ValidationError("record '" + rec.id + "': 'embeddings' must be an array");
    }
    for (const auto& row : embs) {
      if (!row.is_array() || row.empty()) {
        throw ValidationError("record '" + rec.id +
                              "': each embedding must be a non-empty array of numbers");
      }
      std::vector<double> vec;
      vec.reserve(row.size());
      for (const auto& v : row) {
        if (!v.is_number()) {
          throw ValidationError("record '" + rec.id + "': embedding entries must be numbers");
        }
        vec.push_back(v.get<double>());
      }
      rec.embeddings.push_back(std::move(vec));
    }
    if (rec.embeddings.size() != rec.sentences.size()) {
      throw ValidationError("record '" + rec.id + "': " +
                            std::to_string(rec.sentences.size()) + " sentences but " +
                            std::to_string(rec.embeddings.size()) + " embeddings");
    }
    const std::size_t dim = rec.embeddings.front().size();
    for (const auto& row : rec.embeddings) {
      if (row.size() != dim) {
        throw ValidationError("record '" + rec.id + "': inconsistent embedding dimension (" +
                              std::to_string(dim) + " vs " + std::to_string(row.size()) + ")");
      }
    }
  }
  if (j.contains("reference_summary") && !j.at("reference_summary").is_null()) {
    if (!j.at("reference_summary").is_string()) {
      throw ValidationError("record '" + rec.id + "': 'reference_summary' must be a string");
    }
    rec.reference_summary = j.at("reference_summary").get<std::string>();
    rec.has_reference = true;
  }
  return rec;
}

}  // namespace

std::vector<CorpusRecord> parse_corpus(std::istream& in) {
  std::vector<CorpusRecord> corpus;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;  // blank line
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
    CorpusRecord rec = record_from_json(j, line_no);
    if (!seen_ids.insert(rec.id).second) {
      throw ValidationError("record '" + rec.id + "': duplicate id");
    }
    corpus.push_back(std::move(rec));
  }

  // Corpus-level consistency: embeddings all present or all absent, one dim.
  bool any_emb = false;
  bool all_emb = true;
  for (const auto& rec : corpus) {
    any_emb = any_emb || rec.has_embeddings();
    all_emb = all_emb && rec.has_embeddings();
  }
  if (any_emb && !all_emb) {
    for (const auto& rec : corpus) {
      if (!rec.has_embeddings()) {
        throw ValidationError("record '" + rec.id +
                              "': lacks embeddings while other records have them");
      }
    }
  }
  if (any_emb) {
    const std::size_t dim = corpus.front().embeddings.front().size();
    for (const auto& rec : corpus) {
      if (rec.embeddings.front().size() != dim) {
        throw ValidationError("record '" + rec.id + "': embedding dimension " +
                              std::to_string(rec.embeddings.front().size()) +
                              " differs from corpus dimension " + std::to_string(dim));
      }
    }
  }
  return corpus;
}

std::vector<CorpusRecord> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open corpus file: " + path);
  }
  return parse_corpus(in);
}

void write_corpus(const std::vector<CorpusRecord>& corpus, std::ostream& out) {
  for (const auto& rec : corpus) {
    json j;
    j["id"] = rec.id;
    j["sentences"] = rec.sentences;
    if (rec.has_embeddings()) {
      j["embeddings"] = rec.embeddings;
    }
    if (rec.has_reference) {
      j["reference_summary"] = rec.reference_summary;
    }
    out << j.dump() << '\n';
  }
}

namespace {

constexpr std::uint64_t kUnigramSalt = 0x756e6967ULL;   // feature-space tags
constexpr std::uint64_t kTrigramSalt = 0x74726967ULL;

void bump_bucket(std::vector<double>& counts, std::uint64_t hash, std::size_t dim) {
  counts[static_cast<std::size_t>(hash % dim)] += 1.0;
}

// Raw term counts for one sentence: hashed word unigrams plus hashed
// character trigrams within each token (whole token when shorter).
std::vector<double> sentence_term_counts(const std::string& sentence, std::size_t dim) {
  std::vector<double> counts(dim, 0.0);
  for (const std::string& token : tokenize(sentence)) {
    bump_bucket(counts, Rng::combine(kUnigramSalt, Rng::hash_string(token)), dim);
    if (token.size() < 3) {
      bump_bucket(counts, Rng::combine(kTrigramSalt, Rng::hash_string(token)), dim);
      continue;
    }
    for (std::size_t i = 0; i + 3 <= token.size(); ++i) {
      bump_bucket(counts,
                  Rng::combine(kTrigramSalt, Rng::hash_string({token.data() + i, 3})), dim);
    }
  }
  return counts;
}

}  // namespace

void fallback_embed(std::vector<CorpusRecord>& corpus, std::uint64_t seed, std::size_t dim) {
  for (const auto& rec : corpus) {
    if (rec.has_embeddings()) {
      throw ValidationError("record '" + rec.id + "': already has embeddings");
    }
  }

  // First pass: term counts and per-bucket document frequency, where each
  // sentence counts as one "document" for IDF purposes.
  std::vector<std::vector<std::vector<double>>> counts(corpus.size());
  std::vector<double> doc_freq(dim, 0.0);
  std::size_t total_sentences = 0;
  for (std::size_t r = 0; r < corpus.size(); ++r) {
    counts[r].reserve(corpus[r].sentences.size());
    for (const std::string& sentence : corpus[r].sentences) {
      counts[r].push_back(sentence_term_counts(sentence, dim));
      ++total_sentences;
      for (std::size_t b = 0; b < dim; ++b) {
        if (counts[r].back()[b] > 0.0) {
          doc_freq[b] += 1.0;
        }
      }
    }
  }

  std::vector<double> idf(dim, 0.0);
  for (std::size_t b = 0; b < dim; ++b) {
    idf[b] = std::log((1.0 + static_cast<double>(total_sentences)) / (1.0 + doc_freq[b])) + 1.0;
  }

  for (std::size_t r = 0; r < corpus.size(); ++r) {
    corpus[r].embeddings.resize(corpus[r].sentences.size());
    for (std::size_t s = 0; s < corpus[r].sentences.size(); ++s) {
      std::vector<double>& vec = counts[r][s];
      double norm = 0.0;
      for (std::size_t b = 0; b < dim; ++b) {
        vec[b] *= idf[b];
        norm += vec[b] * vec[b];
      }
      if (norm > 0.0) {
        norm = std::sqrt(norm);
        for (double& v : vec) {
          v /= norm;
        }
      } else {
        // Tokenless sentence: deterministic pseudo-random unit direction.
        Rng rng = Rng(seed).fork(
            Rng::combine(Rng::hash_string(corpus[r].id), Rng::combine(0x656d70, s)));
        double sq = 0.0;
        for (double& v : vec) {
          v = rng.uniform(-1.0, 1.0);
          sq += v * v;
        }
        sq = std::sqrt(sq);
        for (double& v : vec) {
          v /= sq;
        }
      }
      corpus[r].embeddings[s] = std::move(vec);
    }
  }
}

}  // namespace graphsum
