#ifndef GRAPHSUM_CORPUS_HPP
#define GRAPHSUM_CORPUS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace graphsum {

/// One pre-split document. Embeddings are optional on input (the fallback
/// embedder fills them in); a reference summary is optional and only used
/// for evaluation.
struct CorpusRecord {
  std::string id;
  std::vector<std::string> sentences;
  std::vector<std::vector<double>> embeddings;  // empty or one row per sentence
  std::string reference_summary;
  bool has_reference = false;

  bool has_embeddings() const { return !embeddings.empty(); }
};

/// Parse newline-delimited JSON records. Throws ParseError with the line
/// number on malformed JSON and ValidationError (naming the record id) on
/// consistency violations: missing fields, embedding count or dimension
/// mismatches, mixed embedded/plain records, duplicate ids.
std::vector<CorpusRecord> parse_corpus(std::istream& in);

/// parse_corpus over a file; throws ParseError if the file cannot be opened.
std::vector<CorpusRecord> load_corpus(const std::string& path);

/// Serialize records back to newline-delimited JSON (used by `embed`).
void write_corpus(const std::vector<CorpusRecord>& corpus, std::ostream& out);

/// Deterministic hashed TF-IDF sentence embeddings for corpora that arrive
/// without vectors: word unigrams and per-token character trigrams hashed
/// into `dim` buckets, TF-IDF weighted over the corpus, L2-normalized.
/// Sentences with no tokens get a seed-derived pseudo-random unit vector.
/// Throws ValidationError if any record already carries embeddings.
void fallback_embed(std::vector<CorpusRecord>& corpus, std::uint64_t seed, std::size_t dim = 300);

}  // namespace graphsum

#endif  // GRAPHSUM_CORPUS_HPP
