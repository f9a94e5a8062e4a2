#ifndef GRAPHSUM_ROUGE_HPP
#define GRAPHSUM_ROUGE_HPP

#include <string>
#include <string_view>
#include <vector>

#include "graphsum/matrix.hpp"

namespace graphsum {

/// F1 overlap scores between a candidate and a reference summary.
struct RougeScore {
  double r1 = 0.0;
  double r2 = 0.0;
  double rl = 0.0;
};

/// Unicode-aware tokenization: split on whitespace codepoints, then strip
/// leading and trailing punctuation codepoints from each token. Works the
/// same for Latin and Indic scripts; tokens that strip to nothing vanish.
std::vector<std::string> tokenize(std::string_view text);

/// Clipped n-gram overlap F1. Zero when either side has no n-grams.
double rouge_n(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
               std::size_t n);

/// Longest-common-subsequence F1.
double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::string>& reference);

RougeScore rouge_score(const std::string& candidate, const std::string& reference);

/// Mean of per-document scores, the fixed corpus-level reporting convention.
RougeScore mean_scores(const std::vector<RougeScore>& scores);

/// Continuous LexRank over sentence embeddings: clamped-cosine similarity
/// graph, degree-normalized transitions, damping 0.85, power iteration to
/// 1e-8 or 100 rounds. Returns the top-k sentences by stationary score in
/// document order, earlier positions winning ties.
std::vector<std::size_t> baseline_lexrank(const Matrix& sentence_embeddings, std::size_t k);

}  // namespace graphsum

#endif  // GRAPHSUM_ROUGE_HPP
