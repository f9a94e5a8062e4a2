#include "graphsum/rouge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

#include "graphsum/errors.hpp"
#include "graphsum/graph.hpp"

namespace graphsum {

namespace {

// Decode one UTF-8 codepoint starting at `pos`; advances `pos`. Malformed
// bytes decode as U+FFFD one byte at a time, so tokenization never throws.
char32_t decode_utf8(std::string_view s, std::size_t& pos) {
  const unsigned char b0 = static_cast<unsigned char>(s[pos]);
  std::size_t len = 1;
  char32_t cp = b0;
  if (b0 >= 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else if (b0 >= 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if (b0 >= 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if (b0 >= 0x80) {
    ++pos;
    return 0xFFFD;
  }
  if (pos + len > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char bi = static_cast<unsigned char>(s[pos + i]);
    if ((bi & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (bi & 0x3F);
  }
  pos += len;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space_cp(char32_t c) {
  switch (c) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_punct_cp(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  // Latin-1 punctuation and signs.
  if (c == 0xA1 || c == 0xA7 || c == 0xAB || c == 0xB6 || c == 0xB7 || c == 0xBB || c == 0xBF) {
    return true;
  }
  // General punctuation block (dashes, quotes, daggers, ellipsis).
  if (c >= 0x2010 && c <= 0x205E) {
    return true;
  }
  // Devanagari danda / double danda, shared by many Indic scripts.
  if (c == 0x0964 || c == 0x0965) {
    return true;
  }
  // Arabic-script separators.
  if (c == 0x060C || c == 0x061B || c == 0x061F || c == 0x06D4) {
    return true;
  }
  // CJK punctuation and fullwidth forms.
  if ((c >= 0x3001 && c <= 0x3011) || (c >= 0xFF01 && c <= 0xFF0F) ||
      (c >= 0xFF1A && c <= 0xFF20) || (c >= 0xFF3B && c <= 0xFF40) ||
      (c >= 0xFF5B && c <= 0xFF65)) {
    return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::u32string> raw;
  std::u32string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = decode_utf8(text, pos);
    if (is_space_cp(cp)) {
      if (!current.empty()) {
        raw.push_back(std::move(current));
        current.clear();
      }
    } else {
      current.push_back(cp);
    }
  }
  if (!current.empty()) {
    raw.push_back(std::move(current));
  }

  std::vector<std::string> tokens;
  tokens.reserve(raw.size());
  for (const std::u32string& t : raw) {
    std::size_t begin = 0;
    std::size_t end = t.size();
    while (begin < end && is_punct_cp(t[begin])) {
      ++begin;
    }
    while (end > begin && is_punct_cp(t[end - 1])) {
      --end;
    }
    if (begin == end) {
      continue;
    }
    std::string token;
    for (std::size_t i = begin; i < end; ++i) {
      encode_utf8(t[i], token);
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

namespace {

double f1(double overlap, double cand_total, double ref_total) {
  if (overlap <= 0.0 || cand_total <= 0.0 || ref_total <= 0.0) {
    return 0.0;
  }
  const double p = overlap / cand_total;
  const double r = overlap / ref_total;
  return 2.0 * p * r / (p + r);
}

std::map<std::string, std::size_t> ngram_counts(const std::vector<std::string>& tokens,
                                                std::size_t n) {
  std::map<std::string, std::size_t> counts;
  if (tokens.size() < n) {
    return counts;
  }
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) {
        key.push_back('\x1f');  // unit separator, cannot occur inside a token
      }
      key += tokens[i + j];
    }
    counts[key]++;
  }
  return counts;
}

}  // namespace

double rouge_n(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
               std::size_t n) {
  if (n < 1) {
    throw PreconditionError("rouge_n: n must be at least 1");
  }
  const auto cand = ngram_counts(candidate, n);
  const auto ref = ngram_counts(reference, n);
  std::size_t overlap = 0;
  std::size_t cand_total = 0;
  std::size_t ref_total = 0;
  for (const auto& [key, count] : cand) {
    cand_total += count;
    const auto it = ref.find(key);
    if (it != ref.end()) {
      overlap += std::min(count, it->second);  // clipped count
    }
  }
  for (const auto& [key, count] : ref) {
    ref_total += count;
  }
  return f1(static_cast<double>(overlap), static_cast<double>(cand_total),
            static_cast<double>(ref_total));
}

double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::string>& reference) {
  const std::size_t m = candidate.size();
  const std::size_t n = reference.size();
  if (m == 0 || n == 0) {
    return 0.0;
  }
  // Rolling two-row LCS table.
  std::vector<std::size_t> prev(n + 1, 0);
  std::vector<std::size_t> curr(n + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (candidate[i - 1] == reference[j - 1]) {
        curr[j] = prev[j - 1] + 1;
      } else {
        curr[j] = std::max(prev[j], curr[j - 1]);
      }
    }
    std::swap(prev, curr);
  }
  const double lcs = static_cast<double>(prev[n]);
  return f1(lcs, static_cast<double>(m), static_cast<double>(n));
}

RougeScore rouge_score(const std::string& candidate, const std::string& reference) {
  const auto cand = tokenize(candidate);
  const auto ref = tokenize(reference);
  RougeScore s;
  s.r1 = rouge_n(cand, ref, 1);
  s.r2 = rouge_n(cand, ref, 2);
  s.rl = rouge_l(cand, ref);
  return s;
}

RougeScore mean_scores(const std::vector<RougeScore>& scores) {
  RougeScore mean;
  if (scores.empty()) {
    return mean;
  }
  for (const RougeScore& s : scores) {
    mean.r1 += s.r1;
    mean.r2 += s.r2;
    mean.rl += s.rl;
  }
  const double inv = 1.0 / static_cast<double>(scores.size());
  mean.r1 *= inv;
  mean.r2 *= inv;
  mean.rl *= inv;
  return mean;
}

std::vector<std::size_t> baseline_lexrank(const Matrix& sentence_embeddings, std::size_t k) {
  if (k < 1) {
    throw PreconditionError("baseline_lexrank: k must be at least 1");
  }
  const std::size_t n = sentence_embeddings.rows();
  if (n == 0) {
    throw DegenerateInputError("baseline_lexrank: empty embedding matrix");
  }

  // Clamped-cosine similarity including the unit self-similarity diagonal,
  // so every node has positive degree.
  Matrix sim = cosine_adjacency(sentence_embeddings);
  for (std::size_t i = 0; i < n; ++i) {
    sim(i, i) = 1.0;
  }
  std::vector<double> degree(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      degree[i] += sim(i, j);
    }
  }

  const double damping = 0.85;
  const double teleport = (1.0 - damping) / static_cast<double>(n);
  std::vector<double> score(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n, 0.0);
  for (std::size_t iter = 0; iter < 100; ++iter) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += score[i] * sim(i, j) / degree[i];
      }
      next[j] = teleport + damping * acc;
    }
    double diff = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      diff += std::fabs(next[j] - score[j]);
    }
    score.swap(next);
    if (diff < 1e-8) {
      break;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) {
      return score[a] > score[b];
    }
    return a < b;  // earlier position wins ties
  });
  order.resize(std::min(k, n));
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace graphsum
