#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "spanrank/types.hpp"

namespace spanrank {

struct TokenSpan {
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  bool operator==(const TokenSpan&) const = default;
};

// One expert model's raw output for a sample: a start and an end score per
// passage token plus the token-to-character offset map. Continuation flags
// mark word-internal sub-word pieces.
struct ExpertDump {
  std::string pq_id;
  std::vector<double> start_scores;
  std::vector<double> end_scores;
  std::vector<TokenSpan> token_offsets;
  std::vector<bool> token_is_continuation;

  // Equal lengths >= 1, tokens non-empty, offsets non-overlapping and
  // non-decreasing. Throws ValidationError.
  void validate() const;

  bool operator==(const ExpertDump&) const = default;
};

/// Numerically stable (max-subtracted) softmax. Output sums to 1 within
/// 1e-9 and preserves the input ordering. Throws std::invalid_argument on
/// an empty list or non-finite input.
std::vector<double> softmax(std::span<const double> scores);
std::vector<double> log_softmax(std::span<const double> scores);

inline constexpr std::size_t kDefaultTopK = 20;
inline constexpr std::size_t kDefaultMaxAnswerTokens = 30;

/// Rank all token spans (i, j), j >= i, of at most max_answer_tokens
/// tokens by start_score[i] + end_score[j] descending and return the top
/// k as answer candidates. Ties break on earlier start token, then
/// shorter span. Each candidate's probability is the product of the start
/// and end softmax probabilities, renormalized over the returned list.
/// Character spans cover [token_offsets[i].start, token_offsets[j].end);
/// spans ending inside a word are returned as-is (repair is a
/// post-processing concern).
AnswerList decode_topk(const ExpertDump& dump, std::string_view passage,
                       std::size_t k = kDefaultTopK,
                       std::size_t max_answer_tokens = kDefaultMaxAnswerTokens);

// Expert dump files are JSON-lines, one record per sample:
// {"pq_id": str, "start_scores": [float], "end_scores": [float],
//  "token_offsets": [[int, int]], "token_is_continuation": [bool]}.
std::vector<ExpertDump> load_dumps(const std::filesystem::path& path);
void save_dumps(const std::filesystem::path& path, const std::vector<ExpertDump>& dumps);

}  // namespace spanrank
