#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "spanrank/arabic_text.hpp"
#include "spanrank/ensemble.hpp"
#include "spanrank/qrcd.hpp"
#include "spanrank/types.hpp"

namespace spanrank {

enum class Stage {
  redundancy,      // greedy overlap elimination over word indices
  uninformative,   // drop answers contained in the question or stopword-only
  subword_repair,  // snap span edges to word boundaries
};

/// Parse a comma-separated stage list ("redundancy,uninformative,subword").
/// Both "subword" and "subword_repair" are accepted. Throws
/// std::invalid_argument on unknown or repeated names.
std::vector<Stage> parse_stages(std::string_view csv);
std::string stage_name(Stage s);

struct PipelineConfig {
  std::vector<Stage> stage_order{Stage::redundancy, Stage::uninformative,
                                 Stage::subword_repair};
  std::size_t final_top_n = 5;
  // Off reproduces the "keep uninformative answers" submission variant.
  bool remove_uninformative = true;
  StemmerConfig stemmer = StemmerConfig::defaults();
  StopwordList stopwords = StopwordList::defaults();
};

/// If either edge of the candidate falls strictly inside a word, extend
/// the span outward to that word's boundaries (edges in whitespace are
/// trimmed to the nearest word). Returns nullopt when the span covers no
/// word, or when a repaired broken-word fragment becomes identical to a
/// span already in `emitted`.
std::optional<AnswerCandidate> repair_subwords(const AnswerCandidate& cand,
                                               const WordIndex& wi,
                                               std::string_view passage,
                                               const AnswerList& emitted = {});

/// Apply repair_subwords over a ranked list in order, dropping repaired
/// fragments that duplicate an earlier output span.
AnswerList repair_subwords(const AnswerList& answers, const WordIndex& wi,
                           std::string_view passage);

/// Greedy redundancy elimination: walk the ranked list keeping a seen-mask
/// over the passage's words; each answer contributes one output span per
/// maximal contiguous run of previously unseen words, answers whose words
/// were all seen are dropped. Output spans have pairwise-disjoint word
/// ranges and inherit the parent answer's score.
AnswerList eliminate_redundancy(const AnswerList& answers, std::string_view passage,
                                const WordIndex& wi);

/// True when every stemmed answer token already occurs among the stemmed
/// question tokens, or the whole answer consists of stopwords. Empty
/// answers are uninformative.
bool is_uninformative(const AnswerCandidate& cand, std::string_view question,
                      const StemmerConfig& stemmer, const StopwordList& stopwords);

/// Run the configured stages in order, then always: drop empty answers,
/// drop exact-duplicate texts keeping the highest-ranked, and truncate to
/// cfg.final_top_n. Scores are carried through unchanged; ranking changes
/// only via removals.
AnswerList run_pipeline(const AnswerList& answers, const Sample& sample,
                        const PipelineConfig& cfg);

/// Per-sample pipeline over a whole run. Every pq_id must exist in the
/// dataset.
EnsembleRun run_pipeline(const EnsembleRun& run, const std::vector<Sample>& dataset,
                         const PipelineConfig& cfg);

}  // namespace spanrank
