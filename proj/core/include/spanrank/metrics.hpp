#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spanrank/ensemble.hpp"
#include "spanrank/types.hpp"

namespace spanrank {

struct MetricsOptions {
  // Letter unification for all text comparison; off gives strict matching.
  bool unify_letters = true;
  std::size_t eval_top_n = 5;      // pRR@N
  std::size_t histogram_bins = 10;
};

/// Token-overlap F1 between two strings after normalization and
/// whitespace splitting, with multiset counts. Both empty -> 1, exactly
/// one empty -> 0.
double token_f1(std::string_view pred, std::string_view gold,
                const MetricsOptions& opts = {});

/// Best token_f1 of pred against any gold answer. Throws
/// std::invalid_argument when golds is empty.
double partial_match(std::string_view pred, const std::vector<GoldAnswer>& golds,
                     const MetricsOptions& opts = {});

struct SampleScore {
  std::string pq_id;
  double prr = 0.0;
  int em = 0;
  double f1_at_1 = 0.0;
  std::optional<std::size_t> first_hit_rank;  // 1-based; nullopt when no rank matches
  double match_at_hit = 0.0;
};

/// Partial reciprocal rank over the top eval_top_n answers: with k the
/// first rank whose partial match is non-zero, pRR = match / k; 0 when no
/// rank matches. Fills prr, first_hit_rank and match_at_hit only.
SampleScore prr(const AnswerList& ranked, const std::vector<GoldAnswer>& golds,
                const MetricsOptions& opts = {});

/// 1 iff the top answer equals any gold answer after normalization.
int exact_match(const AnswerList& ranked, const std::vector<GoldAnswer>& golds,
                const MetricsOptions& opts = {});

struct EvaluationReport {
  std::vector<SampleScore> per_sample;
  double mean_prr = 0.0;
  double mean_em = 0.0;
  double mean_f1 = 0.0;
  std::vector<std::size_t> histogram;  // per-sample pRR counts over [0,1]
  std::size_t n_samples = 0;
  std::vector<std::string> warnings;   // dataset samples missing from the run
};

/// Score a run against a dataset: per-sample pRR/EM/F1@1, their arithmetic
/// means, and a pRR histogram ([0,0.1] then right-closed bins). Samples in
/// the run but not the dataset are an error; dataset samples missing from
/// the run score 0 with a warning; gold-free samples are an error.
EvaluationReport evaluate(const EnsembleRun& run, const std::vector<Sample>& dataset,
                          const MetricsOptions& opts = {});

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(std::string_view text);
void save_report(const std::filesystem::path& path, const EvaluationReport& report);
EvaluationReport load_report(const std::filesystem::path& path);

std::string report_to_tsv(const EvaluationReport& report);
std::string render_histogram_text(const EvaluationReport& report);
std::string render_histogram_svg(const EvaluationReport& report);

}  // namespace spanrank
