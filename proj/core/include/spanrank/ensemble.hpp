#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spanrank/types.hpp"

namespace spanrank {

struct ExpertRun {
  std::string expert_id;
  AnswerMap answers;
};

struct EnsembleRun {
  AnswerMap answers;
};

/// Span-voting ensemble: per sample, candidates are keyed by their exact
/// (start_char, end_char) span and the key's score is the sum of every
/// expert's score for that identical span (absent experts contribute 0).
/// Output is sorted by summed score descending with a deterministic
/// tie-break (earlier start, then shorter span, then text); the summation
/// itself is order-independent, so any permutation of `runs` yields a
/// bit-identical result. The full merged list is retained; truncation is
/// a separate step.
EnsembleRun vote(const std::vector<ExpertRun>& runs);

/// Keep the first min(n, size) candidates per sample. n >= 1.
EnsembleRun truncate(EnsembleRun run, std::size_t n);

}  // namespace spanrank
