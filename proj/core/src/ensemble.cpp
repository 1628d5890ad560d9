#include "spanrank/ensemble.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace spanrank {

namespace {

struct SpanVotes {
  std::string text;
  std::vector<double> contributions;
};

}  // namespace

EnsembleRun vote(const std::vector<ExpertRun>& runs) {
  if (runs.empty()) throw std::invalid_argument("vote: no expert runs");

  // pq_id -> (start_char, end_char) -> per-expert scores. Contributions are
  // collected and sorted before summing so the result does not depend on the
  // order the expert runs were supplied in.
  std::map<std::string, std::map<std::pair<std::size_t, std::size_t>, SpanVotes>> tally;
  for (const ExpertRun& run : runs) {
    for (const auto& [pq_id, answers] : run.answers) {
      auto& spans = tally[pq_id];
      for (const AnswerCandidate& cand : answers) {
        SpanVotes& votes = spans[{cand.start_char, cand.end_char}];
        if (votes.contributions.empty()) {
          votes.text = cand.text;
        } else if (votes.text != cand.text) {
          throw ValidationError("vote: experts disagree on text for span [" +
                                std::to_string(cand.start_char) + ", " +
                                std::to_string(cand.end_char) + ") of " + pq_id +
                                " (" + votes.text + " vs " + cand.text + ")");
        }
        votes.contributions.push_back(cand.probability);
      }
    }
  }

  EnsembleRun out;
  for (auto& [pq_id, spans] : tally) {
    AnswerList merged;
    merged.reserve(spans.size());
    for (auto& [key, votes] : spans) {
      std::sort(votes.contributions.begin(), votes.contributions.end());
      double sum = 0.0;
      for (double c : votes.contributions) sum += c;
      AnswerCandidate cand;
      cand.text = std::move(votes.text);
      cand.start_char = key.first;
      cand.end_char = key.second;
      cand.probability = sum;
      merged.push_back(std::move(cand));
    }
    std::sort(merged.begin(), merged.end(),
              [](const AnswerCandidate& a, const AnswerCandidate& b) {
                if (a.probability != b.probability) return a.probability > b.probability;
                if (a.start_char != b.start_char) return a.start_char < b.start_char;
                const std::size_t la = a.end_char - a.start_char;
                const std::size_t lb = b.end_char - b.start_char;
                if (la != lb) return la < lb;
                return a.text < b.text;
              });
    out.answers.emplace(pq_id, std::move(merged));
  }
  return out;
}

EnsembleRun truncate(EnsembleRun run, std::size_t n) {
  if (n < 1) throw std::invalid_argument("truncate: n must be >= 1");
  for (auto& [pq_id, answers] : run.answers) {
    if (answers.size() > n) answers.resize(n);
  }
  return run;
}

}  // namespace spanrank
