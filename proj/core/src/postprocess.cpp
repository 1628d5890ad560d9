#include "spanrank/postprocess.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "spanrank/parallel.hpp"
#include "spanrank/utf8.hpp"

namespace spanrank {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::vector<Stage> parse_stages(std::string_view csv) {
  std::vector<Stage> out;
  if (trim(csv).empty()) return out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string_view::npos) comma = csv.size();
    const std::string name = trim(csv.substr(pos, comma - pos));
    Stage stage;
    if (name == "redundancy") {
      stage = Stage::redundancy;
    } else if (name == "uninformative") {
      stage = Stage::uninformative;
    } else if (name == "subword" || name == "subword_repair") {
      stage = Stage::subword_repair;
    } else {
      throw std::invalid_argument("unknown stage: \"" + name + "\"");
    }
    if (std::find(out.begin(), out.end(), stage) != out.end()) {
      throw std::invalid_argument("duplicate stage: \"" + name + "\"");
    }
    out.push_back(stage);
    pos = comma + 1;
  }
  return out;
}

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::redundancy:
      return "redundancy";
    case Stage::uninformative:
      return "uninformative";
    case Stage::subword_repair:
      return "subword_repair";
  }
  throw std::invalid_argument("unknown stage value");
}

namespace {

// Core of repair_subwords once the passage byte offsets are known.
std::optional<AnswerCandidate> repair_one(const AnswerCandidate& cand,
                                          const WordIndex& wi, std::string_view passage,
                                          const std::vector<std::size_t>& offs,
                                          const std::set<std::pair<std::size_t, std::size_t>>& emitted) {
  const std::optional<WordSpan> span = wi.find_span(cand.start_char, cand.end_char);
  if (!span) return std::nullopt;
  const std::size_t new_start = wi.words()[span->first].start_char;
  const std::size_t new_end = wi.words()[span->last].end_char;
  if (new_start == cand.start_char && new_end == cand.end_char) return cand;
  if (emitted.count({new_start, new_end}) > 0) return std::nullopt;
  AnswerCandidate fixed;
  fixed.text = std::string(utf8::slice(passage, offs, new_start, new_end));
  fixed.start_char = new_start;
  fixed.end_char = new_end;
  fixed.probability = cand.probability;
  return fixed;
}

}  // namespace

std::optional<AnswerCandidate> repair_subwords(const AnswerCandidate& cand,
                                               const WordIndex& wi,
                                               std::string_view passage,
                                               const AnswerList& emitted) {
  std::set<std::pair<std::size_t, std::size_t>> spans;
  for (const AnswerCandidate& e : emitted) spans.insert({e.start_char, e.end_char});
  return repair_one(cand, wi, passage, utf8::byte_offsets(passage), spans);
}

AnswerList repair_subwords(const AnswerList& answers, const WordIndex& wi,
                           std::string_view passage) {
  const std::vector<std::size_t> offs = utf8::byte_offsets(passage);
  std::set<std::pair<std::size_t, std::size_t>> emitted;
  AnswerList out;
  out.reserve(answers.size());
  for (const AnswerCandidate& cand : answers) {
    std::optional<AnswerCandidate> fixed = repair_one(cand, wi, passage, offs, emitted);
    if (!fixed) continue;
    emitted.insert({fixed->start_char, fixed->end_char});
    out.push_back(std::move(*fixed));
  }
  return out;
}

AnswerList eliminate_redundancy(const AnswerList& answers, std::string_view passage,
                                const WordIndex& wi) {
  const std::vector<std::size_t> offs = utf8::byte_offsets(passage);
  std::vector<char> seen(wi.size(), 0);
  AnswerList out;
  for (const AnswerCandidate& cand : answers) {
    const std::optional<WordSpan> span = wi.find_span(cand.start_char, cand.end_char);
    if (!span) continue;
    // Each maximal run of previously unseen words becomes one output span.
    std::size_t w = span->first;
    while (w <= span->last) {
      if (seen[w]) {
        ++w;
        continue;
      }
      std::size_t run_end = w;
      while (run_end + 1 <= span->last && !seen[run_end + 1]) ++run_end;
      for (std::size_t i = w; i <= run_end; ++i) seen[i] = 1;
      AnswerCandidate piece;
      piece.start_char = wi.words()[w].start_char;
      piece.end_char = wi.words()[run_end].end_char;
      piece.text = std::string(utf8::slice(passage, offs, piece.start_char, piece.end_char));
      piece.probability = cand.probability;
      out.push_back(std::move(piece));
      w = run_end + 1;
    }
  }
  return out;
}

bool is_uninformative(const AnswerCandidate& cand, std::string_view question,
                      const StemmerConfig& stemmer, const StopwordList& stopwords) {
  const std::vector<std::string> tokens = tokenize(cand.text);
  if (tokens.empty()) return true;

  bool all_stop = true;
  for (const std::string& t : tokens) {
    if (!stopwords.contains(t)) {
      all_stop = false;
      break;
    }
  }
  if (all_stop) return true;

  std::set<std::string> question_stems;
  for (const std::string& t : tokenize(question)) {
    question_stems.insert(stem(t, stemmer));
  }
  for (const std::string& t : tokens) {
    if (question_stems.count(stem(t, stemmer)) == 0) return false;
  }
  return true;
}

AnswerList run_pipeline(const AnswerList& answers, const Sample& sample,
                        const PipelineConfig& cfg) {
  const WordIndex wi = WordIndex::build(sample.passage);
  AnswerList current = answers;
  for (Stage stage : cfg.stage_order) {
    switch (stage) {
      case Stage::redundancy:
        current = eliminate_redundancy(current, sample.passage, wi);
        break;
      case Stage::uninformative:
        if (cfg.remove_uninformative) {
          std::erase_if(current, [&](const AnswerCandidate& c) {
            return is_uninformative(c, sample.question, cfg.stemmer, cfg.stopwords);
          });
        }
        break;
      case Stage::subword_repair:
        current = repair_subwords(current, wi, sample.passage);
        break;
    }
  }

  // Always last: drop blank answers, drop exact-duplicate texts keeping
  // the highest-ranked, and cut to the final list size.
  AnswerList final_list;
  std::set<std::string> texts;
  for (AnswerCandidate& cand : current) {
    if (normalize(cand.text, {.unify_letters = false}).empty()) continue;
    if (!texts.insert(cand.text).second) continue;
    final_list.push_back(std::move(cand));
    if (final_list.size() == cfg.final_top_n) break;
  }
  return final_list;
}

EnsembleRun run_pipeline(const EnsembleRun& run, const std::vector<Sample>& dataset,
                         const PipelineConfig& cfg) {
  const DatasetIndex index(dataset);
  std::vector<const std::string*> ids;
  std::vector<const AnswerList*> inputs;
  ids.reserve(run.answers.size());
  for (const auto& [pq_id, answers] : run.answers) {
    index.at(pq_id);  // fail fast, before any parallel work
    ids.push_back(&pq_id);
    inputs.push_back(&answers);
  }

  std::vector<AnswerList> results(ids.size());
  parallel_for(ids.size(), [&](std::size_t i) {
    results[i] = run_pipeline(*inputs[i], index.at(*ids[i]), cfg);
  });

  EnsembleRun out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.answers.emplace(*ids[i], std::move(results[i]));
  }
  return out;
}

}  // namespace spanrank
