#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace spanrank {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files (bad JSON, unreadable paths, schema violations).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally valid input that breaks a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

struct GoldAnswer {
  std::string text;
  std::size_t start_char = 0;  // code point offset into the passage
  bool operator==(const GoldAnswer&) const = default;
};

// One question-passage pair, the evaluation unit. gold_answers may be
// empty at inference time.
struct Sample {
  std::string pq_id;
  std::string question;
  std::string passage;
  std::vector<GoldAnswer> gold_answers;
};

// A ranked answer: text plus its [start_char, end_char) location in the
// passage and a correctness score. Decoder output keeps scores in [0,1];
// ensemble voting sums them, so merged scores may exceed 1.
struct AnswerCandidate {
  std::string text;
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  double probability = 0.0;
  bool operator==(const AnswerCandidate&) const = default;
};

using AnswerList = std::vector<AnswerCandidate>;
using AnswerMap = std::map<std::string, AnswerList>;  // keyed by pq_id

class DatasetIndex {
 public:
  explicit DatasetIndex(const std::vector<Sample>& samples) {
    for (const Sample& s : samples) by_id_[s.pq_id] = &s;
  }
  const Sample* find(const std::string& pq_id) const {
    auto it = by_id_.find(pq_id);
    return it == by_id_.end() ? nullptr : it->second;
  }
  const Sample& at(const std::string& pq_id) const {
    const Sample* s = find(pq_id);
    if (s == nullptr) throw ValidationError("unknown pq_id: " + pq_id);
    return *s;
  }

 private:
  std::map<std::string, const Sample*> by_id_;
};

}  // namespace spanrank
