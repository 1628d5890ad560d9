#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spanrank/types.hpp"

namespace spanrank {

struct Word {
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  std::string surface;
  bool operator==(const Word&) const = default;
};

// Inclusive range of word indices.
struct WordSpan {
  std::size_t first = 0;
  std::size_t last = 0;
  bool operator==(const WordSpan&) const = default;
};

/// Whitespace segmentation of a passage: maximal runs of non-whitespace
/// code points, in order. Words are non-overlapping and strictly
/// increasing by start_char.
class WordIndex {
 public:
  WordIndex() = default;
  static WordIndex build(std::string_view passage);

  const std::vector<Word>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // Words any part of which lies in [start_char, end_char); nullopt when
  // the span touches no word.
  std::optional<WordSpan> find_span(std::size_t start_char, std::size_t end_char) const;

 private:
  std::vector<Word> words_;
};

WordIndex word_index(std::string_view passage);

/// Like WordIndex::find_span but an empty span is an error.
WordSpan char_span_to_word_span(const WordIndex& wi, std::size_t start_char,
                                std::size_t end_char);

struct LoadStats {
  std::size_t relocated_answers = 0;
  std::size_t dropped_answers = 0;
  std::size_t duplicate_ids = 0;
  std::vector<std::string> warnings;
};

/// Read a QRCD-format dataset: a JSON array or JSON-lines of records
/// {"pq_id", "question", "passage", "answers": [{"text", "start_char"}]}.
/// In strict mode any invariant violation throws; in lenient mode gold
/// answers with a wrong offset are relocated to the first occurrence of
/// their text in the passage, or dropped when the text does not occur.
std::vector<Sample> load_dataset(const std::filesystem::path& path, bool strict,
                                 LoadStats* stats = nullptr);

/// Same contract as load_dataset over in-memory text; `source` names the
/// input in error messages.
std::vector<Sample> parse_dataset(std::string_view text, bool strict,
                                  LoadStats* stats = nullptr,
                                  const std::string& source = "<memory>");

void save_dataset(const std::filesystem::path& path, const std::vector<Sample>& samples);

}  // namespace spanrank
