#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace spanrank {

struct NormalizeOptions {
  // Unify alef variants to bare alef and final alef maqsura to ya. On for
  // metric comparison, off when extracting spans from the passage.
  bool unify_letters = true;
};

/// Trim, collapse internal whitespace to single spaces, strip tatweel,
/// and optionally unify letter variants. Idempotent.
std::string normalize(std::string_view text, NormalizeOptions opts = {});

/// normalize() then split on spaces.
std::vector<std::string> tokenize(std::string_view text, NormalizeOptions opts = {});

struct StemmerConfig {
  std::vector<std::string> strip_prefixes;
  std::vector<std::string> strip_suffixes;
  std::size_t min_stem_len = 2;  // code points

  static StemmerConfig defaults();
  // JSON object with optional keys strip_prefixes, strip_suffixes,
  // min_stem_len; absent keys keep the defaults.
  static StemmerConfig from_json_file(const std::filesystem::path& path);
};

/// Light stemming: remove the longest matching prefix, then the longest
/// matching suffix, each at most once and never leaving fewer than
/// cfg.min_stem_len code points. Deterministic; the result is a
/// contiguous substring of the input token.
std::string stem(std::string_view token, const StemmerConfig& cfg);

class StopwordList {
 public:
  static StopwordList defaults();
  // UTF-8 text, one word per line, '#' starts a comment.
  static StopwordList from_file(const std::filesystem::path& path);
  static StopwordList from_words(const std::vector<std::string>& words);

  // Membership of normalize(token).
  bool contains(std::string_view token) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;  // canonicalized at construction
};

bool is_stopword(std::string_view token, const StopwordList& list);

}  // namespace spanrank
