#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spanrank/qrcd.hpp"
#include "spanrank/types.hpp"

// Shared fixture builders for the test binaries.

namespace fixtures {

// Self-cleaning unique temp directory.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// A passage of `n_words` distinct single-occurrence words. Word w<i> is
// "w<i>x"; none collides with question vocabulary or Arabic stopwords.
inline std::string make_passage(std::size_t n_words, std::size_t sample_tag = 0) {
  std::string passage;
  for (std::size_t i = 0; i < n_words; ++i) {
    if (i > 0) passage += ' ';
    passage += "w" + std::to_string(sample_tag) + "x" + std::to_string(i);
  }
  return passage;
}

// Synthetic QA dataset: per sample a passage of `words_per_passage` unique
// words, a question over disjoint vocabulary, and one gold answer covering
// a random word range (1..3 words). Deterministic in `seed`.
inline std::vector<spanrank::Sample> make_synthetic_dataset(
    std::size_t n_samples, std::uint64_t seed, std::size_t words_per_passage = 10) {
  std::mt19937_64 rng(seed);
  std::vector<spanrank::Sample> samples;
  samples.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    spanrank::Sample sample;
    sample.pq_id = "synth-" + std::to_string(s);
    sample.question = "qq" + std::to_string(s) + " what holds item " +
                      std::to_string(rng() % 100);
    sample.passage = make_passage(words_per_passage, s);

    const spanrank::WordIndex wi = spanrank::WordIndex::build(sample.passage);
    const std::size_t first = rng() % wi.size();
    const std::size_t len = 1 + rng() % std::min<std::size_t>(3, wi.size() - first);
    spanrank::GoldAnswer gold;
    gold.start_char = wi.words()[first].start_char;
    const std::size_t end_char = wi.words()[first + len - 1].end_char;
    gold.text = sample.passage.substr(gold.start_char, end_char - gold.start_char);
    sample.gold_answers.push_back(std::move(gold));
    samples.push_back(std::move(sample));
  }
  return samples;
}

}  // namespace fixtures
