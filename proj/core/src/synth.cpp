#include "spanrank/synth.hpp"

#include <cmath>
#include <random>

#include "spanrank/parallel.hpp"
#include "spanrank/qrcd.hpp"
#include "spanrank/utf8.hpp"

namespace spanrank {

namespace {

// Stream seed from (seed, expert_index, pq_id): FNV-1a over the raw bytes,
// then a splitmix64 finalizer so near-identical inputs land far apart.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t expert_index,
                       const std::string& pq_id) {
  std::uint64_t h = 14695981039346656037ull;
  const auto eat = [&h](std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  eat(seed, 8);
  eat(expert_index, 8);
  for (unsigned char c : pq_id) eat(c, 1);

  std::uint64_t z = h + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller from raw engine bits. std::normal_distribution's algorithm is
// implementation-defined, and dump files must be bit-identical across
// standard libraries for a fixed seed.
double gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1], keeps log finite
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238 * u2);
}

}  // namespace

ExpertDump synth_expert_dump(const Sample& sample, const SynthConfig& cfg,
                             std::size_t expert_index) {
  if (sample.gold_answers.empty()) {
    throw ValidationError("synth: sample " + sample.pq_id + " has no gold answers");
  }
  std::mt19937_64 rng(mix_seed(cfg.seed, expert_index, sample.pq_id));

  ExpertDump dump;
  dump.pq_id = sample.pq_id;

  // Tokenize: one token per word, except that some words are split in two
  // to simulate sub-word tokenizer pieces (the second piece is flagged as
  // a continuation). Splitting a word keeps its outer boundaries, so gold
  // answers that start and end on word boundaries stay exactly reachable.
  const WordIndex wi = WordIndex::build(sample.passage);
  for (const Word& w : wi.words()) {
    const std::size_t len = w.end_char - w.start_char;
    bool split = false;
    std::size_t cut = 0;
    if (cfg.subword_fragment_rate > 0.0 && uniform01(rng) < cfg.subword_fragment_rate &&
        len >= 4) {
      cut = 1 + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(len - 1));
      cut = std::min(cut, len - 1);
      split = true;
    }
    if (split) {
      dump.token_offsets.push_back({w.start_char, w.start_char + cut});
      dump.token_is_continuation.push_back(false);
      dump.token_offsets.push_back({w.start_char + cut, w.end_char});
      dump.token_is_continuation.push_back(true);
    } else {
      dump.token_offsets.push_back({w.start_char, w.end_char});
      dump.token_is_continuation.push_back(false);
    }
  }
  if (dump.token_offsets.empty()) {
    throw ValidationError("synth: sample " + sample.pq_id + " has an empty passage");
  }

  const std::size_t n = dump.token_offsets.size();
  dump.start_scores.assign(n, 0.0);
  dump.end_scores.assign(n, 0.0);
  if (cfg.noise_sigma > 0.0) {
    for (std::size_t t = 0; t < n; ++t) {
      dump.start_scores[t] = gaussian(rng) * cfg.noise_sigma;
      dump.end_scores[t] = gaussian(rng) * cfg.noise_sigma;
    }
  }

  // Boost the boundary tokens of each gold answer. The boost decays with
  // the gold's position so that, without noise, the first gold's own
  // (start, end) pair strictly outranks every cross-gold combination.
  const auto token_with_start = [&](std::size_t pos) -> std::ptrdiff_t {
    for (std::size_t t = 0; t < n; ++t) {
      if (dump.token_offsets[t].start_char == pos) return static_cast<std::ptrdiff_t>(t);
      if (dump.token_offsets[t].start_char < pos && pos < dump.token_offsets[t].end_char) {
        return static_cast<std::ptrdiff_t>(t);
      }
    }
    return -1;
  };
  const auto token_with_end = [&](std::size_t pos) -> std::ptrdiff_t {
    for (std::size_t t = 0; t < n; ++t) {
      if (dump.token_offsets[t].end_char == pos) return static_cast<std::ptrdiff_t>(t);
      if (dump.token_offsets[t].start_char < pos && pos < dump.token_offsets[t].end_char) {
        return static_cast<std::ptrdiff_t>(t);
      }
    }
    return -1;
  };
  for (std::size_t g = 0; g < sample.gold_answers.size(); ++g) {
    const GoldAnswer& gold = sample.gold_answers[g];
    const std::size_t gold_end = gold.start_char + utf8::length(gold.text);
    const double boost = cfg.gold_boost / static_cast<double>(1 + g);
    const std::ptrdiff_t ts = token_with_start(gold.start_char);
    const std::ptrdiff_t te = token_with_end(gold_end);
    if (ts >= 0) dump.start_scores[static_cast<std::size_t>(ts)] += boost;
    if (te >= 0) dump.end_scores[static_cast<std::size_t>(te)] += boost;
  }
  return dump;
}

std::vector<ExpertDump> synth_expert(const std::vector<Sample>& dataset,
                                     const SynthConfig& cfg, std::size_t expert_index) {
  for (const Sample& s : dataset) {
    if (s.gold_answers.empty()) {
      throw ValidationError("synth: sample " + s.pq_id + " has no gold answers");
    }
  }
  std::vector<ExpertDump> dumps(dataset.size());
  parallel_for(dataset.size(), [&](std::size_t i) {
    dumps[i] = synth_expert_dump(dataset[i], cfg, expert_index);
  });
  return dumps;
}

}  // namespace spanrank
