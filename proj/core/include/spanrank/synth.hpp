#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "spanrank/span_decoder.hpp"
#include "spanrank/types.hpp"

namespace spanrank {

// Synthetic expert dumps stand in for trained checkpoints: gold-answer
// boundary tokens get a score boost, everything gets Gaussian noise, and
// a fraction of words can be split into sub-word pieces to exercise
// repair. Identical config + dataset yields bit-identical output; the
// random stream is derived from (seed, expert_index, pq_id) only, so
// expert streams are independent and per-sample generation is pure.
struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t n_experts = 1;
  double noise_sigma = 0.0;
  double gold_boost = 10.0;
  double subword_fragment_rate = 0.0;
};

ExpertDump synth_expert_dump(const Sample& sample, const SynthConfig& cfg,
                             std::size_t expert_index);

/// One dump per sample, in dataset order. Every sample needs at least one
/// gold answer.
std::vector<ExpertDump> synth_expert(const std::vector<Sample>& dataset,
                                     const SynthConfig& cfg, std::size_t expert_index);

}  // namespace spanrank
