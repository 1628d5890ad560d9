// Microbenchmarks for the hot paths: span decoding, redundancy
// elimination, ensemble voting and token F1.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "spanrank/ensemble.hpp"
#include "spanrank/metrics.hpp"
#include "spanrank/postprocess.hpp"
#include "spanrank/qrcd.hpp"
#include "spanrank/span_decoder.hpp"
#include "spanrank/synth.hpp"
#include "spanrank/types.hpp"
#include "spanrank/utf8.hpp"

using namespace spanrank;

namespace {

std::string make_passage(std::size_t n_words) {
  std::string p;
  for (std::size_t i = 0; i < n_words; ++i) {
    if (i) p += ' ';
    p += "w" + std::to_string(i) + "x";
  }
  return p;
}

Sample make_sample(std::size_t n_words) {
  Sample s;
  s.pq_id = "bench";
  s.question = "what holds the item";
  s.passage = make_passage(n_words);
  const WordIndex wi = WordIndex::build(s.passage);
  const Word& gold = wi.words()[n_words / 2];
  s.gold_answers = {GoldAnswer{gold.surface, gold.start_char}};
  return s;
}

ExpertDump make_dump(std::size_t n_tokens, std::uint64_t seed) {
  Sample s = make_sample(n_tokens);
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.noise_sigma = 2.0;
  return synth_expert_dump(s, cfg, 0);
}

void bm_decode_topk(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Sample sample = make_sample(n);
  const ExpertDump dump = make_dump(n, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_topk(dump, sample.passage, 20));
  }
}
BENCHMARK(bm_decode_topk)->Arg(16)->Arg(64)->Arg(256);

void bm_eliminate_redundancy(benchmark::State& state) {
  const std::size_t n_words = static_cast<std::size_t>(state.range(0));
  const std::string passage = make_passage(n_words);
  const WordIndex wi = WordIndex::build(passage);

  std::mt19937_64 rng(7);
  AnswerList ranked;
  for (int a = 0; a < 10; ++a) {
    const std::size_t first = rng() % n_words;
    const std::size_t last = first + rng() % (n_words - first);
    AnswerCandidate c;
    c.start_char = wi.words()[first].start_char;
    c.end_char = wi.words()[last].end_char;
    c.text = utf8::slice(passage, c.start_char, c.end_char);
    c.probability = 0.5;
    ranked.push_back(std::move(c));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(eliminate_redundancy(ranked, passage, wi));
  }
}
BENCHMARK(bm_eliminate_redundancy)->Arg(20)->Arg(100);

void bm_vote(benchmark::State& state) {
  const std::size_t n_experts = static_cast<std::size_t>(state.range(0));
  const Sample sample = make_sample(32);
  std::vector<ExpertRun> runs;
  for (std::size_t e = 0; e < n_experts; ++e) {
    ExpertRun run;
    run.expert_id = "e" + std::to_string(e);
    run.answers[sample.pq_id] = decode_topk(make_dump(32, e), sample.passage, 20);
    runs.push_back(std::move(run));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(vote(runs));
  }
}
BENCHMARK(bm_vote)->Arg(3)->Arg(9);

void bm_token_f1(benchmark::State& state) {
  const std::string pred = make_passage(8);
  const std::string gold = make_passage(12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(token_f1(pred, gold));
  }
}
BENCHMARK(bm_token_f1);

}  // namespace

BENCHMARK_MAIN();
