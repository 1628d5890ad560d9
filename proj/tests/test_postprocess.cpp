#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spanrank/postprocess.hpp"
#include "spanrank/types.hpp"
#include "spanrank/utf8.hpp"

using namespace spanrank;

namespace {

AnswerCandidate span_of(const std::string& passage, std::size_t start, std::size_t end,
                        double p = 0.5) {
  AnswerCandidate c;
  c.start_char = start;
  c.end_char = end;
  c.text = utf8::slice(passage, start, end);
  c.probability = p;
  return c;
}

PipelineConfig latin_config() {
  PipelineConfig cfg;  // default stages; Arabic stopwords never match Latin
  return cfg;
}

}  // namespace

TEST_CASE("parse_stages handles names, aliases and errors") {
  const std::vector<Stage> all = parse_stages("redundancy,uninformative,subword");
  CHECK(all == std::vector<Stage>{Stage::redundancy, Stage::uninformative,
                                  Stage::subword_repair});
  CHECK(parse_stages("subword_repair") == std::vector<Stage>{Stage::subword_repair});
  CHECK(parse_stages(" uninformative , redundancy ") ==
        std::vector<Stage>{Stage::uninformative, Stage::redundancy});
  CHECK(parse_stages("").empty());
  CHECK_THROWS_AS(parse_stages("redundancy,bogus"), std::invalid_argument);
  CHECK_THROWS_AS(parse_stages("subword,subword_repair"), std::invalid_argument);

  for (Stage s : all) CHECK(parse_stages(stage_name(s)) == std::vector<Stage>{s});
}

TEST_CASE("repair extends a span whose edge breaks a word") {
  const std::string passage = "وفي الرقاب والغارمين سبيل";
  const WordIndex wi = WordIndex::build(passage);

  // Cut mid-way through the third word.
  const AnswerCandidate broken = span_of(passage, 0, 18, 0.9);
  CHECK(broken.text == "وفي الرقاب والغارم");
  const auto fixed = repair_subwords(broken, wi, passage);
  REQUIRE(fixed.has_value());
  CHECK(fixed->text == "وفي الرقاب والغارمين");
  CHECK(fixed->start_char == 0);
  CHECK(fixed->end_char == 20);
  CHECK(fixed->probability == 0.9);
}

TEST_CASE("repair drops a fragment whose extension duplicates an earlier answer") {
  const std::string passage = "هم الذين ينالون الخير";
  const WordIndex wi = WordIndex::build(passage);

  const AnswerCandidate full = span_of(passage, 9, 15);  // "ينالون"
  const AnswerCandidate tail = span_of(passage, 13, 15);  // "ون"
  CHECK(tail.text == "ون");

  CHECK_FALSE(repair_subwords(tail, wi, passage, {full}).has_value());
  // Without the earlier duplicate the fragment is extended instead.
  const auto fixed = repair_subwords(tail, wi, passage);
  REQUIRE(fixed.has_value());
  CHECK(fixed->text == "ينالون");
}

TEST_CASE("repair leaves word-aligned spans untouched") {
  const std::string passage = "aa bb cc";
  const WordIndex wi = WordIndex::build(passage);
  const AnswerCandidate aligned = span_of(passage, 3, 8, 0.25);
  const auto out = repair_subwords(aligned, wi, passage);
  REQUIRE(out.has_value());
  CHECK(*out == aligned);
}

TEST_CASE("repair trims edges that fall in whitespace") {
  const std::string passage = "aa bb cc";
  const WordIndex wi = WordIndex::build(passage);
  const AnswerCandidate padded = span_of(passage, 2, 6);  // " bb " -> word "bb" only
  const auto out = repair_subwords(padded, wi, passage);
  REQUIRE(out->start_char == 3);
  CHECK(out->end_char == 5);
  CHECK(out->text == "bb");

  const AnswerCandidate wide = span_of(passage, 2, 7);  // " bb c" reaches into "cc"
  const auto out2 = repair_subwords(wide, wi, passage);
  REQUIRE(out2->start_char == 3);
  CHECK(out2->end_char == 8);
  CHECK(out2->text == "bb cc");
}

TEST_CASE("repair drops spans that cover no word") {
  const std::string passage = "aa   bb";
  const WordIndex wi = WordIndex::build(passage);
  CHECK_FALSE(repair_subwords(span_of(passage, 2, 5), wi, passage).has_value());
}

TEST_CASE("repair over a list keeps order and drops duplicates") {
  const std::string passage = "aa bbbb cc";
  const WordIndex wi = WordIndex::build(passage);
  const AnswerList input = {
      span_of(passage, 3, 7, 0.9),   // "bbbb" aligned
      span_of(passage, 3, 5, 0.8),   // "bb" fragment -> duplicate of rank 1, dropped
      span_of(passage, 5, 10, 0.7),  // "bb cc" -> extends to "bbbb cc"
      span_of(passage, 0, 2, 0.6),   // "aa"
  };
  const AnswerList out = repair_subwords(input, wi, passage);
  REQUIRE(out.size() == 3);
  CHECK(out[0].text == "bbbb");
  CHECK(out[1].text == "bbbb cc");
  CHECK(out[1].probability == 0.7);
  CHECK(out[2].text == "aa");
}

TEST_CASE("eliminate_redundancy follows the documented trace") {
  const std::string passage = "aa bb cc dd ee ff";
  const WordIndex wi = WordIndex::build(passage);
  const AnswerList ranked = {
      span_of(passage, 0, 8, 0.9),    // words 0-2
      span_of(passage, 3, 11, 0.8),   // words 1-3, only word 3 unseen
      span_of(passage, 12, 17, 0.7),  // words 4-5
  };
  const AnswerList out = eliminate_redundancy(ranked, passage, wi);
  REQUIRE(out.size() == 3);
  CHECK(out[0].text == "aa bb cc");
  CHECK(out[1].text == "dd");
  CHECK(out[1].start_char == 9);
  CHECK(out[1].probability == 0.8);
  CHECK(out[2].text == "ee ff");
}

TEST_CASE("eliminate_redundancy keeps only the first of identical answers") {
  const std::string passage = "aa bb cc";
  const WordIndex wi = WordIndex::build(passage);
  const AnswerList ranked = {span_of(passage, 0, 5, 0.9), span_of(passage, 0, 5, 0.8),
                             span_of(passage, 0, 5, 0.7)};
  const AnswerList out = eliminate_redundancy(ranked, passage, wi);
  REQUIRE(out.size() == 1);
  CHECK(out[0].text == "aa bb");
  CHECK(out[0].probability == 0.9);
}

TEST_CASE("eliminate_redundancy emits one span per unseen run") {
  const std::string passage = "aa bb cc dd ee";
  const WordIndex wi = WordIndex::build(passage);
  const AnswerList ranked = {
      span_of(passage, 6, 8, 0.9),   // word 2 only
      span_of(passage, 0, 14, 0.8),  // all words; unseen runs: 0-1 and 3-4
  };
  const AnswerList out = eliminate_redundancy(ranked, passage, wi);
  REQUIRE(out.size() == 3);
  CHECK(out[0].text == "cc");
  CHECK(out[1].text == "aa bb");
  CHECK(out[2].text == "dd ee");
  CHECK(out[1].probability == 0.8);
}

TEST_CASE("eliminate_redundancy equals the set-based oracle on random input") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n_words = 1 + rng() % 20;
    const std::string passage = fixtures::make_passage(n_words);
    const WordIndex wi = WordIndex::build(passage);

    AnswerList ranked;
    const std::size_t n_answers = rng() % 10;
    for (std::size_t a = 0; a < n_answers; ++a) {
      const std::size_t first = rng() % n_words;
      const std::size_t last = first + rng() % (n_words - first);
      ranked.push_back(span_of(passage, wi.words()[first].start_char,
                               wi.words()[last].end_char,
                               static_cast<double>(rng() % 100) / 100.0));
    }

    const AnswerList got = eliminate_redundancy(ranked, passage, wi);
    CHECK(got == oracles::redundancy_oracle(ranked, passage, wi));

    // Output word ranges are pairwise disjoint.
    std::vector<char> used(n_words, 0);
    for (const AnswerCandidate& c : got) {
      const WordSpan ws = char_span_to_word_span(wi, c.start_char, c.end_char);
      for (std::size_t w = ws.first; w <= ws.last; ++w) {
        CHECK(used[w] == 0);
        used[w] = 1;
      }
    }
  }
}

TEST_CASE("uninformative: answers covered by the question after stemming") {
  const StemmerConfig stemmer = StemmerConfig::defaults();
  const StopwordList stopwords = StopwordList::defaults();
  const std::string question = "ما هي شجرة الزقوم";

  AnswerCandidate ans;
  ans.text = "الزقوم";
  CHECK(is_uninformative(ans, question, stemmer, stopwords));

  ans.text = "التفاحة";
  CHECK_FALSE(is_uninformative(ans, question, stemmer, stopwords));

  // Stems match across different surface forms.
  ans.text = "للكاتب";
  CHECK(is_uninformative(ans, "أين ذهب الكاتبون", stemmer, stopwords));
}

TEST_CASE("uninformative: stopword-only answers") {
  const StemmerConfig stemmer = StemmerConfig::defaults();
  const StopwordList stopwords = StopwordList::defaults();
  const std::string question = "كم عدد الايام";

  AnswerCandidate ans;
  ans.text = "ثم";
  CHECK(is_uninformative(ans, question, stemmer, stopwords));
  ans.text = "اذا ليس ثم";
  CHECK(is_uninformative(ans, question, stemmer, stopwords));
  ans.text = "ثم جاء";  // non-stopword token not in the question
  CHECK_FALSE(is_uninformative(ans, question, stemmer, stopwords));
  ans.text = "";
  CHECK(is_uninformative(ans, question, stemmer, stopwords));
}

TEST_CASE("run_pipeline is the identity on already-clean answers") {
  Sample sample;
  sample.pq_id = "s";
  sample.question = "what is it";
  sample.passage = "aa bb cc dd ee ff gg hh jj kk";
  const AnswerList input = {
      span_of(sample.passage, 0, 2, 0.9), span_of(sample.passage, 3, 5, 0.8),
      span_of(sample.passage, 6, 8, 0.7), span_of(sample.passage, 9, 11, 0.6),
      span_of(sample.passage, 12, 14, 0.5)};
  CHECK(run_pipeline(input, sample, latin_config()) == input);
}

TEST_CASE("run_pipeline on an empty list yields an empty list") {
  Sample sample;
  sample.pq_id = "s";
  sample.question = "q";
  sample.passage = "aa bb";
  CHECK(run_pipeline({}, sample, latin_config()).empty());
}

TEST_CASE("run_pipeline dedups exact texts and truncates") {
  Sample sample;
  sample.pq_id = "s";
  sample.question = "what";
  sample.passage = "aa bb cc dd ee ff gg";

  PipelineConfig cfg = latin_config();
  cfg.stage_order = {};  // isolate the always-on dedup + truncate tail
  cfg.final_top_n = 3;

  AnswerList input;
  for (std::size_t w = 0; w < 7; w += 3) {
    input.push_back(span_of(sample.passage, 0, 2, 0.9));  // duplicate "aa"
  }
  input.push_back(span_of(sample.passage, 3, 5, 0.8));
  input.push_back(span_of(sample.passage, 6, 8, 0.7));
  input.push_back(span_of(sample.passage, 9, 11, 0.6));

  const AnswerList out = run_pipeline(input, sample, cfg);
  REQUIRE(out.size() == 3);
  CHECK(out[0].text == "aa");
  CHECK(out[0].probability == 0.9);
  CHECK(out[1].text == "bb");
  CHECK(out[2].text == "cc");
}

TEST_CASE("run_pipeline lifts a buried gold span into the top ranks") {
  Sample sample;
  sample.pq_id = "s";
  sample.question = "what is it";
  sample.passage = "aa bb cc dd ee ff gg hh";
  // Top five answers all overlap words 0..4; the useful span is rank 6.
  const AnswerList raw = {
      span_of(sample.passage, 0, 8, 0.9),   // words 0-2
      span_of(sample.passage, 0, 5, 0.8),   // words 0-1 (covered)
      span_of(sample.passage, 3, 11, 0.7),  // words 1-3 -> emits "dd"
      span_of(sample.passage, 0, 11, 0.6),  // covered
      span_of(sample.passage, 6, 14, 0.5),  // words 2-4 -> emits "ee"
      span_of(sample.passage, 18, 23, 0.4)  // "gg hh", the gold region
  };
  const AnswerList out = run_pipeline(raw, sample, latin_config());
  REQUIRE(out.size() == 4);
  CHECK(out[0].text == "aa bb cc");
  CHECK(out[1].text == "dd");
  CHECK(out[2].text == "ee");
  CHECK(out[3].text == "gg hh");  // within the top 5 now
}

TEST_CASE("run_pipeline keep-uninformative variant retains stopword answers") {
  Sample sample;
  sample.pq_id = "s";
  sample.question = "كم عدد الايام";
  sample.passage = "ثم جاء الفرج بعد الشدة";
  const AnswerList raw = {span_of(sample.passage, 0, 2, 0.9),   // "ثم"
                          span_of(sample.passage, 3, 6, 0.8)};  // "جاء"

  PipelineConfig remove;
  const AnswerList removed = run_pipeline(raw, sample, remove);
  REQUIRE(!removed.empty());
  CHECK(removed[0].text == "جاء");

  PipelineConfig keep;
  keep.remove_uninformative = false;
  const AnswerList kept = run_pipeline(raw, sample, keep);
  REQUIRE(!kept.empty());
  CHECK(kept[0].text == "ثم");
}

TEST_CASE("run_pipeline output is word-aligned and substring-locatable") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    Sample sample;
    sample.pq_id = "s";
    sample.question = "what is it";
    sample.passage = fixtures::make_passage(2 + rng() % 10);
    const std::size_t len = utf8::length(sample.passage);
    const WordIndex wi = WordIndex::build(sample.passage);

    AnswerList raw;
    for (std::size_t a = 0; a < 8; ++a) {
      const std::size_t start = rng() % len;
      const std::size_t end = start + 1 + rng() % (len - start);
      raw.push_back(span_of(sample.passage, start, end,
                            static_cast<double>(rng() % 100) / 100.0));
    }
    const AnswerList out = run_pipeline(raw, sample, latin_config());
    CHECK(out.size() <= 5);
    for (const AnswerCandidate& c : out) {
      CHECK(sample.passage.find(c.text) != std::string::npos);
      const WordSpan ws = char_span_to_word_span(wi, c.start_char, c.end_char);
      CHECK(wi.words()[ws.first].start_char == c.start_char);
      CHECK(wi.words()[ws.last].end_char == c.end_char);
    }

    // Idempotence: a second pass changes nothing.
    CHECK(run_pipeline(out, sample, latin_config()) == out);
  }
}

TEST_CASE("run-level pipeline is schedule independent and validates ids") {
  const std::vector<Sample> dataset = fixtures::make_synthetic_dataset(40, 51, 8);
  std::mt19937_64 rng(53);

  EnsembleRun run;
  for (const Sample& sample : dataset) {
    const std::size_t len = utf8::length(sample.passage);
    AnswerList list;
    for (int a = 0; a < 10; ++a) {
      const std::size_t start = rng() % len;
      const std::size_t end = start + 1 + rng() % (len - start);
      list.push_back(span_of(sample.passage, start, end,
                             static_cast<double>(rng() % 100) / 100.0));
    }
    run.answers[sample.pq_id] = std::move(list);
  }

  const EnsembleRun parallel = run_pipeline(run, dataset, latin_config());
  ::setenv("SPANRANK_THREADS", "1", 1);
  const EnsembleRun serial = run_pipeline(run, dataset, latin_config());
  ::unsetenv("SPANRANK_THREADS");
  CHECK(parallel.answers == serial.answers);

  EnsembleRun stray = run;
  stray.answers["unknown-id"] = {};
  CHECK_THROWS_AS(run_pipeline(stray, dataset, latin_config()), ValidationError);
}
