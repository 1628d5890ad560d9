#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "spanrank/arabic_text.hpp"
#include "spanrank/types.hpp"
#include "spanrank/utf8.hpp"

using namespace spanrank;

TEST_CASE("utf8 length and byte offsets") {
  CHECK(utf8::length("") == 0);
  CHECK(utf8::length("abc") == 3);
  CHECK(utf8::length("قال") == 3);

  // 'a' is 1 byte, Arabic qaf is 2 bytes.
  const std::vector<std::size_t> offs = utf8::byte_offsets("aقb");
  CHECK(offs == std::vector<std::size_t>{0, 1, 3, 4});
}

TEST_CASE("utf8 slice uses code point units") {
  const std::string text = "قال الرجل";
  const auto offs = utf8::byte_offsets(text);
  CHECK(utf8::slice(text, offs, 4, 9) == "الرجل");
  CHECK(utf8::slice(text, 0, 3) == "قال");
  CHECK(utf8::slice(text, 3, 4) == " ");
  CHECK(utf8::slice(text, 9, 9) == "");
}

TEST_CASE("utf8 decode/encode round trip") {
  const std::string text = "aقbى y";
  CHECK(utf8::encode(utf8::decode(text)) == text);
}

TEST_CASE("utf8 malformed bytes decode to replacement and advance") {
  std::string bad = "a";
  bad += static_cast<char>(0xFF);
  bad += "b";
  const std::vector<char32_t> cps = utf8::decode(bad);
  REQUIRE(cps.size() == 3);
  CHECK(cps[0] == U'a');
  CHECK(cps[1] == 0xFFFD);
  CHECK(cps[2] == U'b');
}

TEST_CASE("normalize collapses whitespace") {
  CHECK(normalize("  ab   cd ") == "ab cd");
  CHECK(normalize("a\t\nb") == "a b");
  CHECK(normalize("") == "");
  CHECK(normalize("   ") == "");
}

TEST_CASE("normalize strips tatweel") {
  CHECK(normalize("قـــال") == "قال");
}

TEST_CASE("normalize unifies alef variants and alef maqsura") {
  CHECK(normalize("أحمد") == "احمد");
  CHECK(normalize("إن") == "ان");
  CHECK(normalize("آمن") == "امن");
  CHECK(normalize("هدى") == "هدي");

  NormalizeOptions strict{.unify_letters = false};
  CHECK(normalize("أحمد", strict) == "أحمد");
  CHECK(normalize("هدى", strict) == "هدى");
}

TEST_CASE("normalize is idempotent on random strings") {
  const char32_t alphabet[] = {U'ا', U'أ', U'إ', U'آ', U'ى', U'ي', U'ب',
                               U'ق', U'ـ', U' ', U'\t', U'a'};
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const std::size_t len = rng() % 24;
    for (std::size_t i = 0; i < len; ++i) {
      utf8::append(text, alphabet[rng() % std::size(alphabet)]);
    }
    const std::string once = normalize(text);
    CHECK(normalize(once) == once);
    NormalizeOptions strict{.unify_letters = false};
    const std::string strict_once = normalize(text, strict);
    CHECK(normalize(strict_once, strict) == strict_once);
  }
}

TEST_CASE("tokenize splits normalized text on spaces") {
  CHECK(tokenize("قال الرجل") == std::vector<std::string>{"قال", "الرجل"});
  CHECK(tokenize("  a   b ") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("   ").empty());
}

TEST_CASE("stem strips the documented affixes") {
  const StemmerConfig cfg = StemmerConfig::defaults();
  CHECK(stem("الزقوم", cfg) == "زقوم");      // prefix ال
  CHECK(stem("مسلمون", cfg) == "مسلم");      // suffix ون
  CHECK(stem("والمسلمون", cfg) == "مسلم");   // longest prefix وال, then suffix
  CHECK(stem("كتاب", cfg) == "تاب");         // bare ك counts as a prefix
  CHECK(stem("نور", cfg) == "نور");          // no matching affix
}

TEST_CASE("stem never goes below min_stem_len") {
  const StemmerConfig cfg = StemmerConfig::defaults();
  CHECK(stem("من", cfg) == "من");  // already at the floor
  // Stripping the prefix leaves two letters; the suffix would empty it.
  CHECK(stem("لين", cfg) == "ين");
  CHECK(stem("و", cfg) == "و");
  CHECK(stem("", cfg) == "");
}

TEST_CASE("stem output is a substring and respects the floor on random tokens") {
  const StemmerConfig cfg = StemmerConfig::defaults();
  const char32_t alphabet[] = {U'ا', U'ل', U'و', U'ب', U'ك', U'م',
                               U'ن', U'ي', U'ه', U'ة', U'ت', U'س'};
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::string token;
    const std::size_t len = 1 + rng() % 8;
    for (std::size_t i = 0; i < len; ++i) {
      utf8::append(token, alphabet[rng() % std::size(alphabet)]);
    }
    const std::string out = stem(token, cfg);
    CHECK(token.find(out) != std::string::npos);
    CHECK(utf8::length(out) >= std::min(utf8::length(token), cfg.min_stem_len));
  }
}

TEST_CASE("stemmer config loads overrides from JSON") {
  fixtures::TempDir tmp("stemmer_cfg");
  fixtures::write_file(tmp.file("cfg.json"),
                       R"({"strip_prefixes": ["ال"], "min_stem_len": 3})");
  const StemmerConfig cfg = StemmerConfig::from_json_file(tmp.file("cfg.json"));
  CHECK(cfg.strip_prefixes == std::vector<std::string>{"ال"});
  CHECK(cfg.min_stem_len == 3);
  // Suffix table keeps its default.
  CHECK(cfg.strip_suffixes == StemmerConfig::defaults().strip_suffixes);

  CHECK(stem("والمسلمون", cfg) == "والمسلم");  // وال no longer stripped
  CHECK(stem("الزقوم", cfg) == "زقوم");

  CHECK_THROWS_AS(StemmerConfig::from_json_file(tmp.file("absent.json")), ParseError);
  fixtures::write_file(tmp.file("bad.json"), "{");
  CHECK_THROWS_AS(StemmerConfig::from_json_file(tmp.file("bad.json")), ParseError);
}

TEST_CASE("default stopword list matches the documented inventory") {
  const StopwordList list = StopwordList::defaults();
  CHECK(list.contains("ثم"));
  CHECK(list.contains("اذا"));
  CHECK(list.contains("ليس"));
  CHECK(list.contains("من"));
  CHECK_FALSE(list.contains("الزقوم"));
  CHECK_FALSE(list.contains(""));
}

TEST_CASE("stopword lookup normalizes its argument") {
  const StopwordList list = StopwordList::defaults();
  CHECK(list.contains("إن"));     // alef variant of ان
  CHECK(list.contains(" ثم "));   // surrounding whitespace
  CHECK(is_stopword("ثم", list));
}

TEST_CASE("stopword files support comments and blank lines") {
  fixtures::TempDir tmp("stopwords");
  fixtures::write_file(tmp.file("words.txt"), "# comment\nفوق\n\nتحت # trailing\n");
  const StopwordList list = StopwordList::from_file(tmp.file("words.txt"));
  CHECK(list.size() == 2);
  CHECK(list.contains("فوق"));
  CHECK(list.contains("تحت"));
  CHECK_FALSE(list.contains("ثم"));
  CHECK_THROWS_AS(StopwordList::from_file(tmp.file("absent.txt")), ParseError);
}

TEST_CASE("stopword construction canonicalizes entries") {
  const StopwordList list = StopwordList::from_words({"أن", "هدى "});
  CHECK(list.contains("ان"));
  CHECK(list.contains("هدي"));
}
