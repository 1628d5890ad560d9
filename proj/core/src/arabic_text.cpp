#include "spanrank/arabic_text.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spanrank/types.hpp"
#include "spanrank/utf8.hpp"

namespace spanrank {

namespace {

constexpr char32_t kTatweel = 0x0640;

char32_t unify_letter(char32_t cp) {
  switch (cp) {
    case 0x0622:  // alef madda
    case 0x0623:  // alef hamza above
    case 0x0625:  // alef hamza below
      return 0x0627;
    case 0x0649:  // alef maqsura
      return 0x064A;
    default:
      return cp;
  }
}

}  // namespace

std::string normalize(std::string_view text, NormalizeOptions opts) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t cp : utf8::decode(text)) {
    if (utf8::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (cp == kTatweel) continue;
    if (opts.unify_letters) cp = unify_letter(cp);
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    utf8::append(out, cp);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text, NormalizeOptions opts) {
  std::vector<std::string> tokens;
  std::string norm = normalize(text, opts);
  std::size_t pos = 0;
  while (pos < norm.size()) {
    std::size_t sp = norm.find(' ', pos);
    if (sp == std::string::npos) sp = norm.size();
    tokens.emplace_back(norm.substr(pos, sp - pos));
    pos = sp + 1;
  }
  return tokens;
}

StemmerConfig StemmerConfig::defaults() {
  StemmerConfig cfg;
  cfg.strip_prefixes = {"و", "ف", "ب", "ك", "ل", "ال", "وال", "بال", "كال", "فال", "لل"};
  cfg.strip_suffixes = {"ها", "ان", "ات", "ون", "ين", "يه", "ية", "ه", "ة", "ي"};
  cfg.min_stem_len = 2;
  return cfg;
}

StemmerConfig StemmerConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open stemmer config: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("stemmer config " + path.string() + ": " + e.what());
  }
  StemmerConfig cfg = defaults();
  if (j.contains("strip_prefixes")) cfg.strip_prefixes = j["strip_prefixes"].get<std::vector<std::string>>();
  if (j.contains("strip_suffixes")) cfg.strip_suffixes = j["strip_suffixes"].get<std::vector<std::string>>();
  if (j.contains("min_stem_len")) cfg.min_stem_len = j["min_stem_len"].get<std::size_t>();
  return cfg;
}

namespace {

// Longest affix that matches and keeps at least min_stem_len code points;
// among equal lengths the first listed wins.
std::size_t pick_affix(const std::vector<char32_t>& token,
                       const std::vector<std::string>& affixes, bool prefix,
                       std::size_t min_len) {
  std::size_t best = 0;
  for (const std::string& affix : affixes) {
    std::vector<char32_t> a = utf8::decode(affix);
    if (a.empty() || a.size() <= best) continue;
    if (token.size() < a.size() + min_len) continue;
    bool match = prefix ? std::equal(a.begin(), a.end(), token.begin())
                        : std::equal(a.rbegin(), a.rend(), token.rbegin());
    if (match) best = a.size();
  }
  return best;
}

}  // namespace

std::string stem(std::string_view token, const StemmerConfig& cfg) {
  std::vector<char32_t> t = utf8::decode(token);
  std::size_t p = pick_affix(t, cfg.strip_prefixes, /*prefix=*/true, cfg.min_stem_len);
  if (p > 0) t.erase(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(p));
  std::size_t s = pick_affix(t, cfg.strip_suffixes, /*prefix=*/false, cfg.min_stem_len);
  if (s > 0) t.resize(t.size() - s);
  return utf8::encode(t);
}

StopwordList StopwordList::defaults() {
  // MSA function words; the inventory is a project default, overridable
  // from a file. Entries are canonicalized below, so variant spellings
  // (hamza-carrying alefs, alef maqsura) collapse together.
  static const char* const kWords[] = {
      "من",    "في",    "على",   "الى",    "عن",    "مع",    "عند",   "حتى",
      "اذ",    "اذا",   "ان",    "أن",     "إن",    "انه",   "انها",  "لا",
      "ما",    "لم",    "لن",    "لو",     "ليس",   "ليست",  "ثم",    "او",
      "ام",    "اما",   "بل",    "قد",     "لقد",   "كل",    "بعض",   "غير",
      "بين",   "قبل",   "بعد",   "فوق",    "تحت",   "دون",   "حول",   "هذا",
      "هذه",   "ذلك",   "تلك",   "هؤلاء",  "اولئك", "الذي",  "التي",  "الذين",
      "اللاتي", "اللائي", "هو",    "هي",     "هم",    "هن",    "هما",   "انت",
      "انتم",  "نحن",   "انا",   "كان",    "كانت",  "كانوا", "يكون",  "تكون",
      "فيه",   "فيها",  "فيهم",  "منه",    "منها",  "منهم",  "به",    "بها",
      "بهم",   "له",    "لها",   "لهم",    "عليه",  "عليها", "عليهم", "اليه",
      "اليها", "اليهم", "كما",   "لما",    "فيما",  "مما",   "عما",   "هل",
      "الا",   "هنا",   "هناك",  "يا",     "اي",    "كيف",   "متى",   "اين",
      "ماذا",  "لماذا", "لدى",   "ذو",     "ذات",   "كذلك",  "ايضا",  "اذن",
  };
  std::vector<std::string> words(std::begin(kWords), std::end(kWords));
  return from_words(words);
}

StopwordList StopwordList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open stopword file: " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string word = normalize(line);
    if (!word.empty()) words.push_back(std::move(word));
  }
  return from_words(words);
}

StopwordList StopwordList::from_words(const std::vector<std::string>& words) {
  StopwordList list;
  for (const std::string& w : words) {
    std::string canon = normalize(w);
    if (!canon.empty()) list.words_.insert(std::move(canon));
  }
  return list;
}

bool StopwordList::contains(std::string_view token) const {
  return words_.count(normalize(token)) > 0;
}

bool is_stopword(std::string_view token, const StopwordList& list) {
  return list.contains(token);
}

}  // namespace spanrank
