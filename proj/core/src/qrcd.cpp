#include "spanrank/qrcd.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spanrank/utf8.hpp"

namespace spanrank {

WordIndex WordIndex::build(std::string_view passage) {
  WordIndex wi;
  std::vector<char32_t> cps;
  std::vector<std::size_t> bytes;
  std::size_t i = 0;
  while (i < passage.size()) {
    bytes.push_back(i);
    utf8::Decoded d = utf8::next_code_point(passage, i);
    cps.push_back(d.cp);
    i = d.next;
  }
  bytes.push_back(passage.size());

  const std::size_t n = cps.size();
  std::size_t pos = 0;
  while (pos < n) {
    if (utf8::is_space(cps[pos])) {
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < n && !utf8::is_space(cps[end])) ++end;
    wi.words_.push_back(Word{
        pos, end, std::string(passage.substr(bytes[pos], bytes[end] - bytes[pos]))});
    pos = end;
  }
  return wi;
}

std::optional<WordSpan> WordIndex::find_span(std::size_t start_char,
                                             std::size_t end_char) const {
  if (start_char >= end_char || words_.empty()) return std::nullopt;
  // First word ending after start_char; last word starting before end_char.
  auto first = std::partition_point(
      words_.begin(), words_.end(),
      [&](const Word& w) { return w.end_char <= start_char; });
  if (first == words_.end() || first->start_char >= end_char) return std::nullopt;
  auto past = std::partition_point(
      first, words_.end(), [&](const Word& w) { return w.start_char < end_char; });
  return WordSpan{static_cast<std::size_t>(first - words_.begin()),
                  static_cast<std::size_t>(past - words_.begin()) - 1};
}

WordIndex word_index(std::string_view passage) { return WordIndex::build(passage); }

WordSpan char_span_to_word_span(const WordIndex& wi, std::size_t start_char,
                                std::size_t end_char) {
  if (start_char >= end_char) {
    throw std::invalid_argument("char_span_to_word_span: start_char must be < end_char");
  }
  std::optional<WordSpan> span = wi.find_span(start_char, end_char);
  if (!span) {
    std::ostringstream msg;
    msg << "empty span: characters [" << start_char << ", " << end_char
        << ") cover no word";
    throw ValidationError(msg.str());
  }
  return *span;
}

namespace {

void warn(LoadStats* stats, std::string msg) {
  if (stats != nullptr) stats->warnings.push_back(std::move(msg));
}

Sample parse_record(const nlohmann::json& j, const std::string& where, bool strict,
                    LoadStats* stats) {
  if (!j.is_object()) throw ParseError(where + ": record is not a JSON object");
  Sample s;
  try {
    s.pq_id = j.at("pq_id").get<std::string>();
    s.question = j.at("question").get<std::string>();
    s.passage = j.at("passage").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }

  const std::vector<std::size_t> offs = utf8::byte_offsets(s.passage);
  const std::size_t passage_len = offs.size() - 1;

  if (!j.contains("answers")) return s;
  const nlohmann::json& answers = j.at("answers");
  if (!answers.is_array()) throw ParseError(where + ": \"answers\" is not an array");

  for (const nlohmann::json& ja : answers) {
    GoldAnswer g;
    try {
      g.text = ja.at("text").get<std::string>();
      auto sc = ja.at("start_char").get<long long>();
      if (sc < 0) throw ParseError(where + ": negative start_char");
      g.start_char = static_cast<std::size_t>(sc);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + ": answer: " + e.what());
    }
    const std::size_t text_len = utf8::length(g.text);
    const bool located =
        g.start_char + text_len <= passage_len &&
        utf8::slice(s.passage, offs, g.start_char, g.start_char + text_len) == g.text;
    if (located) {
      s.gold_answers.push_back(std::move(g));
      continue;
    }
    if (strict) {
      throw ValidationError(where + " (pq_id " + s.pq_id + "): gold answer \"" +
                            g.text + "\" does not occur at start_char " +
                            std::to_string(g.start_char));
    }
    const std::size_t byte_pos = g.text.empty() ? std::string::npos
                                                : s.passage.find(g.text);
    if (byte_pos != std::string::npos) {
      auto it = std::lower_bound(offs.begin(), offs.end(), byte_pos);
      g.start_char = static_cast<std::size_t>(it - offs.begin());
      if (stats != nullptr) ++stats->relocated_answers;
      warn(stats, where + " (pq_id " + s.pq_id + "): relocated gold answer to char " +
                      std::to_string(g.start_char));
      s.gold_answers.push_back(std::move(g));
    } else {
      if (stats != nullptr) ++stats->dropped_answers;
      warn(stats, where + " (pq_id " + s.pq_id + "): dropped gold answer \"" + g.text +
                      "\" not found in passage");
    }
  }
  return s;
}

}  // namespace

std::vector<Sample> parse_dataset(std::string_view text, bool strict, LoadStats* stats,
                                  const std::string& source) {
  std::vector<nlohmann::json> records;
  std::vector<std::string> locations;

  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '[') {
    nlohmann::json root;
    try {
      root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source + ": " + e.what());
    }
    for (std::size_t i = 0; i < root.size(); ++i) {
      records.push_back(root[i]);
      locations.push_back(source + ": record " + std::to_string(i + 1));
    }
  } else {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(pos, nl - pos);
      ++line_no;
      pos = nl + 1;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      std::string where = source + ": line " + std::to_string(line_no);
      try {
        records.push_back(nlohmann::json::parse(line));
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(where + ": " + e.what());
      }
      locations.push_back(std::move(where));
    }
  }

  std::vector<Sample> samples;
  std::map<std::string, std::size_t> seen;  // pq_id -> index in samples
  for (std::size_t i = 0; i < records.size(); ++i) {
    Sample s = parse_record(records[i], locations[i], strict, stats);
    auto it = seen.find(s.pq_id);
    if (it == seen.end()) {
      seen[s.pq_id] = samples.size();
      samples.push_back(std::move(s));
      continue;
    }
    if (strict) {
      throw ValidationError(locations[i] + ": duplicate pq_id " + s.pq_id);
    }
    if (stats != nullptr) ++stats->duplicate_ids;
    warn(stats, locations[i] + ": duplicate pq_id " + s.pq_id + ", last record wins");
    samples[it->second] = std::move(s);
  }
  return samples;
}

std::vector<Sample> load_dataset(const std::filesystem::path& path, bool strict,
                                 LoadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open dataset: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), strict, stats, path.string());
}

void save_dataset(const std::filesystem::path& path, const std::vector<Sample>& samples) {
  nlohmann::json root = nlohmann::json::array();
  for (const Sample& s : samples) {
    nlohmann::json answers = nlohmann::json::array();
    for (const GoldAnswer& g : s.gold_answers) {
      answers.push_back({{"text", g.text}, {"start_char", g.start_char}});
    }
    root.push_back({{"pq_id", s.pq_id},
                    {"question", s.question},
                    {"passage", s.passage},
                    {"answers", std::move(answers)}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write dataset: " + path.string());
  out << root.dump(2) << '\n';
}

}  // namespace spanrank
