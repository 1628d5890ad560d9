#include "spanrank/run_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spanrank/utf8.hpp"

namespace spanrank {

namespace {

// Code point offset of the first occurrence of `needle` in `haystack`.
std::size_t find_code_point(const std::string& haystack, const std::string& needle,
                            const std::vector<std::size_t>& offs) {
  const std::size_t byte_pos = haystack.find(needle);
  if (byte_pos == std::string::npos) return std::string::npos;
  const auto it = std::lower_bound(offs.begin(), offs.end(), byte_pos);
  return static_cast<std::size_t>(it - offs.begin());
}

}  // namespace

AnswerMap parse_run(std::string_view text, const DatasetIndex* dataset,
                    const std::string& source) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ": " + e.what());
  }
  if (!root.is_object()) {
    throw ParseError(source + ": run file must be a JSON object keyed by pq_id");
  }

  AnswerMap out;
  for (const auto& [pq_id, entries] : root.items()) {
    const std::string where = source + ": " + pq_id;
    if (!entries.is_array()) throw ParseError(where + ": expected an array of answers");

    const Sample* sample = nullptr;
    std::vector<std::size_t> offs;
    if (dataset != nullptr) {
      sample = dataset->find(pq_id);
      if (sample == nullptr) {
        throw ValidationError(where + ": pq_id not present in dataset");
      }
      offs = utf8::byte_offsets(sample->passage);
    }

    struct Ranked {
      long long rank;
      std::size_t order;  // position in file, stabilizes equal ranks
      AnswerCandidate cand;
    };
    std::vector<Ranked> ranked;
    ranked.reserve(entries.size());
    for (const nlohmann::json& e : entries) {
      AnswerCandidate cand;
      long long rank = 0;
      try {
        cand.text = e.at("answer").get<std::string>();
        rank = e.at("rank").get<long long>();
        cand.probability = e.at("score").get<double>();
      } catch (const nlohmann::json::exception& ex) {
        throw ParseError(where + ": " + ex.what());
      }
      if (rank < 1) throw ValidationError(where + ": rank must be 1-based");

      if (e.contains("start_char")) {
        const long long sc = e["start_char"].get<long long>();
        if (sc < 0) throw ValidationError(where + ": negative start_char");
        cand.start_char = static_cast<std::size_t>(sc);
      } else {
        if (sample == nullptr) {
          throw ValidationError(where +
                                ": start_char absent and no dataset to locate \"" +
                                cand.text + "\"");
        }
        const std::size_t cp = find_code_point(sample->passage, cand.text, offs);
        if (cp == std::string::npos) {
          throw ValidationError(where + ": answer \"" + cand.text +
                                "\" does not occur in passage");
        }
        cand.start_char = cp;
      }
      cand.end_char = cand.start_char + utf8::length(cand.text);

      if (sample != nullptr) {
        const std::size_t passage_len = offs.size() - 1;
        if (cand.end_char > passage_len ||
            utf8::slice(sample->passage, offs, cand.start_char, cand.end_char) !=
                cand.text) {
          throw ValidationError(where + ": answer \"" + cand.text +
                                "\" does not match passage at start_char " +
                                std::to_string(cand.start_char));
        }
      }
      ranked.push_back({rank, ranked.size(), std::move(cand)});
    }

    std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
      if (a.rank != b.rank) return a.rank < b.rank;
      return a.order < b.order;
    });
    AnswerList answers;
    answers.reserve(ranked.size());
    for (Ranked& r : ranked) answers.push_back(std::move(r.cand));
    out.emplace(pq_id, std::move(answers));
  }
  return out;
}

AnswerMap load_run_file(const std::filesystem::path& path, const DatasetIndex* dataset) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open run file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run(buf.str(), dataset, path.string());
}

std::string run_to_json(const AnswerMap& answers) {
  nlohmann::json root = nlohmann::json::object();
  for (const auto& [pq_id, list] : answers) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < list.size(); ++i) {
      arr.push_back({{"answer", list[i].text},
                     {"rank", i + 1},
                     {"score", list[i].probability},
                     {"start_char", list[i].start_char}});
    }
    root[pq_id] = std::move(arr);
  }
  return root.dump(2) + "\n";
}

void save_run_file(const std::filesystem::path& path, const AnswerMap& answers) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write run file: " + path.string());
  out << run_to_json(answers);
}

}  // namespace spanrank
