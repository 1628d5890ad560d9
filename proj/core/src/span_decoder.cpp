#include "spanrank/span_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "spanrank/utf8.hpp"

namespace spanrank {

void ExpertDump::validate() const {
  const std::size_t n = start_scores.size();
  if (n == 0) throw ValidationError("dump " + pq_id + ": no tokens");
  if (end_scores.size() != n || token_offsets.size() != n ||
      token_is_continuation.size() != n) {
    throw ValidationError("dump " + pq_id + ": field lengths differ");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (token_offsets[t].start_char >= token_offsets[t].end_char) {
      throw ValidationError("dump " + pq_id + ": empty token at index " +
                            std::to_string(t));
    }
    if (t > 0 && token_offsets[t].start_char < token_offsets[t - 1].end_char) {
      throw ValidationError("dump " + pq_id + ": overlapping token offsets at index " +
                            std::to_string(t));
    }
  }
}

namespace {

void check_scores(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("softmax: empty input");
  for (double x : scores) {
    if (!std::isfinite(x)) throw std::invalid_argument("softmax: non-finite input");
  }
}

}  // namespace

std::vector<double> softmax(std::span<const double> scores) {
  check_scores(scores);
  const double m = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - m);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> log_softmax(std::span<const double> scores) {
  check_scores(scores);
  const double m = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double x : scores) sum += std::exp(x - m);
  const double log_sum = std::log(sum);
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] - m - log_sum;
  return out;
}

AnswerList decode_topk(const ExpertDump& dump, std::string_view passage, std::size_t k,
                       std::size_t max_answer_tokens) {
  if (k < 1) throw std::invalid_argument("decode_topk: k must be >= 1");
  if (max_answer_tokens < 1) {
    throw std::invalid_argument("decode_topk: max_answer_tokens must be >= 1");
  }
  dump.validate();

  const std::vector<std::size_t> offs = utf8::byte_offsets(passage);
  const std::size_t passage_len = offs.size() - 1;
  const std::size_t n = dump.start_scores.size();
  if (dump.token_offsets.back().end_char > passage_len) {
    throw ValidationError("dump " + dump.pq_id + ": token offsets exceed passage length");
  }

  struct SpanKey {
    std::size_t i, j;
    double score;
  };
  std::vector<SpanKey> spans;
  spans.reserve(n * std::min(max_answer_tokens, n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j_end = std::min(n, i + max_answer_tokens);
    for (std::size_t j = i; j < j_end; ++j) {
      spans.push_back({i, j, dump.start_scores[i] + dump.end_scores[j]});
    }
  }

  const auto better = [](const SpanKey& a, const SpanKey& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.i != b.i) return a.i < b.i;
    return a.j - a.i < b.j - b.i;
  };
  const std::size_t take = std::min(k, spans.size());
  std::partial_sort(spans.begin(), spans.begin() + static_cast<std::ptrdiff_t>(take),
                    spans.end(), better);
  spans.resize(take);

  // Scores rank; probabilities come from the independent start/end softmax
  // distributions, renormalized over the returned list. Kept in log space
  // so extreme score ranges cannot underflow the normalizer.
  const std::vector<double> ls = log_softmax(dump.start_scores);
  const std::vector<double> le = log_softmax(dump.end_scores);
  std::vector<double> logp(take);
  double max_logp = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < take; ++t) {
    logp[t] = ls[spans[t].i] + le[spans[t].j];
    max_logp = std::max(max_logp, logp[t]);
  }
  double z = 0.0;
  for (double lp : logp) z += std::exp(lp - max_logp);
  const double log_z = max_logp + std::log(z);

  AnswerList out;
  out.reserve(take);
  for (std::size_t t = 0; t < take; ++t) {
    const TokenSpan& first = dump.token_offsets[spans[t].i];
    const TokenSpan& last = dump.token_offsets[spans[t].j];
    AnswerCandidate cand;
    cand.start_char = first.start_char;
    cand.end_char = last.end_char;
    cand.text = std::string(utf8::slice(passage, offs, cand.start_char, cand.end_char));
    cand.probability =
        std::max(std::exp(logp[t] - log_z), std::numeric_limits<double>::min());
    out.push_back(std::move(cand));
  }
  return out;
}

std::vector<ExpertDump> load_dumps(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open dump file: " + path.string());
  std::vector<ExpertDump> dumps;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ": line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
    ExpertDump d;
    try {
      d.pq_id = j.at("pq_id").get<std::string>();
      d.start_scores = j.at("start_scores").get<std::vector<double>>();
      d.end_scores = j.at("end_scores").get<std::vector<double>>();
      for (const nlohmann::json& o : j.at("token_offsets")) {
        d.token_offsets.push_back(
            {o.at(0).get<std::size_t>(), o.at(1).get<std::size_t>()});
      }
      if (j.contains("token_is_continuation")) {
        d.token_is_continuation = j["token_is_continuation"].get<std::vector<bool>>();
      } else {
        d.token_is_continuation.assign(d.start_scores.size(), false);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
    try {
      d.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    dumps.push_back(std::move(d));
  }
  return dumps;
}

void save_dumps(const std::filesystem::path& path, const std::vector<ExpertDump>& dumps) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write dump file: " + path.string());
  for (const ExpertDump& d : dumps) {
    nlohmann::json offsets = nlohmann::json::array();
    for (const TokenSpan& t : d.token_offsets) {
      offsets.push_back({t.start_char, t.end_char});
    }
    nlohmann::json j{{"pq_id", d.pq_id},
                     {"start_scores", d.start_scores},
                     {"end_scores", d.end_scores},
                     {"token_offsets", std::move(offsets)},
                     {"token_is_continuation", d.token_is_continuation}};
    out << j.dump() << '\n';
  }
}

}  // namespace spanrank
