#include "spanrank/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "spanrank/arabic_text.hpp"

namespace spanrank {

namespace {

std::vector<std::string> comparison_tokens(std::string_view text,
                                           const MetricsOptions& opts) {
  return tokenize(text, {.unify_letters = opts.unify_letters});
}

// Mean that does not depend on the order of `values` (floating-point
// addition is not associative, and aggregate scores must be invariant
// under dataset permutation).
double stable_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::size_t bin_of(double prr_value, std::size_t bins) {
  // First bin is [0, 1/bins], the rest are right-closed (i/bins, (i+1)/bins].
  for (std::size_t i = 0; i + 1 < bins; ++i) {
    if (prr_value <= static_cast<double>(i + 1) / static_cast<double>(bins)) return i;
  }
  return bins - 1;
}

std::string fmt_double(double v) { return nlohmann::json(v).dump(); }

}  // namespace

double token_f1(std::string_view pred, std::string_view gold,
                const MetricsOptions& opts) {
  const std::vector<std::string> p = comparison_tokens(pred, opts);
  const std::vector<std::string> g = comparison_tokens(gold, opts);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;

  std::map<std::string, std::size_t> gold_counts;
  for (const std::string& t : g) ++gold_counts[t];
  std::size_t common = 0;
  for (const std::string& t : p) {
    auto it = gold_counts.find(t);
    if (it != gold_counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  // 2PR/(P+R) with P = common/|p|, R = common/|g| simplifies to this.
  return 2.0 * static_cast<double>(common) / static_cast<double>(p.size() + g.size());
}

double partial_match(std::string_view pred, const std::vector<GoldAnswer>& golds,
                     const MetricsOptions& opts) {
  if (golds.empty()) throw std::invalid_argument("partial_match: no gold answers");
  double best = 0.0;
  for (const GoldAnswer& gold : golds) {
    best = std::max(best, token_f1(pred, gold.text, opts));
  }
  return best;
}

SampleScore prr(const AnswerList& ranked, const std::vector<GoldAnswer>& golds,
                const MetricsOptions& opts) {
  SampleScore score;
  const std::size_t n = std::min<std::size_t>(ranked.size(), opts.eval_top_n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = partial_match(ranked[i].text, golds, opts);
    if (m > 0.0) {
      score.first_hit_rank = i + 1;
      score.match_at_hit = m;
      score.prr = m / static_cast<double>(i + 1);
      break;
    }
  }
  return score;
}

int exact_match(const AnswerList& ranked, const std::vector<GoldAnswer>& golds,
                const MetricsOptions& opts) {
  if (ranked.empty()) return 0;
  const NormalizeOptions norm{.unify_letters = opts.unify_letters};
  const std::string top = normalize(ranked.front().text, norm);
  for (const GoldAnswer& gold : golds) {
    if (top == normalize(gold.text, norm)) return 1;
  }
  return 0;
}

EvaluationReport evaluate(const EnsembleRun& run, const std::vector<Sample>& dataset,
                          const MetricsOptions& opts) {
  if (opts.eval_top_n < 1) throw std::invalid_argument("evaluate: eval_top_n must be >= 1");
  if (opts.histogram_bins < 1) {
    throw std::invalid_argument("evaluate: histogram_bins must be >= 1");
  }

  std::set<std::string> ids;
  std::string gold_free;
  for (const Sample& s : dataset) {
    ids.insert(s.pq_id);
    if (s.gold_answers.empty()) gold_free += (gold_free.empty() ? "" : ", ") + s.pq_id;
  }
  if (!gold_free.empty()) {
    throw ValidationError("evaluate: samples without gold answers: " + gold_free);
  }
  std::string unknown;
  for (const auto& [pq_id, answers] : run.answers) {
    if (ids.count(pq_id) == 0) unknown += (unknown.empty() ? "" : ", ") + pq_id;
  }
  if (!unknown.empty()) {
    throw ValidationError("evaluate: run contains pq_ids not in dataset: " + unknown);
  }

  EvaluationReport report;
  report.histogram.assign(opts.histogram_bins, 0);
  for (const Sample& sample : dataset) {
    SampleScore score;
    score.pq_id = sample.pq_id;
    const auto it = run.answers.find(sample.pq_id);
    if (it == run.answers.end() || it->second.empty()) {
      if (it == run.answers.end()) {
        report.warnings.push_back(sample.pq_id + ": missing from run, scored 0");
      }
    } else {
      const AnswerList& ranked = it->second;
      const SampleScore partial = prr(ranked, sample.gold_answers, opts);
      score.prr = partial.prr;
      score.first_hit_rank = partial.first_hit_rank;
      score.match_at_hit = partial.match_at_hit;
      score.em = exact_match(ranked, sample.gold_answers, opts);
      score.f1_at_1 = partial_match(ranked.front().text, sample.gold_answers, opts);
    }
    ++report.histogram[bin_of(score.prr, opts.histogram_bins)];
    report.per_sample.push_back(std::move(score));
  }

  report.n_samples = report.per_sample.size();
  std::vector<double> prrs, ems, f1s;
  prrs.reserve(report.n_samples);
  ems.reserve(report.n_samples);
  f1s.reserve(report.n_samples);
  for (const SampleScore& s : report.per_sample) {
    prrs.push_back(s.prr);
    ems.push_back(static_cast<double>(s.em));
    f1s.push_back(s.f1_at_1);
  }
  report.mean_prr = stable_mean(std::move(prrs));
  report.mean_em = stable_mean(std::move(ems));
  report.mean_f1 = stable_mean(std::move(f1s));
  return report;
}

std::string report_to_json(const EvaluationReport& report) {
  nlohmann::json per_sample = nlohmann::json::array();
  for (const SampleScore& s : report.per_sample) {
    nlohmann::json j{{"pq_id", s.pq_id},
                     {"prr", s.prr},
                     {"em", s.em},
                     {"f1_at_1", s.f1_at_1},
                     {"match_at_hit", s.match_at_hit}};
    if (s.first_hit_rank) {
      j["first_hit_rank"] = *s.first_hit_rank;
    } else {
      j["first_hit_rank"] = nullptr;
    }
    per_sample.push_back(std::move(j));
  }
  nlohmann::json root{
      {"summary",
       {{"prr", report.mean_prr},
        {"em", report.mean_em},
        {"f1_at_1", report.mean_f1},
        {"n_samples", report.n_samples}}},
      {"per_sample", std::move(per_sample)},
      {"histogram", report.histogram},
      {"warnings", report.warnings}};
  return root.dump(2) + "\n";
}

EvaluationReport report_from_json(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  EvaluationReport report;
  try {
    const nlohmann::json& summary = root.at("summary");
    report.mean_prr = summary.at("prr").get<double>();
    report.mean_em = summary.at("em").get<double>();
    report.mean_f1 = summary.at("f1_at_1").get<double>();
    report.n_samples = summary.at("n_samples").get<std::size_t>();
    report.histogram = root.at("histogram").get<std::vector<std::size_t>>();
    if (root.contains("warnings")) {
      report.warnings = root["warnings"].get<std::vector<std::string>>();
    }
    for (const nlohmann::json& j : root.at("per_sample")) {
      SampleScore s;
      s.pq_id = j.at("pq_id").get<std::string>();
      s.prr = j.at("prr").get<double>();
      s.em = j.at("em").get<int>();
      s.f1_at_1 = j.at("f1_at_1").get<double>();
      s.match_at_hit = j.at("match_at_hit").get<double>();
      if (j.contains("first_hit_rank") && !j["first_hit_rank"].is_null()) {
        s.first_hit_rank = j["first_hit_rank"].get<std::size_t>();
      }
      report.per_sample.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return report;
}

void save_report(const std::filesystem::path& path, const EvaluationReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write report file: " + path.string());
  out << report_to_json(report);
}

EvaluationReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open report file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return report_from_json(buf.str());
}

std::string report_to_tsv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "pq_id\tprr\tem\tf1_at_1\tfirst_hit_rank\tmatch_at_hit\n";
  for (const SampleScore& s : report.per_sample) {
    out << s.pq_id << '\t' << fmt_double(s.prr) << '\t' << s.em << '\t'
        << fmt_double(s.f1_at_1) << '\t';
    if (s.first_hit_rank) {
      out << *s.first_hit_rank;
    } else {
      out << '-';
    }
    out << '\t' << fmt_double(s.match_at_hit) << '\n';
  }
  return out.str();
}

namespace {

// Label for bin i of n over [0,1]: "(0.3,0.4]" style, "[0.0,0.1]" first.
std::string bin_label(std::size_t i, std::size_t n) {
  auto edge = [n](std::size_t k) {
    std::ostringstream s;
    s.precision(2);
    s << std::fixed << static_cast<double>(k) / static_cast<double>(n);
    return s.str();
  };
  std::string open = i == 0 ? "[" : "(";
  return open + edge(i) + "," + edge(i + 1) + "]";
}

}  // namespace

std::string render_histogram_text(const EvaluationReport& report) {
  const std::size_t bins = report.histogram.size();
  const std::size_t peak =
      bins == 0 ? 0 : *std::max_element(report.histogram.begin(), report.histogram.end());
  std::ostringstream out;
  out << "pRR distribution over " << report.n_samples << " samples\n";
  for (std::size_t i = 0; i < bins; ++i) {
    const std::size_t count = report.histogram[i];
    const std::size_t width =
        peak == 0 ? 0 : (count * 50 + peak - 1) / peak;  // ceil, max 50 chars
    out << bin_label(i, bins) << ' ' << std::string(width, '#') << ' ' << count << '\n';
  }
  return out.str();
}

std::string render_histogram_svg(const EvaluationReport& report) {
  const std::size_t bins = report.histogram.size();
  const std::size_t peak =
      bins == 0 ? 0 : *std::max_element(report.histogram.begin(), report.histogram.end());
  const int chart_w = 640, chart_h = 320, margin = 40, gap = 4;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart_w + 2 * margin
      << "\" height=\"" << chart_h + 2 * margin << "\">\n";
  out << "  <text x=\"" << margin << "\" y=\"" << margin - 16
      << "\" font-family=\"sans-serif\" font-size=\"14\">pRR distribution ("
      << report.n_samples << " samples)</text>\n";
  if (bins > 0) {
    const int bar_w = (chart_w - gap * static_cast<int>(bins - 1)) / static_cast<int>(bins);
    for (std::size_t i = 0; i < bins; ++i) {
      const int h = peak == 0
                        ? 0
                        : static_cast<int>(static_cast<double>(report.histogram[i]) /
                                           static_cast<double>(peak) * chart_h);
      const int x = margin + static_cast<int>(i) * (bar_w + gap);
      const int y = margin + chart_h - h;
      out << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w
          << "\" height=\"" << h << "\" fill=\"#4477aa\"/>\n";
      out << "  <text x=\"" << x + bar_w / 2 << "\" y=\"" << margin + chart_h + 16
          << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
          << bin_label(i, bins) << "</text>\n";
      out << "  <text x=\"" << x + bar_w / 2 << "\" y=\"" << y - 4
          << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
          << report.histogram[i] << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace spanrank
