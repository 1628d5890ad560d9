#include "commands.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include "spanrank/ensemble.hpp"
#include "spanrank/metrics.hpp"
#include "spanrank/parallel.hpp"
#include "spanrank/postprocess.hpp"
#include "spanrank/qrcd.hpp"
#include "spanrank/run_io.hpp"
#include "spanrank/span_decoder.hpp"
#include "spanrank/synth.hpp"

namespace fs = std::filesystem;

namespace spanrank::cli {

namespace {

std::vector<Sample> read_dataset(const fs::path& path, bool lenient) {
  LoadStats stats;
  std::vector<Sample> samples = load_dataset(path, /*strict=*/!lenient, &stats);
  for (const std::string& w : stats.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  return samples;
}

PipelineConfig make_pipeline_config(const std::string& stages, bool keep_uninformative,
                                    std::size_t top_n, const fs::path& stopwords,
                                    const fs::path& stemmer_config) {
  PipelineConfig cfg;
  cfg.stage_order = parse_stages(stages);
  cfg.final_top_n = top_n;
  cfg.remove_uninformative = !keep_uninformative;
  if (!stopwords.empty()) cfg.stopwords = StopwordList::from_file(stopwords);
  if (!stemmer_config.empty()) cfg.stemmer = StemmerConfig::from_json_file(stemmer_config);
  return cfg;
}

std::string pad3(std::size_t i) {
  std::ostringstream s;
  s << std::setw(3) << std::setfill('0') << i;
  return s.str();
}

}  // namespace

void cmd_decode(const DecodeArgs& args) {
  const std::vector<Sample> samples = read_dataset(args.dataset, args.lenient);
  const DatasetIndex index(samples);
  const std::vector<ExpertDump> dumps = load_dumps(args.dumps);

  std::set<std::string> seen;
  for (const ExpertDump& d : dumps) {
    if (!seen.insert(d.pq_id).second) {
      throw ValidationError(args.dumps.string() + ": duplicate pq_id " + d.pq_id);
    }
    index.at(d.pq_id);  // unknown ids fail before any decoding work
  }

  std::vector<AnswerList> decoded(dumps.size());
  parallel_for(dumps.size(), [&](std::size_t i) {
    decoded[i] = decode_topk(dumps[i], index.at(dumps[i].pq_id).passage, args.top_k,
                             args.max_answer_tokens);
  });

  AnswerMap run;
  for (std::size_t i = 0; i < dumps.size(); ++i) {
    run.emplace(dumps[i].pq_id, std::move(decoded[i]));
  }
  save_run_file(args.out, run);
}

void cmd_vote(const VoteArgs& args) {
  std::vector<Sample> samples;
  std::optional<DatasetIndex> index;
  if (!args.dataset.empty()) {
    samples = read_dataset(args.dataset, args.lenient);
    index.emplace(samples);
  }

  std::vector<ExpertRun> runs;
  runs.reserve(args.runs.size());
  for (const fs::path& path : args.runs) {
    ExpertRun run;
    run.expert_id = path.stem().string();
    run.answers = load_run_file(path, index ? &*index : nullptr);
    runs.push_back(std::move(run));
  }
  const EnsembleRun merged = vote(runs);
  save_run_file(args.out, merged.answers);
}

void cmd_postprocess(const PostprocessArgs& args) {
  const std::vector<Sample> samples = read_dataset(args.dataset, args.lenient);
  const DatasetIndex index(samples);
  EnsembleRun run{load_run_file(args.run, &index)};
  const PipelineConfig cfg = make_pipeline_config(
      args.stages, args.keep_uninformative, args.top_n, args.stopwords,
      args.stemmer_config);
  const EnsembleRun processed = run_pipeline(run, samples, cfg);
  save_run_file(args.out, processed.answers);
}

void cmd_evaluate(const EvaluateArgs& args) {
  const std::vector<Sample> samples = read_dataset(args.dataset, args.lenient);
  const DatasetIndex index(samples);
  EnsembleRun run{load_run_file(args.run, &index)};

  MetricsOptions opts;
  opts.unify_letters = !args.strict_text;
  opts.eval_top_n = args.top_n;
  const EvaluationReport report = evaluate(run, samples, opts);

  save_report(args.out, report);
  if (!args.tsv.empty()) {
    std::ofstream tsv(args.tsv, std::ios::binary);
    if (!tsv) throw ParseError("cannot write TSV file: " + args.tsv.string());
    tsv << report_to_tsv(report);
  }
  for (const std::string& w : report.warnings) {
    std::cerr << "warning: " << w << '\n';
  }
  std::cout << std::fixed << std::setprecision(6) << "pRR " << report.mean_prr
            << "  EM " << report.mean_em << "  F1@1 " << report.mean_f1 << "  ("
            << report.n_samples << " samples)\n";
}

void cmd_report(const ReportArgs& args) {
  const EvaluationReport report = load_report(args.report);
  std::string rendered;
  if (args.format == "text") {
    rendered = render_histogram_text(report);
  } else if (args.format == "svg") {
    rendered = render_histogram_svg(report);
  } else if (args.format == "tsv") {
    rendered = report_to_tsv(report);
  } else {
    throw std::invalid_argument("unknown report format: " + args.format);
  }
  if (args.out.empty()) {
    std::cout << rendered;
  } else {
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw ParseError("cannot write output file: " + args.out.string());
    out << rendered;
  }
}

std::string synth_dump_name(std::size_t expert_index) {
  return "expert_" + pad3(expert_index) + ".dumps.jsonl";
}

void cmd_synth(const SynthArgs& args) {
  const std::vector<Sample> samples = read_dataset(args.dataset, args.lenient);
  SynthConfig cfg;
  cfg.seed = args.seed;
  cfg.n_experts = args.experts;
  cfg.noise_sigma = args.sigma;
  cfg.gold_boost = args.gold_boost;
  cfg.subword_fragment_rate = args.fragment_rate;

  fs::create_directories(args.out_dir);
  for (std::size_t i = 0; i < args.experts; ++i) {
    save_dumps(args.out_dir / synth_dump_name(i), synth_expert(samples, cfg, i));
  }
}

void cmd_pipeline(const PipelineArgs& args) {
  const fs::path workdir =
      args.workdir.empty()
          ? args.out.parent_path() / (args.out.filename().string() + ".work")
          : args.workdir;
  fs::create_directories(workdir);

  std::vector<fs::path> expert_runs;
  for (std::size_t i = 0; i < args.dumps.size(); ++i) {
    DecodeArgs decode;
    decode.dumps = args.dumps[i];
    decode.dataset = args.dataset;
    decode.out = workdir / ("expert_" + pad3(i) + ".run.json");
    decode.top_k = args.top_k;
    decode.max_answer_tokens = args.max_answer_tokens;
    decode.lenient = args.lenient;
    cmd_decode(decode);
    expert_runs.push_back(decode.out);
  }

  VoteArgs vote;
  vote.runs = expert_runs;
  vote.dataset = args.dataset;
  vote.out = workdir / "ensemble.run.json";
  vote.lenient = args.lenient;
  cmd_vote(vote);

  PostprocessArgs post;
  post.run = vote.out;
  post.dataset = args.dataset;
  post.out = workdir / "post.run.json";
  post.stages = args.stages;
  post.keep_uninformative = args.keep_uninformative;
  post.top_n = args.top_n;
  post.stopwords = args.stopwords;
  post.stemmer_config = args.stemmer_config;
  post.lenient = args.lenient;
  cmd_postprocess(post);

  EvaluateArgs eval;
  eval.run = post.out;
  eval.dataset = args.dataset;
  eval.out = args.out;
  eval.top_n = args.top_n;
  eval.strict_text = args.strict_text;
  eval.lenient = args.lenient;
  cmd_evaluate(eval);
}

}  // namespace spanrank::cli
