#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Rank, vote, post-process and score extractive QA answer spans"};
  app.require_subcommand(1);

  using namespace spanrank::cli;

  DecodeArgs decode;
  CLI::App* d = app.add_subcommand(
      "decode", "Turn one expert's token-score dump into a ranked run file");
  d->add_option("--dumps", decode.dumps, "expert dump file (JSON-lines)")
      ->required()
      ->check(CLI::ExistingFile);
  d->add_option("--dataset", decode.dataset, "dataset file with passages")
      ->required()
      ->check(CLI::ExistingFile);
  d->add_option("--out", decode.out, "output run file")->required();
  d->add_option("--top-k", decode.top_k, "answer spans to keep per sample")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  d->add_option("--max-answer-tokens", decode.max_answer_tokens,
                "longest span considered, in tokens")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  d->add_flag("--lenient", decode.lenient, "repair dataset problems instead of failing");
  d->callback([&] { cmd_decode(decode); });

  VoteArgs vote;
  CLI::App* v =
      app.add_subcommand("vote", "Merge expert run files by summing span scores");
  v->add_option("--runs", vote.runs, "expert run files")
      ->required()
      ->check(CLI::ExistingFile);
  v->add_option("--dataset", vote.dataset,
                "dataset file; when given, spans are validated against passages")
      ->check(CLI::ExistingFile);
  v->add_option("--out", vote.out, "output run file")->required();
  v->add_flag("--lenient", vote.lenient, "repair dataset problems instead of failing");
  v->callback([&] { cmd_vote(vote); });

  PostprocessArgs post;
  CLI::App* p = app.add_subcommand(
      "postprocess", "Clean a run: overlap removal, uninformative filtering, "
                     "sub-word repair, dedup, truncation");
  p->add_option("--runs", post.run, "input run file")
      ->required()
      ->check(CLI::ExistingFile);
  p->add_option("--dataset", post.dataset, "dataset file with passages and questions")
      ->required()
      ->check(CLI::ExistingFile);
  p->add_option("--out", post.out, "output run file")->required();
  p->add_option("--stages", post.stages,
                "comma-separated stage order; subset of redundancy,uninformative,subword")
      ->capture_default_str();
  p->add_flag("--keep-uninformative", post.keep_uninformative,
              "skip the uninformative-answer filter");
  p->add_option("--top-n", post.top_n, "answers kept per sample after cleaning")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  p->add_option("--stopwords", post.stopwords, "stopword file (one word per line)")
      ->check(CLI::ExistingFile);
  p->add_option("--stemmer-config", post.stemmer_config,
                "JSON file with strip_prefixes/strip_suffixes/min_stem_len")
      ->check(CLI::ExistingFile);
  p->add_flag("--lenient", post.lenient, "repair dataset problems instead of failing");
  p->callback([&] { cmd_postprocess(post); });

  EvaluateArgs eval;
  CLI::App* e = app.add_subcommand("evaluate", "Score a run against gold answers");
  e->add_option("--runs", eval.run, "run file to score")
      ->required()
      ->check(CLI::ExistingFile);
  e->add_option("--dataset", eval.dataset, "dataset file with gold answers")
      ->required()
      ->check(CLI::ExistingFile);
  e->add_option("--out", eval.out, "output report (JSON)")->required();
  e->add_option("--top-n", eval.top_n, "ranks considered by pRR")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  e->add_flag("--strict-text", eval.strict_text,
              "compare text without alef/ya unification");
  e->add_option("--tsv", eval.tsv, "also write per-sample scores as TSV");
  e->add_flag("--lenient", eval.lenient, "repair dataset problems instead of failing");
  e->callback([&] { cmd_evaluate(eval); });

  ReportArgs report;
  CLI::App* r =
      app.add_subcommand("report", "Render a report's pRR histogram or TSV table");
  r->add_option("--report", report.report, "report file from evaluate")
      ->required()
      ->check(CLI::ExistingFile);
  r->add_option("--out", report.out, "output file (default: stdout)");
  r->add_option("--format", report.format, "text, svg or tsv")->capture_default_str();
  r->callback([&] { cmd_report(report); });

  SynthArgs synth;
  CLI::App* s = app.add_subcommand(
      "synth", "Generate seeded synthetic expert dumps for a dataset");
  s->add_option("--dataset", synth.dataset, "dataset file with gold answers")
      ->required()
      ->check(CLI::ExistingFile);
  s->add_option("--out", synth.out_dir, "output directory for dump files")->required();
  s->add_option("--seed", synth.seed, "random seed")->capture_default_str();
  s->add_option("--experts", synth.experts, "number of expert dumps to generate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  s->add_option("--sigma", synth.sigma, "Gaussian score noise")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  s->add_option("--gold-boost", synth.gold_boost,
                "score added at gold answer boundary tokens")
      ->capture_default_str();
  s->add_option("--fragment-rate", synth.fragment_rate,
                "fraction of words split into sub-word pieces")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  s->add_flag("--lenient", synth.lenient, "repair dataset problems instead of failing");
  s->callback([&] { cmd_synth(synth); });

  PipelineArgs pipe;
  CLI::App* pl = app.add_subcommand(
      "pipeline", "decode + vote + postprocess + evaluate in one invocation");
  pl->add_option("--dumps", pipe.dumps, "expert dump files, one per expert")
      ->required()
      ->check(CLI::ExistingFile);
  pl->add_option("--dataset", pipe.dataset, "dataset file")
      ->required()
      ->check(CLI::ExistingFile);
  pl->add_option("--out", pipe.out, "output report (JSON)")->required();
  pl->add_option("--workdir", pipe.workdir,
                 "directory for intermediate run files (default: <out>.work)");
  pl->add_option("--top-k", pipe.top_k, "answer spans decoded per sample")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  pl->add_option("--max-answer-tokens", pipe.max_answer_tokens,
                 "longest span considered, in tokens")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  pl->add_option("--stages", pipe.stages, "post-processing stage order")
      ->capture_default_str();
  pl->add_flag("--keep-uninformative", pipe.keep_uninformative,
               "skip the uninformative-answer filter");
  pl->add_option("--top-n", pipe.top_n, "final answers per sample; also pRR depth")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  pl->add_option("--stopwords", pipe.stopwords, "stopword file")
      ->check(CLI::ExistingFile);
  pl->add_option("--stemmer-config", pipe.stemmer_config, "stemmer affix JSON")
      ->check(CLI::ExistingFile);
  pl->add_flag("--strict-text", pipe.strict_text,
               "compare text without alef/ya unification");
  pl->add_flag("--lenient", pipe.lenient, "repair dataset problems instead of failing");
  pl->callback([&] { cmd_pipeline(pipe); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
