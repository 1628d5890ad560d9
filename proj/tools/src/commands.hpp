#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

// File -> file drivers behind the CLI subcommands. Each one throws
// spanrank::Error (or std::exception) on failure; main() turns that into a
// diagnostic and a nonzero exit. `pipeline` chains the other drivers so
// its intermediate artifacts are ordinary files a user could have produced
// by hand.

namespace spanrank::cli {

struct DecodeArgs {
  std::filesystem::path dumps;
  std::filesystem::path dataset;
  std::filesystem::path out;
  std::size_t top_k = 20;
  std::size_t max_answer_tokens = 30;
  bool lenient = false;
};
void cmd_decode(const DecodeArgs& args);

struct VoteArgs {
  std::vector<std::filesystem::path> runs;
  std::filesystem::path dataset;  // optional; enables span validation
  std::filesystem::path out;
  bool lenient = false;
};
void cmd_vote(const VoteArgs& args);

struct PostprocessArgs {
  std::filesystem::path run;
  std::filesystem::path dataset;
  std::filesystem::path out;
  std::string stages = "redundancy,uninformative,subword_repair";
  bool keep_uninformative = false;
  std::size_t top_n = 5;
  std::filesystem::path stopwords;       // optional; default list when empty
  std::filesystem::path stemmer_config;  // optional; default affixes when empty
  bool lenient = false;
};
void cmd_postprocess(const PostprocessArgs& args);

struct EvaluateArgs {
  std::filesystem::path run;
  std::filesystem::path dataset;
  std::filesystem::path out;
  std::size_t top_n = 5;
  bool strict_text = false;  // disable alef/ya unification in comparisons
  std::filesystem::path tsv;  // optional per-sample TSV
  bool lenient = false;
};
void cmd_evaluate(const EvaluateArgs& args);

struct ReportArgs {
  std::filesystem::path report;
  std::filesystem::path out;  // empty -> stdout
  std::string format = "text";  // text | svg | tsv
};
void cmd_report(const ReportArgs& args);

struct SynthArgs {
  std::filesystem::path dataset;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  std::size_t experts = 1;
  double sigma = 0.0;
  double gold_boost = 10.0;
  double fragment_rate = 0.0;
  bool lenient = false;
};
void cmd_synth(const SynthArgs& args);
// Dump file name for one synthetic expert, relative to out_dir.
std::string synth_dump_name(std::size_t expert_index);

struct PipelineArgs {
  std::vector<std::filesystem::path> dumps;
  std::filesystem::path dataset;
  std::filesystem::path out;      // final report
  std::filesystem::path workdir;  // empty -> "<out>.work" next to out
  std::size_t top_k = 20;
  std::size_t max_answer_tokens = 30;
  std::string stages = "redundancy,uninformative,subword_repair";
  bool keep_uninformative = false;
  std::size_t top_n = 5;
  std::filesystem::path stopwords;
  std::filesystem::path stemmer_config;
  bool strict_text = false;
  bool lenient = false;
};
void cmd_pipeline(const PipelineArgs& args);

}  // namespace spanrank::cli
