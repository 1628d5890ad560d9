#pragma once

#include <filesystem>
#include <string>

#include "spanrank/types.hpp"

namespace spanrank {

// Run files (expert and ensemble alike) are JSON objects:
//   {pq_id: [{"answer": str, "rank": int (1-based), "score": float,
//             "start_char": int}]}
// start_char is optional on ingest; when absent the answer is located at
// its first occurrence in the sample's passage, which requires `dataset`.
// With a dataset every candidate is validated against its passage.

AnswerMap load_run_file(const std::filesystem::path& path,
                        const DatasetIndex* dataset = nullptr);
AnswerMap parse_run(std::string_view text, const DatasetIndex* dataset = nullptr,
                    const std::string& source = "<memory>");

void save_run_file(const std::filesystem::path& path, const AnswerMap& answers);
std::string run_to_json(const AnswerMap& answers);

}  // namespace spanrank
