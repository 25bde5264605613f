#pragma once

#include "vclust/candidates.hpp"
#include "vclust/clustering.hpp"
#include "vclust/criteria.hpp"
#include "vclust/sample_stats.hpp"
#include "vclust/selection.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace vclust {

using Json = nlohmann::ordered_json;

Json clustering_to_json(const Clustering& c);
/// Accepts {"labels": [...]}; labels are canonicalized.
Clustering clustering_from_json(const Json& j);

Json stats_to_json(const SampleStats& s);
SampleStats stats_from_json(const Json& j);

Json truth_to_json(const Clustering& truth, double eta, std::uint64_t seed);

Json candidates_to_json(const CandidateSet& set);
CandidateSet candidates_from_json(const Json& j);

Json score_record_to_json(const Clustering& c, const Criterion& criterion, const ScoreRecord& r);

Json selection_to_json(const SelectionResult& result, const CandidateSet& candidates,
                       const Criterion& criterion);

/// Reads and parses a JSON file; DataError on I/O or syntax problems.
Json read_json_file(const std::string& path);
/// Writes `text` to `path`; DataError on failure.
void write_text_file(const std::string& path, const std::string& text);
/// Two-space indented JSON with a trailing newline.
std::string dump_json(const Json& j);

struct CsvTable {
  std::vector<std::string> header;
  Matrix rows;
};

/// Numeric CSV, one observation per row. With `skip_header` the first line
/// supplies column names. DataError on an empty file, ragged rows or
/// non-numeric cells (with line and column in the message).
CsvTable read_csv(const std::string& path, bool skip_header = false);

/// Centres every column and scales it to unit (1/n) variance. DataError
/// naming the column when its variance is zero.
void standardize_columns(CsvTable& table);

/// Writes rows with full round-trip precision.
std::string matrix_to_csv(const Matrix& m);

}  // namespace vclust
