#include "vclust/io.hpp"

#include "vclust/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vclust {

Json clustering_to_json(const Clustering& c) { return Json{{"labels", c.labels()}}; }

Clustering clustering_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("labels") || !j["labels"].is_array()) {
    throw DataError("clustering JSON must be an object with a \"labels\" array");
  }
  std::vector<int> labels;
  for (const auto& v : j["labels"]) {
    if (!v.is_number_integer() || v.get<long>() < 0) {
      throw DataError("clustering labels must be non-negative integers");
    }
    labels.push_back(v.get<int>());
  }
  if (labels.empty()) {
    throw DataError("clustering labels must be non-empty");
  }
  return Clustering::canonicalize(labels);
}

Json stats_to_json(const SampleStats& s) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < s.p(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < s.p(); ++j) {
      row.push_back(s.covariance()(i, j));
    }
    rows.push_back(std::move(row));
  }
  return Json{{"n", s.n()}, {"p", s.p()}, {"S", std::move(rows)}};
}

SampleStats stats_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<std::int64_t>();
    const auto p = j.at("p").get<Eigen::Index>();
    const Json& rows = j.at("S");
    if (p < 1 || !rows.is_array() || static_cast<Eigen::Index>(rows.size()) != p) {
      throw DataError("stats JSON: S must have p rows");
    }
    Matrix s(p, p);
    for (Eigen::Index r = 0; r < p; ++r) {
      if (!rows[r].is_array() || static_cast<Eigen::Index>(rows[r].size()) != p) {
        throw DataError("stats JSON: row " + std::to_string(r) + " of S must have p entries");
      }
      for (Eigen::Index c = 0; c < p; ++c) {
        s(r, c) = rows[r][c].get<double>();
      }
    }
    return SampleStats(n, s);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("stats JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("stats JSON: ") + e.what());
  }
}

Json truth_to_json(const Clustering& truth, double eta, std::uint64_t seed) {
  return Json{{"labels", truth.labels()}, {"eta", eta}, {"seed", seed}};
}

Json candidates_to_json(const CandidateSet& set) {
  Json arr = Json::array();
  for (const Candidate& c : set.items()) {
    Json item{{"labels", c.clustering.labels()}, {"method", c.method}};
    item["lambda"] = c.lambda ? Json(*c.lambda) : Json(nullptr);
    item["k"] = c.k;
    arr.push_back(std::move(item));
  }
  return Json{{"candidates", std::move(arr)}};
}

CandidateSet candidates_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("candidates") || !j["candidates"].is_array()) {
    throw DataError("candidate JSON must be an object with a \"candidates\" array");
  }
  CandidateSet set;
  for (const auto& item : j["candidates"]) {
    Candidate c;
    c.clustering = clustering_from_json(item);
    c.method = item.value("method", std::string("input"));
    if (item.contains("lambda") && item["lambda"].is_number()) {
      c.lambda = item["lambda"].get<double>();
    }
    c.k = item.value("k", c.clustering.num_clusters());
    set.add(std::move(c));
  }
  return set;
}

namespace {

// JSON has no infinities; non-finite scores are written as null.
Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json score_record_to_json(const Clustering& c, const Criterion& criterion, const ScoreRecord& r) {
  Json j{{"clustering", clustering_to_json(c)}, {"criterion", criterion.name()}};
  if (criterion.kind == CriterionKind::ProposedVi || criterion.kind == CriterionKind::ProposedMcmc) {
    j["beta"] = criterion.beta;
  }
  if (criterion.is_likelihood()) {
    j["log_marginal"] = number_or_null(r.value);
  } else {
    j["score"] = number_or_null(r.value);
  }
  if (r.nu_g_eps) {
    j["nu_g_eps"] = *r.nu_g_eps;
    j["nu_g_blocks"] = r.nu_g_blocks;
  }
  if (r.std_error) {
    j["std_error"] = *r.std_error;
  }
  j["converged"] = r.converged;
  return j;
}

Json selection_to_json(const SelectionResult& result, const CandidateSet& candidates,
                       const Criterion& criterion) {
  Json scores = Json::array();
  for (std::size_t i = 0; i < result.scores.size(); ++i) {
    Json rec = score_record_to_json(candidates.items()[i].clustering, criterion, result.scores[i]);
    rec["excluded"] = static_cast<bool>(result.excluded[i]);
    scores.push_back(std::move(rec));
  }
  Json posterior = Json::object();
  for (const auto& [k, prob] : result.posterior_k) {
    posterior[std::to_string(k)] = prob;
  }
  return Json{{"criterion", criterion.name()},
              {"best", clustering_to_json(result.best)},
              {"scores", std::move(scores)},
              {"posterior_k", std::move(posterior)}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot write " + path);
  }
  out << text;
  if (!out) {
    throw DataError("write failed for " + path);
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

CsvTable read_csv(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  CsvTable table;
  std::vector<std::vector<double>> values;
  std::string line;
  long line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto cells = split_csv_line(line);
    if (skip_header && table.header.empty() && values.empty()) {
      for (const auto& c : cells) {
        table.header.push_back(trim(c));
      }
      width = cells.size();
      continue;
    }
    if (width == 0) {
      width = cells.size();
    }
    if (cells.size() != width) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(width) + " columns, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(width);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string cell = trim(cells[c]);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(v)) {
        throw DataError(path + ":" + std::to_string(line_no) + ": column " +
                        std::to_string(c + 1) + " is not a finite number: '" + cell + "'");
      }
      row.push_back(v);
    }
    values.push_back(std::move(row));
  }
  if (values.empty()) {
    throw DataError(path + ": no data rows");
  }
  table.rows.resize(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < values.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      table.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r][c];
    }
  }
  return table;
}

void standardize_columns(CsvTable& table) {
  Matrix& m = table.rows;
  const double n = static_cast<double>(m.rows());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double mean = m.col(c).mean();
    m.col(c).array() -= mean;
    const double var = m.col(c).squaredNorm() / n;
    if (!(var > 0.0)) {
      const std::string name = c < static_cast<Eigen::Index>(table.header.size()) &&
                                       !table.header[c].empty()
                                   ? "'" + table.header[c] + "' (column " + std::to_string(c + 1) + ")"
                                   : "column " + std::to_string(c + 1);
      throw DataError(name + " has zero variance");
    }
    m.col(c) /= std::sqrt(var);
  }
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  char buf[32];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, m(r, c));
      if (c > 0) {
        out.push_back(',');
      }
      out.append(buf, ptr);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace vclust
