#pragma once

#include <algorithm>
#include <istream>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/modelcomp/stats.hpp"
#include "msbench/text.hpp"

namespace msbench::modelcomp {

enum class Direction { HigherBetter, LowerBetter };

inline Direction direction_from_string(std::string_view s) {
  if (s == "higher_better" || s == "higher") return Direction::HigherBetter;
  if (s == "lower_better" || s == "lower") return Direction::LowerBetter;
  throw UsageError("unknown direction '" + std::string(s) + "' (expected higher_better or lower_better)");
}

inline const char* to_string(Direction d) {
  return d == Direction::HigherBetter ? "higher_better" : "lower_better";
}

struct ScoreMatrix {
  std::vector<std::string> models;
  std::vector<std::string> conditions;
  std::vector<std::vector<double>> scores;  // [condition][model]
  Direction direction = Direction::HigherBetter;
  std::vector<std::string> notes;

  std::vector<double> column(std::size_t model) const {
    std::vector<double> out;
    for (const auto& row : scores) out.push_back(row[model]);
    return out;
  }

  void validate() const {
    if (models.size() < 2) throw DataError("model comparison needs at least 2 models");
    if (conditions.size() < 2) throw DataError("model comparison needs at least 2 complete conditions");
    if (scores.size() != conditions.size()) throw UsageError("score matrix row count mismatch");
    for (const auto& row : scores) {
      if (row.size() != models.size()) throw UsageError("score matrix column count mismatch");
    }
  }
};

// Rows are conditions, columns are models; the first row is the header
// "condition<TAB>model...". Empty or NA cells are missing, and a condition
// with any missing cell is dropped with a note. '#' lines are comments.
inline ScoreMatrix read_score_matrix(std::istream& in, Direction direction = Direction::HigherBetter) {
  ScoreMatrix m;
  m.direction = direction;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto cells = text::split(line, '\t');
    if (header) {
      if (cells.size() < 3) throw ParseError("score matrix header needs a condition column and 2+ models", line_no, 0);
      for (std::size_t i = 1; i < cells.size(); ++i) {
        const std::string name(text::trim(cells[i]));
        if (name.empty()) throw ParseError("empty model name in score matrix header", line_no, 0);
        if (std::find(m.models.begin(), m.models.end(), name) != m.models.end()) {
          throw ParseError("duplicate model '" + name + "' in score matrix header", line_no, 0);
        }
        m.models.push_back(name);
      }
      header = false;
      continue;
    }
    if (cells.size() != m.models.size() + 1) {
      throw ParseError("score matrix line " + std::to_string(line_no) + ": expected " +
                           std::to_string(m.models.size() + 1) + " cells, got " + std::to_string(cells.size()),
                       line_no, 0);
    }
    const std::string condition(text::trim(cells[0]));
    if (!seen.insert(condition).second) {
      throw ParseError("duplicate condition '" + condition + "'", line_no, 0);
    }
    std::vector<double> row;
    bool missing = false;
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const auto cell = text::trim(cells[i]);
      if (cell.empty() || cell == "NA" || cell == "nan" || cell == "NaN") {
        missing = true;
        break;
      }
      const auto v = text::parse_double(cell);
      if (!v) {
        throw ParseError("score matrix line " + std::to_string(line_no) + ": bad number '" + std::string(cell) + "'",
                         line_no, 0);
      }
      row.push_back(*v);
    }
    if (missing) {
      m.notes.push_back("condition '" + condition + "' dropped: missing model scores");
      continue;
    }
    m.conditions.push_back(condition);
    m.scores.push_back(std::move(row));
  }
  if (header) throw ParseError("score matrix is empty", line_no, 0);
  return m;
}

// Mean per-condition rank of every model (1 = best, ties share midranks).
inline std::vector<double> average_ranks(const ScoreMatrix& m) {
  m.validate();
  std::vector<double> sums(m.models.size(), 0.0);
  for (const auto& row : m.scores) {
    const auto r = midranks(row, m.direction == Direction::HigherBetter);
    for (std::size_t j = 0; j < r.size(); ++j) sums[j] += r[j];
  }
  for (double& s : sums) s /= static_cast<double>(m.conditions.size());
  return sums;
}

// Models ordered by average rank (ties by index); maximal runs with no
// rejected pair inside become cliques, dropping runs inside a larger one.
// Cliques are returned as model indices in rank order.
inline std::vector<std::vector<std::size_t>> cd_cliques(const std::vector<double>& ranks,
                                                        const std::vector<std::vector<bool>>& rejected) {
  const std::size_t k = ranks.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });
  std::vector<std::vector<std::size_t>> out;
  std::size_t last_end = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i;
    while (j + 1 < k) {
      bool ok = true;
      for (std::size_t t = i; t <= j && ok; ++t) ok = !rejected[order[t]][order[j + 1]];
      if (!ok) break;
      ++j;
    }
    if (!out.empty() && j + 1 <= last_end) continue;
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i), order.begin() + static_cast<std::ptrdiff_t>(j + 1));
    last_end = j + 1;
  }
  return out;
}

struct PairwiseResult {
  std::size_t model_a = 0;
  std::size_t model_b = 0;
  WilcoxonResult wilcoxon;
  HolmDecision holm;
};

struct ComparisonReport {
  std::vector<std::string> models;
  std::size_t conditions = 0;
  Direction direction = Direction::HigherBetter;
  double alpha = 0.05;
  std::vector<double> average_ranks;
  std::optional<FriedmanResult> friedman;  // absent for k = 2
  std::vector<PairwiseResult> pairwise;
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<std::string> notes;
};

inline ComparisonReport compare_models(const ScoreMatrix& m, double alpha = 0.05) {
  m.validate();
  ComparisonReport r;
  r.models = m.models;
  r.conditions = m.conditions.size();
  r.direction = m.direction;
  r.alpha = alpha;
  r.notes = m.notes;
  r.average_ranks = average_ranks(m);
  const std::size_t k = m.models.size();
  if (k >= 3) {
    r.friedman = friedman_from_ranks(r.average_ranks, r.conditions);
  } else {
    r.notes.push_back("two models: Friedman test skipped, pairwise Wilcoxon only");
  }
  std::vector<double> pvalues;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      PairwiseResult pr;
      pr.model_a = a;
      pr.model_b = b;
      pr.wilcoxon = wilcoxon_signed_rank(m.column(a), m.column(b));
      for (const auto& note : pr.wilcoxon.notes) r.notes.push_back(m.models[a] + " vs " + m.models[b] + ": " + note);
      pvalues.push_back(pr.wilcoxon.p);
      r.pairwise.push_back(std::move(pr));
    }
  }
  const auto holm = holm_correct(pvalues, alpha);
  std::vector<std::vector<bool>> rejected(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < r.pairwise.size(); ++i) {
    r.pairwise[i].holm = holm[i];
    if (holm[i].rejected) {
      rejected[r.pairwise[i].model_a][r.pairwise[i].model_b] = true;
      rejected[r.pairwise[i].model_b][r.pairwise[i].model_a] = true;
    }
  }
  r.cliques = cd_cliques(r.average_ranks, rejected);
  return r;
}

}  // namespace msbench::modelcomp
