#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "crossdom/model_select.hpp"

namespace crossdom {

// Positive-class F1: 2PR/(P+R), defined as 0 when there are no true
// positives.
double positive_f1(std::span<const int> gold, std::span<const int> pred);

// Train-corpus x test-corpus table of positive F1 scores.
struct EvalMatrix {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  std::map<std::string, std::map<std::string, double>> cells;
  std::set<std::string> untrained;  // rows whose training corpus was unusable
  std::map<std::string, std::set<std::string>> exclusions;
  std::map<std::string, BestConfig> configs;
  std::uint64_t seed = 0;

  bool has(const std::string& train_id, const std::string& test_id) const;
  double at(const std::string& train_id, const std::string& test_id) const;
};

struct MatrixOptions {
  GridSpec grid;
  std::optional<std::string> merged_id;
  std::set<std::string> exclude_from_avg;
  std::size_t inner_k = 10;
  std::size_t outer_k = 3;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  FitOptions fit;
  std::shared_ptr<const EmbeddingTable> embeddings;
};

struct MatrixResult {
  EvalMatrix matrix;
  // Refit pipeline per trained row, keyed by train id.
  std::map<std::string, TrainedPipeline> pipelines;
};

// For each train split: nested grid search, refit, then score every test
// split. With merged_id set, one extra row trains on all train splits
// merged; test splits are never merged.
MatrixResult run_matrix(const std::vector<SplitPair>& corpora,
                        const MatrixOptions& options);

// Mean over this row's test cells, excluding the train id itself, the
// matrix-declared exclusions, and any extra exclusions.
double out_of_domain_average(const EvalMatrix& matrix,
                             const std::string& train_id,
                             const std::set<std::string>& extra_exclusions = {});

// The row that is simultaneously best in-domain (diagonal) and best on the
// out-of-domain average, if any.
std::optional<std::string> robust_best(const EvalMatrix& matrix);

std::string matrix_to_tsv(const EvalMatrix& matrix);
// x/y/value triples, one row block per train id.
std::string matrix_to_heatmap(const EvalMatrix& matrix);
nlohmann::json matrix_to_json(const EvalMatrix& matrix);
EvalMatrix matrix_from_json(const nlohmann::json& obj);

}  // namespace crossdom
