#pragma once

#include <cstdint>
#include <vector>

#include "crossdom/pipeline.hpp"

namespace crossdom {

// Hyper-parameter search space; every axis must be non-empty.
struct GridSpec {
  Representation representation = Representation::BinaryBow;
  std::vector<NgramRange> ngram_ranges{{1, 1}};
  std::vector<Loss> losses{Loss::Hinge};
  std::vector<ClassWeight> class_weights{ClassWeight::Default};
  std::vector<double> C_values{1.0};
  std::vector<NormalizationLevel> levels{NormalizationLevel::Lower};
  std::size_t min_df = 1;
  double max_df_ratio = 1.0;
  double nb_alpha = 1.0;
  std::string embedding_path;

  // All grid points, pre-sorted in the tie-breaking order: smaller C,
  // narrower n-gram range, then loss / class weight / level order.
  std::vector<PipelineConfig> enumerate() const;
};

// Binary BoW + linear SVM baseline search space.
GridSpec default_bow_grid();
// Tf-idf + NB ratio features with a logistic learner.
GridSpec default_nbsvm_grid();
// Averaged pre-trained embeddings with a logistic learner.
GridSpec default_embedding_grid(const std::string& embedding_path);

nlohmann::json grid_to_json(const GridSpec& grid);
GridSpec grid_from_json(const nlohmann::json& obj);

struct BestConfig {
  PipelineConfig config;
  double mean_outer_f1 = 0.0;
  std::vector<double> outer_scores;  // scores on the outer folds it won
};

// Index folds that partition 0..n-1 with per-fold positive counts differing
// by at most one. When a class has fewer than k members a warning flag is
// set and folds may end up without that class.
std::vector<std::vector<std::size_t>> stratified_kfold(
    std::span<const int> labels, std::size_t k, std::uint64_t seed,
    bool* small_class_warning = nullptr);

struct SearchOptions {
  std::size_t inner_k = 10;
  std::size_t outer_k = 3;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  FitOptions fit;
  std::shared_ptr<const EmbeddingTable> embeddings;
};

// Exhaustive nested-CV grid search. Per outer fold, the best configuration
// by mean inner-fold positive F1 is scored on the held-out outer part; the
// winner is the configuration with the highest mean outer score. Every
// fitted statistic is derived from the training partition of its fold only.
BestConfig nested_grid_search(const Corpus& train, const GridSpec& grid,
                              const SearchOptions& options);

TrainedPipeline refit(const Corpus& train, const PipelineConfig& config,
                      const FitOptions& options,
                      std::shared_ptr<const EmbeddingTable> embeddings = nullptr);

}  // namespace crossdom
