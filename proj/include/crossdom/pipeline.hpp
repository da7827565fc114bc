#pragma once

#include <memory>
#include <optional>
#include <string>

#include "crossdom/corpus.hpp"
#include "crossdom/featurize.hpp"
#include "crossdom/linear.hpp"

namespace crossdom {

enum class Representation { BinaryBow, Nbsvm, Embedding };

Representation representation_from_string(std::string_view name);
std::string to_string(Representation representation);

// One fully resolved pipeline configuration: representation, text level,
// feature parameters, and the learner settings.
struct PipelineConfig {
  Representation representation = Representation::BinaryBow;
  NormalizationLevel level = NormalizationLevel::Lower;
  NgramRange ngram_range{1, 1};
  std::size_t min_df = 1;
  double max_df_ratio = 1.0;
  double nb_alpha = 1.0;
  Loss loss = Loss::Hinge;
  ClassWeight class_weight = ClassWeight::Default;
  double C = 1.0;
  std::string embedding_path;

  bool operator==(const PipelineConfig&) const = default;
};

nlohmann::json pipeline_config_to_json(const PipelineConfig& config);
PipelineConfig pipeline_config_from_json(const nlohmann::json& obj);

// Fitted featurization plus the trained linear model. Immutable once fit;
// safe to share across threads.
struct TrainedPipeline {
  PipelineConfig config;
  FeatureSpace space;  // unused for the embedding representation
  std::optional<IdfTable> idf;
  std::optional<RatioVector> ratios;
  std::shared_ptr<const EmbeddingTable> embeddings;
  LinearModel model;

  SparseVector vectorize(const Document& doc) const;
  double decision(const Document& doc) const;
  int predict_label(const Document& doc) const;
};

struct FitOptions {
  std::uint64_t seed = 0;
  double tolerance = 1e-4;
  int max_epochs = 1000;
};

// Fits every statistic (vocabulary, idf, NB ratios) on the given documents
// only, then trains the model on them.
TrainedPipeline fit_pipeline(const std::vector<const Document*>& docs,
                             const PipelineConfig& config,
                             std::shared_ptr<const EmbeddingTable> embeddings,
                             const FitOptions& options);
TrainedPipeline fit_pipeline(const Corpus& corpus, const PipelineConfig& config,
                             std::shared_ptr<const EmbeddingTable> embeddings,
                             const FitOptions& options);

nlohmann::json pipeline_to_json(const TrainedPipeline& pipeline);
// Reloads a serialized pipeline; embedding tables are re-read from the
// stored path unless one is supplied.
TrainedPipeline pipeline_from_json(
    const nlohmann::json& obj,
    std::shared_ptr<const EmbeddingTable> embeddings = nullptr);

}  // namespace crossdom
