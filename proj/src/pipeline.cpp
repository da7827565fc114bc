#include "crossdom/pipeline.hpp"

#include <stdexcept>

namespace crossdom {

namespace {

std::vector<const Document*> doc_pointers(const Corpus& corpus) {
  std::vector<const Document*> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) docs.push_back(&doc);
  return docs;
}

}  // namespace

Representation representation_from_string(std::string_view name) {
  if (name == "binary_bow" || name == "bow") return Representation::BinaryBow;
  if (name == "nbsvm") return Representation::Nbsvm;
  if (name == "embedding") return Representation::Embedding;
  throw std::invalid_argument("unknown representation: " + std::string(name));
}

std::string to_string(Representation representation) {
  switch (representation) {
    case Representation::BinaryBow:
      return "binary_bow";
    case Representation::Nbsvm:
      return "nbsvm";
    case Representation::Embedding:
      return "embedding";
  }
  throw std::invalid_argument("unknown representation");
}

nlohmann::json pipeline_config_to_json(const PipelineConfig& config) {
  nlohmann::json obj;
  obj["representation"] = to_string(config.representation);
  obj["level"] = to_string(config.level);
  obj["ngram_range"] = {config.ngram_range.lo, config.ngram_range.hi};
  obj["min_df"] = config.min_df;
  obj["max_df_ratio"] = config.max_df_ratio;
  obj["nb_alpha"] = config.nb_alpha;
  obj["loss"] = to_string(config.loss);
  obj["class_weight"] = to_string(config.class_weight);
  obj["C"] = config.C;
  if (!config.embedding_path.empty())
    obj["embedding_path"] = config.embedding_path;
  return obj;
}

PipelineConfig pipeline_config_from_json(const nlohmann::json& obj) {
  PipelineConfig config;
  config.representation =
      representation_from_string(obj.at("representation").get<std::string>());
  config.level = normalization_level_from_string(obj.at("level").get<std::string>());
  config.ngram_range.lo = obj.at("ngram_range").at(0).get<int>();
  config.ngram_range.hi = obj.at("ngram_range").at(1).get<int>();
  config.min_df = obj.at("min_df").get<std::size_t>();
  config.max_df_ratio = obj.at("max_df_ratio").get<double>();
  config.nb_alpha = obj.at("nb_alpha").get<double>();
  config.loss = loss_from_string(obj.at("loss").get<std::string>());
  config.class_weight =
      class_weight_from_string(obj.at("class_weight").get<std::string>());
  config.C = obj.at("C").get<double>();
  if (obj.contains("embedding_path"))
    config.embedding_path = obj.at("embedding_path").get<std::string>();
  return config;
}

SparseVector TrainedPipeline::vectorize(const Document& doc) const {
  switch (config.representation) {
    case Representation::BinaryBow:
      return vectorize_binary(doc, space);
    case Representation::Nbsvm:
      return apply_nbsvm_weighting(vectorize_tfidf(doc, space, *idf), *ratios);
    case Representation::Embedding: {
      auto tokens = normalized_tokens(doc.text, config.level);
      auto dense = embed_average(tokens, *embeddings);
      return dense_to_sparse(dense);
    }
  }
  throw std::invalid_argument("unknown representation");
}

double TrainedPipeline::decision(const Document& doc) const {
  return decision_value(model, vectorize(doc));
}

int TrainedPipeline::predict_label(const Document& doc) const {
  return decision(doc) > 0.0 ? 1 : 0;
}

TrainedPipeline fit_pipeline(const std::vector<const Document*>& docs,
                             const PipelineConfig& config,
                             std::shared_ptr<const EmbeddingTable> embeddings,
                             const FitOptions& options) {
  TrainedPipeline pipeline;
  pipeline.config = config;

  std::vector<int> labels;
  labels.reserve(docs.size());
  for (const Document* doc : docs) labels.push_back(doc->label);

  std::vector<SparseVector> X;
  X.reserve(docs.size());
  std::size_t dim = 0;

  switch (config.representation) {
    case Representation::BinaryBow: {
      pipeline.space = fit_vocabulary(docs, config.ngram_range, config.min_df,
                                      config.max_df_ratio, config.level);
      dim = pipeline.space.size();
      for (const Document* doc : docs)
        X.push_back(vectorize_binary(*doc, pipeline.space));
      break;
    }
    case Representation::Nbsvm: {
      pipeline.space = fit_vocabulary(docs, config.ngram_range, config.min_df,
                                      config.max_df_ratio, config.level);
      dim = pipeline.space.size();
      pipeline.idf = fit_tfidf(docs, pipeline.space);
      for (const Document* doc : docs)
        X.push_back(vectorize_tfidf(*doc, pipeline.space, *pipeline.idf));
      pipeline.ratios =
          nb_log_count_ratio(X, labels, dim, config.nb_alpha);
      for (auto& vec : X) vec = apply_nbsvm_weighting(vec, *pipeline.ratios);
      break;
    }
    case Representation::Embedding: {
      if (!embeddings)
        throw std::invalid_argument(
            "embedding representation requires an embedding table");
      pipeline.embeddings = embeddings;
      dim = embeddings->dimension;
      for (const Document* doc : docs) {
        auto tokens = normalized_tokens(doc->text, config.level);
        X.push_back(dense_to_sparse(embed_average(tokens, *embeddings)));
      }
      break;
    }
  }

  TrainConfig train_config;
  train_config.loss = config.loss;
  train_config.C = config.C;
  train_config.class_weight = config.class_weight;
  train_config.seed = options.seed;
  train_config.tolerance = options.tolerance;
  train_config.max_epochs = options.max_epochs;
  pipeline.model = train(X, labels, dim, train_config);
  return pipeline;
}

TrainedPipeline fit_pipeline(const Corpus& corpus, const PipelineConfig& config,
                             std::shared_ptr<const EmbeddingTable> embeddings,
                             const FitOptions& options) {
  return fit_pipeline(doc_pointers(corpus), config, embeddings, options);
}

nlohmann::json pipeline_to_json(const TrainedPipeline& pipeline) {
  nlohmann::json obj;
  obj["config"] = pipeline_config_to_json(pipeline.config);
  obj["model"] = linear_model_to_json(pipeline.model);
  if (pipeline.config.representation != Representation::Embedding)
    obj["space"] = feature_space_to_json(pipeline.space);
  if (pipeline.idf) {
    obj["idf"]["values"] = pipeline.idf->idf;
    obj["idf"]["n_docs"] = pipeline.idf->n_docs;
  }
  if (pipeline.ratios) {
    obj["ratios"]["values"] = pipeline.ratios->r;
    obj["ratios"]["alpha"] = pipeline.ratios->alpha;
  }
  return obj;
}

TrainedPipeline pipeline_from_json(
    const nlohmann::json& obj,
    std::shared_ptr<const EmbeddingTable> embeddings) {
  TrainedPipeline pipeline;
  pipeline.config = pipeline_config_from_json(obj.at("config"));
  pipeline.model = linear_model_from_json(obj.at("model"));
  if (obj.contains("space"))
    pipeline.space = feature_space_from_json(obj.at("space"));
  if (obj.contains("idf")) {
    IdfTable idf;
    idf.idf = obj.at("idf").at("values").get<std::vector<double>>();
    idf.n_docs = obj.at("idf").at("n_docs").get<std::size_t>();
    pipeline.idf = std::move(idf);
  }
  if (obj.contains("ratios")) {
    RatioVector ratios;
    ratios.r = obj.at("ratios").at("values").get<std::vector<double>>();
    ratios.alpha = obj.at("ratios").at("alpha").get<double>();
    pipeline.ratios = std::move(ratios);
  }
  if (pipeline.config.representation == Representation::Embedding) {
    if (embeddings) {
      pipeline.embeddings = std::move(embeddings);
    } else if (!pipeline.config.embedding_path.empty()) {
      pipeline.embeddings = std::make_shared<EmbeddingTable>(
          load_embedding_table(pipeline.config.embedding_path));
    } else {
      throw FormatError("serialized embedding pipeline lacks a table path");
    }
  }
  return pipeline;
}

}  // namespace crossdom
