#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "crossdom/corpus.hpp"
#include "crossdom/text.hpp"

namespace crossdom {

// Index/weight pairs with strictly increasing indices and no stored zeros.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  double l2_norm() const;
  bool operator==(const SparseVector&) const = default;
};

SparseVector dense_to_sparse(std::span<const double> values);
std::vector<double> sparse_to_dense(const SparseVector& vec, std::size_t dim);

struct NgramRange {
  int lo = 1;
  int hi = 1;
  bool operator==(const NgramRange&) const = default;
};

// N-gram vocabulary with stable, lexicographically assigned indices.
struct FeatureSpace {
  NgramRange ngram_range;
  std::size_t min_df = 1;
  double max_df_ratio = 1.0;
  NormalizationLevel level = NormalizationLevel::Lower;
  std::vector<std::string> gram_of;  // index -> gram
  std::unordered_map<std::string, std::uint32_t> index_of;

  std::size_t size() const { return gram_of.size(); }
  std::optional<std::uint32_t> index(const std::string& gram) const;
};

struct IdfTable {
  std::vector<double> idf;  // per feature index
  std::size_t n_docs = 0;
};

// Naive-Bayes log-count ratios over the feature space.
struct RatioVector {
  std::vector<double> r;
  double alpha = 1.0;
};

struct EmbeddingTable {
  std::size_t dimension = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
};

// Space-joined token windows of each length in [lo,hi].
std::vector<std::string> ngrams(const std::vector<std::string>& tokens,
                                NgramRange range);

FeatureSpace fit_vocabulary(const std::vector<const Document*>& docs,
                            NgramRange range, std::size_t min_df,
                            double max_df_ratio, NormalizationLevel level);
FeatureSpace fit_vocabulary(const Corpus& corpus, NgramRange range,
                            std::size_t min_df, double max_df_ratio,
                            NormalizationLevel level);

// Binary bag of words: weight 1.0 per in-vocabulary gram, OOV dropped.
SparseVector vectorize_binary(const Document& doc, const FeatureSpace& space);

// Smoothed idf: ln((1 + N) / (1 + df)) + 1, never below 1.
IdfTable fit_tfidf(const std::vector<const Document*>& docs,
                   const FeatureSpace& space);
IdfTable fit_tfidf(const Corpus& corpus, const FeatureSpace& space);

double sublinear_tf(double tf);

// (1 + ln tf) * idf per gram, L2-normalized.
SparseVector vectorize_tfidf(const Document& doc, const FeatureSpace& space,
                             const IdfTable& idf);

RatioVector nb_log_count_ratio(std::span<const SparseVector> vectors,
                               std::span<const int> labels, std::size_t dim,
                               double alpha);

SparseVector apply_nbsvm_weighting(const SparseVector& vec,
                                   const RatioVector& ratios);

// Text embedding format: optional "<count> <dim>" header, then one
// "token v1 .. vd" row per line.
EmbeddingTable load_embedding_table(const std::filesystem::path& path);

std::vector<double> embed_average(const std::vector<std::string>& tokens,
                                  const EmbeddingTable& table);

nlohmann::json feature_space_to_json(const FeatureSpace& space);
FeatureSpace feature_space_from_json(const nlohmann::json& obj);

}  // namespace crossdom
