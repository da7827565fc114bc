#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "crossdom/corpus.hpp"
#include "crossdom/linear.hpp"

namespace crossdom {

enum class RankCriterion { Positive, Absolute };

// Top k grams by coefficient value (Positive keeps strictly positive ones)
// or by absolute value; ties break lexicographically. Asking for more than
// the space holds truncates the result.
std::vector<std::pair<std::string, double>> top_features(
    const LinearModel& model, const FeatureSpace& space, std::size_t k,
    RankCriterion criterion);

// How many test corpora contain each feature, histogrammed.
struct CoverageHistogram {
  std::size_t k = 0;  // number of features considered
  std::map<std::size_t, std::size_t> counts;

  std::map<std::size_t, double> percentages() const;
};

CoverageHistogram testset_coverage(const std::vector<std::string>& features,
                                   const std::vector<Corpus>& test_corpora,
                                   NgramRange range, NormalizationLevel level);

// Per-feature coefficient mean and population standard deviation across
// models; models whose space lacks the feature contribute nothing.
struct FeatureStability {
  std::string gram;
  std::optional<double> mean;    // null when no model holds the feature
  std::optional<double> stddev;
  std::size_t n_models = 0;
};

std::vector<FeatureStability> coefficient_stability(
    const std::vector<std::pair<const LinearModel*, const FeatureSpace*>>& models,
    const std::vector<std::string>& features);

// Fraction of features with at least one constituent unigram in the lexicon.
double lexicon_share(const std::vector<std::string>& features,
                     const std::unordered_set<std::string>& lexicon);

struct AnnotatedToken {
  std::string token;
  std::optional<double> coefficient;  // null marks OOV
  double intensity = 0.0;             // |coef| / max |coef| over the document
};

struct AnnotatedDocument {
  std::string id;
  int gold = 0;
  int predicted = 0;
  std::vector<AnnotatedToken> tokens;
};

// Unigram-level coefficient markup of one document; the prediction comes
// from the full binary feature vector.
AnnotatedDocument annotate(const Document& doc, const LinearModel& model,
                           const FeatureSpace& space, NormalizationLevel level);

nlohmann::json annotated_to_json(const AnnotatedDocument& doc);
std::string annotated_to_ansi(const AnnotatedDocument& doc);
std::string annotated_to_html(const AnnotatedDocument& doc);

}  // namespace crossdom
