#include <algorithm>
#include <random>

#include "crossdom/cross_eval.hpp"
#include "crossdom/model_select.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace crossdom;
using namespace crossdom::testing;

TEST_SUITE_BEGIN("model_select");

TEST_CASE("stratified_kfold balances positives") {
  std::vector<int> labels = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0};
  auto folds = stratified_kfold(labels, 2, 5);
  REQUIRE(folds.size() == 2);
  for (const auto& fold : folds) {
    std::size_t pos = 0;
    for (std::size_t i : fold) pos += labels[i] == 1 ? 1 : 0;
    CHECK(pos == 1);
  }
}

TEST_CASE("stratified_kfold makes even folds") {
  std::vector<int> labels(100, 0);
  for (int i = 0; i < 37; ++i) labels[i] = 1;
  auto folds = stratified_kfold(labels, 10, 3);
  for (const auto& fold : folds) CHECK(fold.size() == 10);
}

TEST_CASE("stratified_kfold rejects k below 2") {
  std::vector<int> labels = {0, 1};
  CHECK_THROWS_AS(stratified_kfold(labels, 1, 0), std::invalid_argument);
}

TEST_CASE("stratified_kfold partitions under random seeds") {
  std::mt19937_64 rng(83);
  for (int round = 0; round < 100; ++round) {
    std::uniform_int_distribution<std::size_t> size(6, 60);
    std::uniform_int_distribution<std::size_t> k_of(2, 5);
    std::size_t n = size(rng);
    std::size_t k = k_of(rng);
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i)
      labels.push_back(static_cast<int>(rng() % 2));
    bool warned = false;
    auto folds = stratified_kfold(labels, k, rng(), &warned);
    std::vector<bool> seen(n, false);
    std::size_t total = 0;
    std::vector<std::size_t> pos_counts;
    for (const auto& fold : folds) {
      std::size_t pos = 0;
      for (std::size_t i : fold) {
        CHECK_FALSE(seen[i]);  // pairwise disjoint
        seen[i] = true;
        ++total;
        pos += labels[i] == 1 ? 1 : 0;
      }
      pos_counts.push_back(pos);
    }
    CHECK(total == n);  // union covers everything
    auto [lo, hi] = std::minmax_element(pos_counts.begin(), pos_counts.end());
    CHECK(*hi - *lo <= 1);
  }
}

TEST_CASE("stratified_kfold is deterministic in the seed") {
  std::vector<int> labels(40);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i % 4 == 0;
  CHECK(stratified_kfold(labels, 5, 11) == stratified_kfold(labels, 5, 11));
  CHECK(stratified_kfold(labels, 5, 11) != stratified_kfold(labels, 5, 12));
}

TEST_CASE("degenerate one-point grid returns plain outer-CV scores") {
  Corpus corpus = make_marker_corpus("m", "zap", 60, 0.3);
  GridSpec grid;
  grid.representation = Representation::BinaryBow;
  grid.ngram_ranges = {{1, 1}};
  grid.losses = {Loss::Hinge};
  grid.class_weights = {ClassWeight::Default};
  grid.C_values = {10.0};
  grid.levels = {NormalizationLevel::Lower};

  SearchOptions options;
  options.inner_k = 3;
  options.outer_k = 3;
  options.seed = 17;
  BestConfig best = nested_grid_search(corpus, grid, options);
  CHECK(best.config.C == 10.0);
  CHECK(best.config.ngram_range == NgramRange{1, 1});
  REQUIRE(best.outer_scores.size() == 3);

  // Independent route: same folds, direct fit/score per fold.
  std::vector<int> labels;
  for (const auto& d : corpus.documents) labels.push_back(d.label);
  auto folds = stratified_kfold(labels, 3, options.seed);
  std::vector<double> expected;
  for (const auto& fold : folds) {
    std::vector<const Document*> train_docs;
    std::vector<int> gold;
    std::vector<const Document*> val_docs;
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
      if (std::binary_search(fold.begin(), fold.end(), i))
        val_docs.push_back(&corpus.documents[i]);
      else
        train_docs.push_back(&corpus.documents[i]);
    }
    TrainedPipeline pipeline =
        fit_pipeline(train_docs, best.config, nullptr, options.fit);
    std::vector<int> pred;
    for (const auto* d : val_docs) {
      gold.push_back(d->label);
      pred.push_back(pipeline.predict_label(*d));
    }
    expected.push_back(positive_f1(gold, pred));
  }
  std::sort(expected.begin(), expected.end());
  auto got = best.outer_scores;
  std::sort(got.begin(), got.end());
  CHECK(got == expected);
  double mean = 0.0;
  for (double s : best.outer_scores) mean += s;
  mean /= static_cast<double>(best.outer_scores.size());
  CHECK(std::fabs(best.mean_outer_f1 - mean) < 1e-12);
}

TEST_CASE("bigram-separable data selects the wider range") {
  Corpus corpus = make_bigram_corpus("bg", 30, 30);
  GridSpec grid;
  grid.representation = Representation::BinaryBow;
  grid.ngram_ranges = {{1, 1}, {1, 2}};
  grid.losses = {Loss::Hinge};
  grid.class_weights = {ClassWeight::Default};
  grid.C_values = {1.0};
  grid.levels = {NormalizationLevel::Lower};
  SearchOptions options;
  options.seed = 5;
  BestConfig best = nested_grid_search(corpus, grid, options);
  CHECK(best.config.ngram_range == NgramRange{1, 2});
  CHECK(best.mean_outer_f1 == 1.0);
}

TEST_CASE("equal scores break ties toward the smaller C") {
  // Large enough that every text variant stays in each training partition,
  // so all three C values reach identical fold scores.
  Corpus corpus = make_marker_corpus("m", "zap", 180, 0.3);
  GridSpec grid;
  grid.representation = Representation::BinaryBow;
  grid.ngram_ranges = {{1, 1}};
  grid.losses = {Loss::Hinge};
  grid.class_weights = {ClassWeight::Default};
  grid.C_values = {100.0, 1.0, 10.0};  // all separate this data perfectly
  grid.levels = {NormalizationLevel::Lower};
  SearchOptions options;
  options.seed = 23;
  BestConfig best = nested_grid_search(corpus, grid, options);
  CHECK(best.config.C == 1.0);
  CHECK(best.mean_outer_f1 == 1.0);
}

TEST_CASE("fold featurization never indexes held-out grams") {
  // Each document carries a unique token, so every fold's validation part
  // has grams the training part cannot contain.
  Corpus corpus = make_bigram_corpus("bg", 20, 20);
  std::vector<int> labels;
  for (const auto& d : corpus.documents) labels.push_back(d.label);
  auto folds = stratified_kfold(labels, 4, 31);
  for (const auto& fold : folds) {
    std::vector<const Document*> train_docs;
    for (std::size_t i = 0; i < corpus.documents.size(); ++i)
      if (!std::binary_search(fold.begin(), fold.end(), i))
        train_docs.push_back(&corpus.documents[i]);
    FeatureSpace space =
        fit_vocabulary(train_docs, {1, 2}, 1, 1.0, NormalizationLevel::Lower);
    for (std::size_t i : fold) {
      std::string unique = "uniq" + std::to_string(i);
      CHECK_FALSE(space.index(unique).has_value());
    }
  }
}

TEST_CASE("nested search is deterministic") {
  Corpus corpus = make_bigram_corpus("bg", 20, 20);
  GridSpec grid;
  grid.ngram_ranges = {{1, 1}, {1, 2}};
  grid.losses = {Loss::Hinge, Loss::SquaredHinge};
  grid.class_weights = {ClassWeight::Default};
  grid.C_values = {0.1, 1.0};
  grid.levels = {NormalizationLevel::Lower};
  SearchOptions options;
  options.inner_k = 5;
  options.seed = 37;
  BestConfig a = nested_grid_search(corpus, grid, options);
  BestConfig b = nested_grid_search(corpus, grid, options);
  CHECK(a.config == b.config);
  CHECK(a.mean_outer_f1 == b.mean_outer_f1);
  CHECK(a.outer_scores == b.outer_scores);

  options.jobs = 4;  // parallel evaluation must not change the outcome
  BestConfig c = nested_grid_search(corpus, grid, options);
  CHECK(a.config == c.config);
  CHECK(a.outer_scores == c.outer_scores);
}

TEST_CASE("searches survive fold counts above the corpus size") {
  // 12 documents with 10 inner folds: the outer-train partitions are
  // smaller than the inner fold count, so some inner folds come out empty.
  Corpus corpus = make_corpus(
      "tiny", {doc("1", "good zap day", 1), doc("2", "calm zap walk", 1),
               doc("3", "good day", 0), doc("4", "calm walk", 0),
               doc("5", "zap words", 1), doc("6", "more words", 0),
               doc("7", "zap again", 1), doc("8", "again quiet", 0),
               doc("9", "zap here", 1), doc("10", "here now", 0),
               doc("11", "zap last", 1), doc("12", "last one", 0)});
  GridSpec grid;
  grid.C_values = {1.0};
  SearchOptions options;
  options.seed = 2;
  BestConfig best = nested_grid_search(corpus, grid, options);
  CHECK(best.outer_scores.size() == 3);
}

TEST_CASE("single-class corpora are rejected") {
  Corpus corpus = make_corpus("c", {doc("1", "a", 0), doc("2", "b", 0),
                                    doc("3", "c", 0), doc("4", "d", 0)});
  GridSpec grid;
  SearchOptions options;
  CHECK_THROWS_AS(nested_grid_search(corpus, grid, options),
                  std::invalid_argument);
}

TEST_CASE("empty grid axes are rejected") {
  GridSpec grid;
  grid.C_values.clear();
  CHECK_THROWS_AS(grid.enumerate(), std::invalid_argument);
}

TEST_CASE("refit equals a direct fit for the degenerate grid") {
  Corpus corpus = make_marker_corpus("m", "zap", 40, 0.25);
  PipelineConfig config;
  config.ngram_range = {1, 1};
  config.C = 5.0;
  FitOptions fit;
  fit.seed = 3;
  TrainedPipeline via_refit = refit(corpus, config, fit);
  TrainedPipeline direct = fit_pipeline(corpus, config, nullptr, fit);
  CHECK(via_refit.model.weights == direct.model.weights);
  CHECK(via_refit.model.intercept == direct.model.intercept);
  CHECK(via_refit.space.gram_of == direct.space.gram_of);
}

TEST_CASE("refit vocabulary covers every inner-fold vocabulary") {
  Corpus corpus = make_bigram_corpus("bg", 15, 15);
  std::vector<int> labels;
  for (const auto& d : corpus.documents) labels.push_back(d.label);
  FeatureSpace full =
      fit_vocabulary(corpus, {1, 2}, 1, 1.0, NormalizationLevel::Lower);
  auto folds = stratified_kfold(labels, 3, 41);
  for (const auto& fold : folds) {
    std::vector<const Document*> train_docs;
    for (std::size_t i = 0; i < corpus.documents.size(); ++i)
      if (!std::binary_search(fold.begin(), fold.end(), i))
        train_docs.push_back(&corpus.documents[i]);
    FeatureSpace sub =
        fit_vocabulary(train_docs, {1, 2}, 1, 1.0, NormalizationLevel::Lower);
    for (const auto& gram : sub.gram_of) CHECK(full.index(gram).has_value());
  }
}

TEST_CASE("grid json round-trips and honors representation defaults") {
  GridSpec grid = grid_from_json(nlohmann::json::parse(
      R"({"representation":"nbsvm","C_values":[1,5]})"));
  CHECK(grid.representation == Representation::Nbsvm);
  CHECK(grid.min_df == 3);  // representation default
  CHECK(grid.max_df_ratio == 0.9);
  CHECK(grid.C_values == std::vector<double>{1.0, 5.0});
  CHECK(grid.losses == std::vector<Loss>{Loss::Logistic});

  GridSpec bow = default_bow_grid();
  GridSpec back = grid_from_json(grid_to_json(bow));
  CHECK(back.representation == bow.representation);
  CHECK(back.C_values == bow.C_values);
  CHECK(back.ngram_ranges.size() == bow.ngram_ranges.size());
  CHECK(back.min_df == bow.min_df);
}

TEST_SUITE_END();
