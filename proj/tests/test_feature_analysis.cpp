#include <algorithm>
#include <cmath>
#include <random>

#include "crossdom/feature_analysis.hpp"
#include "crossdom/featurize.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace crossdom;
using namespace crossdom::testing;

TEST_SUITE_BEGIN("feature_analysis");

namespace {

// Model/space pair over explicit gram->weight assignments.
std::pair<LinearModel, FeatureSpace> hand_model(
    const std::vector<std::pair<std::string, double>>& weights) {
  FeatureSpace space;
  std::vector<std::pair<std::string, double>> sorted = weights;
  std::sort(sorted.begin(), sorted.end());
  LinearModel model;
  for (const auto& [gram, weight] : sorted) {
    space.index_of.emplace(gram, static_cast<std::uint32_t>(space.gram_of.size()));
    space.gram_of.push_back(gram);
    model.weights.push_back(weight);
  }
  return {model, space};
}

}  // namespace

TEST_CASE("top_features by positive and absolute value") {
  auto [model, space] =
      hand_model({{"a", 0.9}, {"b", -0.95}, {"c", 0.1}});
  auto positive = top_features(model, space, 2, RankCriterion::Positive);
  REQUIRE(positive.size() == 2);
  CHECK(positive[0].first == "a");
  CHECK(positive[1].first == "c");

  auto absolute = top_features(model, space, 2, RankCriterion::Absolute);
  CHECK(absolute[0] == std::pair<std::string, double>{"b", -0.95});
  CHECK(absolute[1] == std::pair<std::string, double>{"a", 0.9});

  // k beyond the space truncates instead of failing.
  CHECK(top_features(model, space, 50, RankCriterion::Absolute).size() == 3);
  CHECK(top_features(model, space, 50, RankCriterion::Positive).size() == 2);
  CHECK_THROWS_AS(top_features(model, space, 0, RankCriterion::Positive),
                  std::invalid_argument);
}

TEST_CASE("top_features equals the full-sort prefix on random models") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::pair<std::string, double>> assignment;
    for (int i = 0; i < 50; ++i)
      assignment.emplace_back("g" + std::to_string(i), weight(rng));
    auto [model, space] = hand_model(assignment);
    auto got = top_features(model, space, 10, RankCriterion::Absolute);
    auto full = top_features(model, space, 50, RankCriterion::Absolute);
    REQUIRE(full.size() == 50);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == full[i]);
    for (std::size_t i = 1; i < full.size(); ++i)
      CHECK(std::fabs(full[i - 1].second) >= std::fabs(full[i].second));
  }
}

TEST_CASE("top_features at full size permutes the space") {
  auto [model, space] = hand_model({{"x", 0.3}, {"y", -0.2}, {"z", 0.0}});
  auto all = top_features(model, space, space.size(), RankCriterion::Absolute);
  std::vector<std::string> grams;
  for (const auto& [gram, coef] : all) grams.push_back(gram);
  std::sort(grams.begin(), grams.end());
  CHECK(grams == space.gram_of);
}

TEST_CASE("testset_coverage counts containing corpora") {
  Corpus one = make_corpus("t1", {doc("1", "x alpha", 0)});
  Corpus two = make_corpus("t2", {doc("1", "x beta", 0)});
  auto histogram = testset_coverage({"x"}, {one, two}, {1, 1},
                                    NormalizationLevel::Lower);
  CHECK(histogram.counts.at(2) == 1);

  auto missing = testset_coverage({"nowhere"}, {one, two}, {1, 1},
                                  NormalizationLevel::Lower);
  CHECK(missing.counts.at(0) == 1);

  auto mixed = testset_coverage({"x", "alpha", "nowhere"}, {one, two}, {1, 1},
                                NormalizationLevel::Lower);
  CHECK(mixed.counts.at(0) == 1);
  CHECK(mixed.counts.at(1) == 1);
  CHECK(mixed.counts.at(2) == 1);
  double percent_total = 0.0;
  for (const auto& [sets, percent] : mixed.percentages())
    percent_total += percent;
  CHECK(std::fabs(percent_total - 100.0) < 1e-9);
}

TEST_CASE("coverage respects the gram settings of the model") {
  Corpus corpus = make_corpus("t", {doc("1", "a b", 0)});
  auto unigram = testset_coverage({"a b"}, {corpus}, {1, 1},
                                  NormalizationLevel::Lower);
  CHECK(unigram.counts.at(0) == 1);  // bigram absent from a unigram inventory
  auto bigram = testset_coverage({"a b"}, {corpus}, {1, 2},
                                 NormalizationLevel::Lower);
  CHECK(bigram.counts.at(1) == 1);
}

TEST_CASE("coefficient_stability means and population deviation") {
  auto [m1, s1] = hand_model({{"w", 0.5}, {"only1", 0.2}});
  auto [m2, s2] = hand_model({{"w", 0.9}, {"flip", 0.3}});
  auto [m3, s3] = hand_model({{"flip", -0.3}});
  std::vector<std::pair<const LinearModel*, const FeatureSpace*>> models = {
      {&m1, &s1}, {&m2, &s2}, {&m3, &s3}};
  auto report =
      coefficient_stability(models, {"w", "only1", "flip", "ghost"});
  REQUIRE(report.size() == 4);
  CHECK(report[0].mean == doctest::Approx(0.7));
  CHECK(report[0].stddev == doctest::Approx(0.2));
  CHECK(report[0].n_models == 2);
  CHECK(report[1].mean == doctest::Approx(0.2));
  CHECK(report[1].stddev == doctest::Approx(0.0));
  CHECK(report[2].mean == doctest::Approx(0.0));
  CHECK(report[2].stddev == doctest::Approx(0.3));
  CHECK_FALSE(report[3].mean.has_value());
  CHECK(report[3].n_models == 0);

  std::vector<std::pair<const LinearModel*, const FeatureSpace*>> lone = {
      {&m1, &s1}};
  CHECK_THROWS_AS(coefficient_stability(lone, {"w"}), std::invalid_argument);
}

TEST_CASE("coefficient_stability ignores model order") {
  auto [m1, s1] = hand_model({{"w", 0.4}, {"v", -0.1}});
  auto [m2, s2] = hand_model({{"w", 0.8}});
  std::vector<std::pair<const LinearModel*, const FeatureSpace*>> ab = {
      {&m1, &s1}, {&m2, &s2}};
  std::vector<std::pair<const LinearModel*, const FeatureSpace*>> ba = {
      {&m2, &s2}, {&m1, &s1}};
  auto ra = coefficient_stability(ab, {"w", "v"});
  auto rb = coefficient_stability(ba, {"w", "v"});
  for (std::size_t i = 0; i < ra.size(); ++i) {
    CHECK(ra[i].mean == rb[i].mean);
    CHECK(ra[i].stddev == rb[i].stddev);
  }
}

TEST_CASE("lexicon_share tests constituent unigrams") {
  CHECK(lexicon_share({"f*ck off", "hello"}, {"f*ck"}) == 0.5);
  CHECK(lexicon_share({"a", "b"}, {}) == 0.0);
  CHECK_THROWS_AS(lexicon_share({}, {"x"}), std::invalid_argument);
}

TEST_CASE("lexicon_share grows monotonically with the lexicon") {
  std::mt19937_64 rng(107);
  std::vector<std::string> pool = {"aa", "bb", "cc", "dd", "ee", "ff"};
  for (int round = 0; round < 50; ++round) {
    std::vector<std::string> features;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < 8; ++i) {
      std::string gram = pool[pick(rng)];
      if (rng() % 2) gram += " " + pool[pick(rng)];
      features.push_back(gram);
    }
    std::unordered_set<std::string> small, large;
    for (const auto& word : pool) {
      if (rng() % 3 == 0) small.insert(word);
      if (rng() % 2 == 0) large.insert(word);
    }
    large.insert(small.begin(), small.end());
    CHECK(lexicon_share(features, small) <= lexicon_share(features, large));
  }
}

TEST_CASE("annotate assigns normalized intensities") {
  auto [model, space] = hand_model({{"f*ck", 0.94}, {"off", 0.47}});
  model.intercept = -0.5;
  Document d = doc("q", "f*ck off", 1);
  AnnotatedDocument annotated =
      annotate(d, model, space, NormalizationLevel::Lower);
  REQUIRE(annotated.tokens.size() == 2);
  CHECK(annotated.tokens[0].intensity == doctest::Approx(1.0));
  CHECK(annotated.tokens[1].intensity == doctest::Approx(0.5));
  CHECK(annotated.gold == 1);
  CHECK(annotated.predicted == 1);  // 0.94 + 0.47 - 0.5 > 0
}

TEST_CASE("annotate marks OOV tokens and predicts from the intercept") {
  auto [model, space] = hand_model({{"known", 0.4}});
  model.intercept = -0.2;
  Document d = doc("q", "@username totally unseen", 0);
  AnnotatedDocument annotated =
      annotate(d, model, space, NormalizationLevel::Lower);
  for (const auto& token : annotated.tokens) {
    CHECK_FALSE(token.coefficient.has_value());
    CHECK(token.intensity == 0.0);
  }
  CHECK(annotated.predicted == 0);  // negative intercept decides
}

TEST_CASE("annotate intensities stay in range with a max of one") {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  for (int round = 0; round < 30; ++round) {
    std::vector<std::pair<std::string, double>> assignment;
    for (int i = 0; i < 6; ++i)
      assignment.emplace_back("w" + std::to_string(i), weight(rng));
    auto [model, space] = hand_model(assignment);
    Document d = doc("q", "w0 w1 w2 zzz w5", 0);
    AnnotatedDocument annotated =
        annotate(d, model, space, NormalizationLevel::Lower);
    double max_intensity = 0.0;
    bool any_known = false;
    for (const auto& token : annotated.tokens) {
      CHECK(token.intensity >= 0.0);
      CHECK(token.intensity <= 1.0);
      if (token.coefficient) {
        any_known = true;
        max_intensity = std::max(max_intensity, token.intensity);
      }
    }
    CHECK(any_known);
    CHECK(max_intensity == doctest::Approx(1.0));
  }
}

TEST_CASE("annotation renderings carry the structural markup") {
  auto [model, space] = hand_model({{"skull", 0.11}, {"you", 0.19}});
  Document d = doc("q", "@username skull you", 1);
  AnnotatedDocument annotated =
      annotate(d, model, space, NormalizationLevel::Lower);

  nlohmann::json obj = annotated_to_json(annotated);
  CHECK(obj["tokens"][0]["coefficient"].is_null());  // boxed OOV handle
  CHECK(obj["tokens"][1]["token"] == "skull");
  CHECK(obj["tokens"][2]["intensity"] == 1.0);

  std::string html = annotated_to_html(annotated);
  CHECK(html.find("class=\"oov\"") != std::string::npos);
  CHECK(html.find("skull") != std::string::npos);
  std::string ansi = annotated_to_ansi(annotated);
  CHECK(ansi.find("@username") != std::string::npos);
}

TEST_SUITE_END();
