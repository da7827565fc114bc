#include "crossdom/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <tuple>

#include "crossdom/cross_eval.hpp"
#include "crossdom/parallel.hpp"

namespace crossdom {

namespace {

int loss_rank(Loss loss) {
  switch (loss) {
    case Loss::Hinge:
      return 0;
    case Loss::SquaredHinge:
      return 1;
    case Loss::Logistic:
      return 2;
  }
  return 3;
}

int weight_rank(ClassWeight weight) {
  return weight == ClassWeight::Default ? 0 : 1;
}

int level_rank(NormalizationLevel level) {
  switch (level) {
    case NormalizationLevel::Lower:
      return 0;
    case NormalizationLevel::Clean:
      return 1;
    case NormalizationLevel::Preproc:
      return 2;
  }
  return 3;
}

// Tie-breaking order: smaller C, narrower n-gram range, then loss order.
auto config_order_key(const PipelineConfig& config) {
  return std::make_tuple(config.C,
                         config.ngram_range.hi - config.ngram_range.lo,
                         config.ngram_range.lo, loss_rank(config.loss),
                         weight_rank(config.class_weight),
                         level_rank(config.level));
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::vector<const Document*> select_docs(const Corpus& corpus,
                                         const std::vector<std::size_t>& idx) {
  std::vector<const Document*> docs;
  docs.reserve(idx.size());
  for (std::size_t i : idx) docs.push_back(&corpus.documents[i]);
  return docs;
}

std::vector<int> select_labels(const Corpus& corpus,
                               const std::vector<std::size_t>& idx) {
  std::vector<int> labels;
  labels.reserve(idx.size());
  for (std::size_t i : idx) labels.push_back(corpus.documents[i].label);
  return labels;
}

// Fit on the training part, score positive F1 on the held-out part.
// Configurations that are infeasible on a tiny fold (empty vocabulary,
// single-class training part, an empty held-out part) score zero instead
// of aborting the search.
double fit_and_score(const Corpus& corpus,
                     const std::vector<std::size_t>& train_idx,
                     const std::vector<std::size_t>& eval_idx,
                     const PipelineConfig& config,
                     const SearchOptions& options) {
  if (eval_idx.empty()) return 0.0;
  TrainedPipeline pipeline;
  try {
    pipeline = fit_pipeline(select_docs(corpus, train_idx), config,
                            options.embeddings, options.fit);
  } catch (const FormatError&) {
    return 0.0;
  } catch (const std::invalid_argument&) {
    return 0.0;
  }
  std::vector<int> gold = select_labels(corpus, eval_idx);
  std::vector<int> pred;
  pred.reserve(eval_idx.size());
  for (std::size_t i : eval_idx)
    pred.push_back(pipeline.predict_label(corpus.documents[i]));
  return positive_f1(gold, pred);
}

}  // namespace

std::vector<PipelineConfig> GridSpec::enumerate() const {
  if (ngram_ranges.empty() || losses.empty() || class_weights.empty() ||
      C_values.empty() || levels.empty())
    throw std::invalid_argument("grid has an empty axis");
  std::vector<PipelineConfig> configs;
  for (double c : C_values)
    for (const auto& range : ngram_ranges)
      for (Loss loss : losses)
        for (ClassWeight weight : class_weights)
          for (NormalizationLevel level : levels) {
            PipelineConfig config;
            config.representation = representation;
            config.level = level;
            config.ngram_range = range;
            config.min_df = min_df;
            config.max_df_ratio = max_df_ratio;
            config.nb_alpha = nb_alpha;
            config.loss = loss;
            config.class_weight = weight;
            config.C = c;
            config.embedding_path = embedding_path;
            configs.push_back(std::move(config));
          }
  std::stable_sort(configs.begin(), configs.end(),
                   [](const PipelineConfig& a, const PipelineConfig& b) {
                     return config_order_key(a) < config_order_key(b);
                   });
  return configs;
}

GridSpec default_bow_grid() {
  GridSpec grid;
  grid.representation = Representation::BinaryBow;
  grid.ngram_ranges = {{1, 1}, {1, 2}, {1, 3}};
  grid.losses = {Loss::Hinge, Loss::SquaredHinge};
  grid.class_weights = {ClassWeight::Default, ClassWeight::Balanced};
  grid.C_values = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  grid.levels = {NormalizationLevel::Lower};
  grid.min_df = 1;
  grid.max_df_ratio = 1.0;
  return grid;
}

GridSpec default_nbsvm_grid() {
  GridSpec grid;
  grid.representation = Representation::Nbsvm;
  grid.ngram_ranges = {{1, 2}};
  grid.losses = {Loss::Logistic};
  grid.class_weights = {ClassWeight::Default, ClassWeight::Balanced};
  grid.C_values = {1, 2, 3, 4, 5, 10, 25, 50, 100, 200, 500};
  grid.levels = {NormalizationLevel::Lower};
  grid.min_df = 3;
  grid.max_df_ratio = 0.9;
  return grid;
}

GridSpec default_embedding_grid(const std::string& embedding_path) {
  GridSpec grid;
  grid.representation = Representation::Embedding;
  grid.ngram_ranges = {{1, 1}};
  grid.losses = {Loss::Logistic};
  grid.class_weights = {ClassWeight::Default, ClassWeight::Balanced};
  grid.C_values = {1, 2, 3, 4, 5, 10, 25, 50, 100, 200, 500};
  grid.levels = {NormalizationLevel::Lower};
  grid.embedding_path = embedding_path;
  return grid;
}

nlohmann::json grid_to_json(const GridSpec& grid) {
  nlohmann::json obj;
  obj["representation"] = to_string(grid.representation);
  obj["ngram_ranges"] = nlohmann::json::array();
  for (const auto& range : grid.ngram_ranges)
    obj["ngram_ranges"].push_back({range.lo, range.hi});
  obj["losses"] = nlohmann::json::array();
  for (Loss loss : grid.losses) obj["losses"].push_back(to_string(loss));
  obj["class_weights"] = nlohmann::json::array();
  for (ClassWeight weight : grid.class_weights)
    obj["class_weights"].push_back(to_string(weight));
  obj["C_values"] = grid.C_values;
  obj["levels"] = nlohmann::json::array();
  for (NormalizationLevel level : grid.levels)
    obj["levels"].push_back(to_string(level));
  obj["min_df"] = grid.min_df;
  obj["max_df_ratio"] = grid.max_df_ratio;
  obj["nb_alpha"] = grid.nb_alpha;
  if (!grid.embedding_path.empty())
    obj["embedding_path"] = grid.embedding_path;
  return obj;
}

GridSpec grid_from_json(const nlohmann::json& obj) {
  GridSpec grid;
  if (obj.contains("representation"))
    grid.representation =
        representation_from_string(obj.at("representation").get<std::string>());
  // Defaults follow the representation; explicit keys override them.
  switch (grid.representation) {
    case Representation::BinaryBow:
      grid = default_bow_grid();
      break;
    case Representation::Nbsvm:
      grid = default_nbsvm_grid();
      break;
    case Representation::Embedding:
      grid = default_embedding_grid("");
      break;
  }
  if (obj.contains("ngram_ranges")) {
    grid.ngram_ranges.clear();
    for (const auto& pair : obj.at("ngram_ranges"))
      grid.ngram_ranges.push_back(
          {pair.at(0).get<int>(), pair.at(1).get<int>()});
  }
  if (obj.contains("losses")) {
    grid.losses.clear();
    for (const auto& name : obj.at("losses"))
      grid.losses.push_back(loss_from_string(name.get<std::string>()));
  }
  if (obj.contains("class_weights")) {
    grid.class_weights.clear();
    for (const auto& name : obj.at("class_weights"))
      grid.class_weights.push_back(
          class_weight_from_string(name.get<std::string>()));
  }
  if (obj.contains("C_values"))
    grid.C_values = obj.at("C_values").get<std::vector<double>>();
  if (obj.contains("levels")) {
    grid.levels.clear();
    for (const auto& name : obj.at("levels"))
      grid.levels.push_back(
          normalization_level_from_string(name.get<std::string>()));
  }
  if (obj.contains("min_df")) grid.min_df = obj.at("min_df").get<std::size_t>();
  if (obj.contains("max_df_ratio"))
    grid.max_df_ratio = obj.at("max_df_ratio").get<double>();
  if (obj.contains("nb_alpha")) grid.nb_alpha = obj.at("nb_alpha").get<double>();
  if (obj.contains("embedding_path"))
    grid.embedding_path = obj.at("embedding_path").get<std::string>();
  return grid;
}

std::vector<std::vector<std::size_t>> stratified_kfold(
    std::span<const int> labels, std::size_t k, std::uint64_t seed,
    bool* small_class_warning) {
  if (k < 2) throw std::invalid_argument("stratified_kfold requires k >= 2");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i] == 1 ? 1 : 0].push_back(i);

  bool warn = false;
  for (int c = 0; c < 2; ++c)
    if (!by_class[c].empty() && by_class[c].size() < k) warn = true;
  if (small_class_warning) {
    *small_class_warning = warn;
  } else if (warn) {
    std::cerr << "warning: a class has fewer members than folds; some folds "
                 "will lack it\n";
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  // The +1 remainders rotate across classes so total fold sizes stay even.
  std::size_t cursor = 0;
  for (int c = 0; c < 2; ++c) {
    auto order = by_class[c];
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t base = order.size() / k;
    std::size_t extra = order.size() % k;
    std::size_t taken = 0;
    for (std::size_t f = 0; f < k; ++f) {
      std::size_t fold = (cursor + f) % k;
      std::size_t count = base + (f < extra ? 1 : 0);
      for (std::size_t j = 0; j < count; ++j)
        folds[fold].push_back(order[taken++]);
    }
    cursor = (cursor + extra) % k;
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

BestConfig nested_grid_search(const Corpus& train, const GridSpec& grid,
                              const SearchOptions& options) {
  auto configs = grid.enumerate();
  std::vector<int> labels;
  labels.reserve(train.documents.size());
  for (const auto& doc : train.documents) labels.push_back(doc.label);
  if (train.positives() == 0 || train.negatives() == 0)
    throw std::invalid_argument("training corpus \"" + train.name +
                                "\" has a single class");

  bool warned = false;
  auto outer_folds =
      stratified_kfold(labels, options.outer_k, options.seed, &warned);
  std::vector<std::size_t> all_indices(train.documents.size());
  for (std::size_t i = 0; i < all_indices.size(); ++i) all_indices[i] = i;

  // outer_scores[c] collects the outer-fold evaluations config c won.
  std::vector<std::vector<double>> outer_scores(configs.size());
  std::vector<std::vector<double>> inner_means(configs.size());

  for (std::size_t f = 0; f < outer_folds.size(); ++f) {
    std::vector<std::size_t> outer_train;
    for (std::size_t i : all_indices)
      if (!std::binary_search(outer_folds[f].begin(), outer_folds[f].end(), i))
        outer_train.push_back(i);

    auto outer_train_labels = select_labels(train, outer_train);
    auto inner_folds = stratified_kfold(outer_train_labels, options.inner_k,
                                        options.seed + f, &warned);

    // score_table[c * inner_k + g] — one slot per work unit.
    std::vector<double> score_table(configs.size() * inner_folds.size(), 0.0);
    parallel_for(
        score_table.size(), options.jobs, [&](std::size_t unit) {
          std::size_t c = unit / inner_folds.size();
          std::size_t g = unit % inner_folds.size();
          std::vector<std::size_t> inner_train;
          std::vector<std::size_t> inner_val;
          for (std::size_t pos = 0; pos < outer_train.size(); ++pos) {
            if (std::binary_search(inner_folds[g].begin(),
                                   inner_folds[g].end(), pos))
              inner_val.push_back(outer_train[pos]);
            else
              inner_train.push_back(outer_train[pos]);
          }
          score_table[unit] = fit_and_score(train, inner_train, inner_val,
                                            configs[c], options);
        });

    std::size_t winner = 0;
    double winner_mean = -1.0;
    for (std::size_t c = 0; c < configs.size(); ++c) {
      double sum = 0.0;
      for (std::size_t g = 0; g < inner_folds.size(); ++g)
        sum += score_table[c * inner_folds.size() + g];
      double config_mean = sum / static_cast<double>(inner_folds.size());
      inner_means[c].push_back(config_mean);
      if (config_mean > winner_mean) {
        winner_mean = config_mean;
        winner = c;  // configs are pre-sorted, so first win settles ties
      }
    }
    outer_scores[winner].push_back(
        fit_and_score(train, outer_train, outer_folds[f], configs[winner],
                      options));
  }

  // Highest mean outer score among fold winners; configurations that never
  // won a fold fall back to their mean inner score.
  std::ptrdiff_t best = -1;
  double best_mean = -1.0;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    if (outer_scores[c].empty()) continue;
    double m = mean(outer_scores[c]);
    if (m > best_mean) {
      best_mean = m;
      best = static_cast<std::ptrdiff_t>(c);
    }
  }
  if (best < 0) {
    for (std::size_t c = 0; c < configs.size(); ++c) {
      double m = mean(inner_means[c]);
      if (m > best_mean) {
        best_mean = m;
        best = static_cast<std::ptrdiff_t>(c);
      }
    }
  }

  BestConfig result;
  result.config = configs[static_cast<std::size_t>(best)];
  result.outer_scores = outer_scores[static_cast<std::size_t>(best)];
  result.mean_outer_f1 = mean(result.outer_scores);
  return result;
}

TrainedPipeline refit(const Corpus& train, const PipelineConfig& config,
                      const FitOptions& options,
                      std::shared_ptr<const EmbeddingTable> embeddings) {
  return fit_pipeline(train, config, std::move(embeddings), options);
}

}  // namespace crossdom
