#include "crossdom/cross_eval.hpp"

#include <algorithm>
#include <sstream>

#include "crossdom/manifest.hpp"
#include "crossdom/parallel.hpp"
#include "crossdom/report.hpp"

namespace crossdom {

double positive_f1(std::span<const int> gold, std::span<const int> pred) {
  if (gold.size() != pred.size())
    throw std::invalid_argument("gold and pred differ in length");
  if (gold.empty())
    throw std::invalid_argument("positive_f1 on empty sequences");
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (pred[i] == 1 && gold[i] == 1) tp += 1.0;
    if (pred[i] == 1 && gold[i] != 1) fp += 1.0;
    if (pred[i] != 1 && gold[i] == 1) fn += 1.0;
  }
  if (tp == 0.0) return 0.0;
  double precision = tp / (tp + fp);
  double recall = tp / (tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

bool EvalMatrix::has(const std::string& train_id,
                     const std::string& test_id) const {
  auto row = cells.find(train_id);
  return row != cells.end() && row->second.count(test_id) > 0;
}

double EvalMatrix::at(const std::string& train_id,
                      const std::string& test_id) const {
  return cells.at(train_id).at(test_id);
}

MatrixResult run_matrix(const std::vector<SplitPair>& corpora,
                        const MatrixOptions& options) {
  if (corpora.size() < 2)
    throw std::invalid_argument("run_matrix needs at least 2 corpora");

  MatrixResult result;
  EvalMatrix& matrix = result.matrix;
  matrix.seed = options.seed;
  for (const auto& pair : corpora) {
    matrix.train_ids.push_back(pair.train.name);
    matrix.test_ids.push_back(pair.test.name);
  }
  if (options.merged_id) matrix.train_ids.push_back(*options.merged_id);

  struct Row {
    std::string id;
    Corpus train;
    bool untrained = false;
    BestConfig best;
    std::map<std::string, double> scores;
    std::optional<TrainedPipeline> pipeline;
  };
  std::vector<Row> rows;
  for (const auto& pair : corpora) {
    Row row;
    row.id = pair.train.name;
    row.train = pair.train;
    rows.push_back(std::move(row));
  }
  if (options.merged_id) {
    std::vector<Corpus> trains;
    for (const auto& pair : corpora) trains.push_back(pair.train);
    Row row;
    row.id = *options.merged_id;
    row.train = merge_corpora(trains, *options.merged_id);
    rows.push_back(std::move(row));
  }

  parallel_for(rows.size(), options.jobs, [&](std::size_t r) {
    Row& row = rows[r];
    if (row.train.positives() == 0 || row.train.negatives() == 0) {
      row.untrained = true;
      return;
    }
    SearchOptions search;
    search.inner_k = options.inner_k;
    search.outer_k = options.outer_k;
    search.seed = derive_seed(options.seed, "matrix-row/" + row.id, r);
    // Leftover workers go to the grid evaluation inside each row.
    search.jobs = std::max<std::size_t>(1, options.jobs / rows.size());
    search.fit = options.fit;
    search.embeddings = options.embeddings;
    row.best = nested_grid_search(row.train, options.grid, search);
    FitOptions fit = options.fit;
    fit.seed = search.seed;
    row.pipeline = refit(row.train, row.best.config, fit, options.embeddings);
    for (const auto& pair : corpora) {
      std::vector<int> gold;
      std::vector<int> pred;
      gold.reserve(pair.test.documents.size());
      for (const auto& doc : pair.test.documents) {
        gold.push_back(doc.label);
        pred.push_back(row.pipeline->predict_label(doc));
      }
      row.scores[pair.test.name] = positive_f1(gold, pred);
    }
  });

  for (auto& row : rows) {
    matrix.exclusions[row.id] = options.exclude_from_avg;
    if (row.untrained) {
      matrix.untrained.insert(row.id);
      continue;
    }
    matrix.cells[row.id] = std::move(row.scores);
    matrix.configs[row.id] = std::move(row.best);
    result.pipelines.emplace(row.id, std::move(*row.pipeline));
  }
  return result;
}

double out_of_domain_average(const EvalMatrix& matrix,
                             const std::string& train_id,
                             const std::set<std::string>& extra_exclusions) {
  auto declared = matrix.exclusions.find(train_id);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& test_id : matrix.test_ids) {
    if (test_id == train_id) continue;
    if (declared != matrix.exclusions.end() && declared->second.count(test_id))
      continue;
    if (extra_exclusions.count(test_id)) continue;
    if (!matrix.has(train_id, test_id)) continue;
    sum += matrix.at(train_id, test_id);
    ++n;
  }
  if (n == 0)
    throw std::invalid_argument("no includable cells for train id \"" +
                                train_id + "\"");
  return sum / static_cast<double>(n);
}

std::optional<std::string> robust_best(const EvalMatrix& matrix) {
  // Rows attaining the maximum diagonal score; all rows when no row has a
  // diagonal cell (vacuous criterion).
  std::vector<std::string> trained;
  for (const auto& id : matrix.train_ids)
    if (!matrix.untrained.count(id)) trained.push_back(id);
  if (trained.empty()) return std::nullopt;

  double best_diag = -1.0;
  bool any_diag = false;
  for (const auto& id : trained)
    if (matrix.has(id, id)) {
      any_diag = true;
      best_diag = std::max(best_diag, matrix.at(id, id));
    }
  double best_avg = -1.0;
  bool any_avg = false;
  for (const auto& id : trained) {
    try {
      best_avg = std::max(best_avg, out_of_domain_average(matrix, id));
      any_avg = true;
    } catch (const std::invalid_argument&) {
    }
  }

  for (const auto& id : trained) {
    bool diag_ok = !any_diag || (matrix.has(id, id) && matrix.at(id, id) == best_diag);
    bool avg_ok = true;
    if (any_avg) {
      try {
        avg_ok = out_of_domain_average(matrix, id) == best_avg;
      } catch (const std::invalid_argument&) {
        avg_ok = false;
      }
    }
    if (diag_ok && avg_ok) return id;
  }
  return std::nullopt;
}

std::string matrix_to_tsv(const EvalMatrix& matrix) {
  std::ostringstream out;
  out << "train";
  for (const auto& test_id : matrix.test_ids) out << '\t' << test_id;
  out << "\tavg\n";
  for (const auto& train_id : matrix.train_ids) {
    out << train_id;
    if (matrix.untrained.count(train_id)) {
      for (std::size_t i = 0; i <= matrix.test_ids.size(); ++i) out << "\t—";
      out << '\n';
      continue;
    }
    for (const auto& test_id : matrix.test_ids)
      out << '\t' << format_score(matrix.at(train_id, test_id));
    out << '\t' << format_score(out_of_domain_average(matrix, train_id))
        << '\n';
  }
  return out.str();
}

std::string matrix_to_heatmap(const EvalMatrix& matrix) {
  std::ostringstream out;
  out << "# x=test y=train value=positive_f1\n";
  for (std::size_t y = 0; y < matrix.train_ids.size(); ++y) {
    const auto& train_id = matrix.train_ids[y];
    for (std::size_t x = 0; x < matrix.test_ids.size(); ++x) {
      const auto& test_id = matrix.test_ids[x];
      if (!matrix.has(train_id, test_id)) continue;
      out << x << ' ' << y << ' '
          << format_double(matrix.at(train_id, test_id)) << '\n';
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json matrix_to_json(const EvalMatrix& matrix) {
  nlohmann::json obj;
  obj["train_ids"] = matrix.train_ids;
  obj["test_ids"] = matrix.test_ids;
  obj["seed"] = matrix.seed;
  obj["untrained"] = std::vector<std::string>(matrix.untrained.begin(),
                                              matrix.untrained.end());
  nlohmann::json cells = nlohmann::json::object();
  nlohmann::json avgs = nlohmann::json::object();
  nlohmann::json configs = nlohmann::json::object();
  for (const auto& train_id : matrix.train_ids) {
    if (matrix.untrained.count(train_id)) continue;
    nlohmann::json row = nlohmann::json::object();
    for (const auto& test_id : matrix.test_ids)
      if (matrix.has(train_id, test_id))
        row[test_id] = matrix.at(train_id, test_id);
    cells[train_id] = std::move(row);
    avgs[train_id] = out_of_domain_average(matrix, train_id);
    auto it = matrix.configs.find(train_id);
    if (it != matrix.configs.end()) {
      configs[train_id]["config"] = pipeline_config_to_json(it->second.config);
      configs[train_id]["mean_outer_f1"] = it->second.mean_outer_f1;
      configs[train_id]["outer_scores"] = it->second.outer_scores;
    }
  }
  obj["cells"] = std::move(cells);
  obj["avg"] = std::move(avgs);
  obj["configs"] = std::move(configs);
  nlohmann::json exclusions = nlohmann::json::object();
  for (const auto& [train_id, excluded] : matrix.exclusions)
    exclusions[train_id] =
        std::vector<std::string>(excluded.begin(), excluded.end());
  obj["exclusions"] = std::move(exclusions);
  auto robust = robust_best(matrix);
  obj["robust_best"] = robust ? nlohmann::json(*robust) : nlohmann::json();
  return obj;
}

EvalMatrix matrix_from_json(const nlohmann::json& obj) {
  EvalMatrix matrix;
  matrix.train_ids = obj.at("train_ids").get<std::vector<std::string>>();
  matrix.test_ids = obj.at("test_ids").get<std::vector<std::string>>();
  matrix.seed = obj.value("seed", std::uint64_t{0});
  for (const auto& id : obj.at("untrained"))
    matrix.untrained.insert(id.get<std::string>());
  for (const auto& [train_id, row] : obj.at("cells").items())
    for (const auto& [test_id, score] : row.items())
      matrix.cells[train_id][test_id] = score.get<double>();
  if (obj.contains("exclusions"))
    for (const auto& [train_id, excluded] : obj.at("exclusions").items())
      for (const auto& id : excluded)
        matrix.exclusions[train_id].insert(id.get<std::string>());
  return matrix;
}

}  // namespace crossdom
