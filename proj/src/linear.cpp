#include "crossdom/linear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crossdom {

namespace {

constexpr std::uint32_t kSparseSerializationThreshold = 1000000;

double loss_value(Loss loss, double margin) {
  switch (loss) {
    case Loss::Hinge:
      return std::max(0.0, 1.0 - margin);
    case Loss::SquaredHinge: {
      double h = std::max(0.0, 1.0 - margin);
      return h * h;
    }
    case Loss::Logistic:
      // log(1 + exp(-m)), stable for large |m|.
      return margin > 0.0 ? std::log1p(std::exp(-margin))
                          : -margin + std::log1p(std::exp(margin));
  }
  throw std::invalid_argument("unknown loss");
}

// dL/dmargin; hinge takes the 0 subgradient at the kink.
double loss_slope(Loss loss, double margin) {
  switch (loss) {
    case Loss::Hinge:
      return margin < 1.0 ? -1.0 : 0.0;
    case Loss::SquaredHinge:
      return margin < 1.0 ? -2.0 * (1.0 - margin) : 0.0;
    case Loss::Logistic:
      return margin > 0.0 ? -std::exp(-margin) / (1.0 + std::exp(-margin))
                          : -1.0 / (1.0 + std::exp(margin));
  }
  throw std::invalid_argument("unknown loss");
}

void check_inputs(std::span<const SparseVector> X, std::span<const int> y,
                  std::size_t dim) {
  if (X.size() != y.size())
    throw std::invalid_argument("X and y differ in length");
  for (const auto& vec : X)
    for (const auto& [idx, w] : vec.items)
      if (idx >= dim)
        throw std::invalid_argument(
            "feature index " + std::to_string(idx) +
            " out of range for dimensionality " + std::to_string(dim));
}

}  // namespace

Loss loss_from_string(std::string_view name) {
  if (name == "hinge") return Loss::Hinge;
  if (name == "squared_hinge") return Loss::SquaredHinge;
  if (name == "logistic") return Loss::Logistic;
  throw std::invalid_argument("unknown loss: " + std::string(name));
}

std::string to_string(Loss loss) {
  switch (loss) {
    case Loss::Hinge:
      return "hinge";
    case Loss::SquaredHinge:
      return "squared_hinge";
    case Loss::Logistic:
      return "logistic";
  }
  throw std::invalid_argument("unknown loss");
}

ClassWeight class_weight_from_string(std::string_view name) {
  if (name == "default") return ClassWeight::Default;
  if (name == "balanced") return ClassWeight::Balanced;
  throw std::invalid_argument("unknown class weight: " + std::string(name));
}

std::string to_string(ClassWeight weight) {
  return weight == ClassWeight::Default ? "default" : "balanced";
}

std::vector<double> sample_weights(std::span<const int> labels,
                                   ClassWeight mode) {
  std::vector<double> weights(labels.size(), 1.0);
  if (mode == ClassWeight::Default) return weights;
  double counts[2] = {0.0, 0.0};
  for (int label : labels) counts[label == 1 ? 1 : 0] += 1.0;
  const double n = static_cast<double>(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    weights[i] = n / (2.0 * counts[labels[i] == 1 ? 1 : 0]);
  return weights;
}

double objective_value(std::span<const SparseVector> X, std::span<const int> y,
                       std::span<const double> w, double intercept,
                       const TrainConfig& config) {
  auto s = sample_weights(y, config.class_weight);
  double obj = 0.0;
  for (double wi : w) obj += wi * wi;
  obj *= 0.5;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double z = intercept;
    for (const auto& [idx, v] : X[i].items) z += w[idx] * v;
    double sign = y[i] == 1 ? 1.0 : -1.0;
    obj += config.C * s[i] * loss_value(config.loss, sign * z);
  }
  return obj;
}

void objective_gradient(std::span<const SparseVector> X, std::span<const int> y,
                        std::span<const double> w, double intercept,
                        const TrainConfig& config, std::span<double> grad_w,
                        double& grad_b) {
  auto s = sample_weights(y, config.class_weight);
  std::copy(w.begin(), w.end(), grad_w.begin());
  grad_b = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double z = intercept;
    for (const auto& [idx, v] : X[i].items) z += w[idx] * v;
    double sign = y[i] == 1 ? 1.0 : -1.0;
    double slope = loss_slope(config.loss, sign * z);
    if (slope == 0.0) continue;
    double factor = config.C * s[i] * slope * sign;
    for (const auto& [idx, v] : X[i].items) grad_w[idx] += factor * v;
    grad_b += factor;
  }
}

LinearModel train(std::span<const SparseVector> X, std::span<const int> y,
                  std::size_t dim, const TrainConfig& config,
                  std::vector<double>* objective_trace) {
  if (!(config.C > 0.0)) throw std::invalid_argument("C must be > 0");
  if (!(config.tolerance > 0.0))
    throw std::invalid_argument("tolerance must be > 0");
  if (config.max_epochs < 1)
    throw std::invalid_argument("max_epochs must be >= 1");
  check_inputs(X, y, dim);
  bool has_pos = false;
  bool has_neg = false;
  for (int label : y) (label == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::invalid_argument("train requires both classes present");

  LinearModel model;
  model.config = config;
  model.weights.assign(dim, 0.0);
  model.intercept = 0.0;

  std::vector<double> grad_w(dim, 0.0);
  std::vector<double> w_try(dim, 0.0);
  double obj = objective_value(X, y, model.weights, model.intercept, config);
  double step = 1.0 / (1.0 + config.C);

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    double grad_b = 0.0;
    objective_gradient(X, y, model.weights, model.intercept, config, grad_w,
                       grad_b);
    double grad_sq = grad_b * grad_b;
    for (double g : grad_w) grad_sq += g * g;
    if (grad_sq < 1e-24) break;

    double t = step;
    double b_try = 0.0;
    double obj_try = obj;
    bool accepted = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      for (std::size_t j = 0; j < dim; ++j)
        w_try[j] = model.weights[j] - t * grad_w[j];
      b_try = model.intercept - t * grad_b;
      obj_try = objective_value(X, y, w_try, b_try, config);
      if (obj_try < obj) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no descent along the subgradient

    double improvement = obj - obj_try;
    model.weights.swap(w_try);
    model.intercept = b_try;
    obj = obj_try;
    step = t * 2.0;
    if (objective_trace) objective_trace->push_back(obj);
    if (improvement < config.tolerance) break;
  }
  model.objective_value = obj;
  return model;
}

double decision_value(const LinearModel& model, const SparseVector& x) {
  double z = model.intercept;
  for (const auto& [idx, v] : x.items) {
    if (idx >= model.weights.size())
      throw std::invalid_argument("feature index " + std::to_string(idx) +
                                  " exceeds model dimensionality");
    z += model.weights[idx] * v;
  }
  return z;
}

double decision_value(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size())
    throw std::invalid_argument("vector dimensionality mismatch");
  double z = model.intercept;
  for (std::size_t i = 0; i < x.size(); ++i) z += model.weights[i] * x[i];
  return z;
}

int predict(const LinearModel& model, const SparseVector& x) {
  return decision_value(model, x) > 0.0 ? 1 : 0;
}

std::vector<std::pair<std::string, double>> coefficients(
    const LinearModel& model, const FeatureSpace& space) {
  if (model.weights.size() != space.size())
    throw std::invalid_argument(
        "model dimensionality does not match the feature space");
  std::vector<std::pair<std::string, double>> pairs;
  pairs.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i)
    pairs.emplace_back(space.gram_of[i], model.weights[i]);
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return pairs;
}

nlohmann::json linear_model_to_json(const LinearModel& model) {
  nlohmann::json obj;
  obj["config"]["loss"] = to_string(model.config.loss);
  obj["config"]["C"] = model.config.C;
  obj["config"]["class_weight"] = to_string(model.config.class_weight);
  obj["config"]["seed"] = model.config.seed;
  obj["config"]["tolerance"] = model.config.tolerance;
  obj["config"]["max_epochs"] = model.config.max_epochs;
  obj["intercept"] = model.intercept;
  obj["objective_value"] = model.objective_value;
  obj["dimension"] = model.weights.size();
  if (model.weights.size() >= kSparseSerializationThreshold) {
    nlohmann::json indices = nlohmann::json::array();
    nlohmann::json values = nlohmann::json::array();
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
      if (model.weights[i] == 0.0) continue;
      indices.push_back(i);
      values.push_back(model.weights[i]);
    }
    obj["sparse_weights"]["indices"] = std::move(indices);
    obj["sparse_weights"]["values"] = std::move(values);
  } else {
    obj["weights"] = model.weights;
  }
  return obj;
}

LinearModel linear_model_from_json(const nlohmann::json& obj) {
  LinearModel model;
  const auto& config = obj.at("config");
  model.config.loss = loss_from_string(config.at("loss").get<std::string>());
  model.config.C = config.at("C").get<double>();
  model.config.class_weight =
      class_weight_from_string(config.at("class_weight").get<std::string>());
  model.config.seed = config.at("seed").get<std::uint64_t>();
  model.config.tolerance = config.at("tolerance").get<double>();
  model.config.max_epochs = config.at("max_epochs").get<int>();
  model.intercept = obj.at("intercept").get<double>();
  model.objective_value = obj.at("objective_value").get<double>();
  std::size_t dim = obj.at("dimension").get<std::size_t>();
  model.weights.assign(dim, 0.0);
  if (obj.contains("sparse_weights")) {
    const auto& indices = obj.at("sparse_weights").at("indices");
    const auto& values = obj.at("sparse_weights").at("values");
    for (std::size_t k = 0; k < indices.size(); ++k)
      model.weights.at(indices[k].get<std::size_t>()) = values[k].get<double>();
  } else {
    model.weights = obj.at("weights").get<std::vector<double>>();
  }
  return model;
}

}  // namespace crossdom
