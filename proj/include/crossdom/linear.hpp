#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crossdom/featurize.hpp"

namespace crossdom {

enum class Loss { Hinge, SquaredHinge, Logistic };
enum class ClassWeight { Default, Balanced };

Loss loss_from_string(std::string_view name);
std::string to_string(Loss loss);
ClassWeight class_weight_from_string(std::string_view name);
std::string to_string(ClassWeight weight);

struct TrainConfig {
  Loss loss = Loss::Hinge;
  double C = 1.0;  // inverse regularization strength
  ClassWeight class_weight = ClassWeight::Default;
  std::uint64_t seed = 0;
  double tolerance = 1e-4;
  int max_epochs = 1000;
};

struct LinearModel {
  std::vector<double> weights;
  double intercept = 0.0;
  TrainConfig config;
  double objective_value = 0.0;
};

// Per-sample weights s_i: 1 under Default, n/(2*n_class) under Balanced.
std::vector<double> sample_weights(std::span<const int> labels,
                                   ClassWeight mode);

// Primal objective 0.5*||w||^2 + C * sum_i s_i * loss(y_i, w.x_i + b);
// the intercept is unregularized.
double objective_value(std::span<const SparseVector> X, std::span<const int> y,
                       std::span<const double> w, double intercept,
                       const TrainConfig& config);

// Gradient (subgradient for hinge, using 0 at the kink) of the objective.
void objective_gradient(std::span<const SparseVector> X, std::span<const int> y,
                        std::span<const double> w, double intercept,
                        const TrainConfig& config, std::span<double> grad_w,
                        double& grad_b);

// Deterministic batch subgradient descent with a backtracking line search;
// stops when the epoch-over-epoch objective decrease falls below tolerance.
// An optional trace collects the objective value after every epoch.
LinearModel train(std::span<const SparseVector> X, std::span<const int> y,
                  std::size_t dim, const TrainConfig& config,
                  std::vector<double>* objective_trace = nullptr);

double decision_value(const LinearModel& model, const SparseVector& x);
double decision_value(const LinearModel& model, std::span<const double> x);

// 1 iff the decision value is strictly positive; exact zero maps to 0.
int predict(const LinearModel& model, const SparseVector& x);

// (gram, weight) pairs, descending by weight, ties broken by gram.
std::vector<std::pair<std::string, double>> coefficients(
    const LinearModel& model, const FeatureSpace& space);

nlohmann::json linear_model_to_json(const LinearModel& model);
LinearModel linear_model_from_json(const nlohmann::json& obj);

}  // namespace crossdom
