#include "pfml/linear_model.hpp"

#include <cmath>
#include <string>

#include "pfml/fairness.hpp"

namespace pfml {

namespace {

void check_dims(const ModelParams& theta, const std::vector<double>& x) {
  if (theta.weights.size() != x.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "feature vector has dimension " + std::to_string(x.size()) +
                    ", model expects " + std::to_string(theta.weights.size()));
  }
}

}  // namespace

void Gradient::add_scaled(const Gradient& other, double scale) {
  for (std::size_t j = 0; j < weights.size(); ++j) {
    weights[j] += scale * other.weights[j];
  }
  bias += scale * other.bias;
}

double decision_value(const ModelParams& theta, const std::vector<double>& x) {
  check_dims(theta, x);
  double acc = theta.bias;
  for (std::size_t j = 0; j < x.size(); ++j) {
    acc += theta.weights[j] * x[j];
  }
  return acc;
}

int predict(const ModelParams& theta, const std::vector<double>& x) {
  return decision_value(theta, x) >= 0.0 ? 1 : 0;
}

double hinge_loss(const ModelParams& theta, const Sample& s) {
  const double margin = signed_label(s.label) * decision_value(theta, s.features);
  return margin < 1.0 ? 1.0 - margin : 0.0;
}

double linear_loss(const ModelParams& theta, const Sample& s) {
  return 0.5 * (1.0 - signed_label(s.label) * decision_value(theta, s.features));
}

Gradient grad_hinge(const ModelParams& theta, const Sample& s) {
  const double y = signed_label(s.label);
  const double margin = y * decision_value(theta, s.features);
  Gradient g = Gradient::zero(theta.dim());
  if (margin < 1.0) {
    for (std::size_t j = 0; j < g.weights.size(); ++j) {
      g.weights[j] = -y * s.features[j];
    }
    g.bias = -y;
  }
  return g;
}

double mean_hinge_loss(const ModelParams& theta, const Dataset& d) {
  if (d.empty()) {
    throw Error(ErrorCode::EmptyDataset, "mean hinge loss over empty dataset");
  }
  double sum = 0.0;
  for (const Sample& s : d.samples) {
    sum += hinge_loss(theta, s);
  }
  return sum / static_cast<double>(d.size());
}

TrainReport train_penalized(const Dataset& d, FairnessNotion notion, double lambda,
                            double eta, int iters, const ModelParams& init) {
  validate_dataset(d);
  if (init.dim() != d.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "init parameters do not match dataset dimension");
  }
  if (lambda > 0.0 && notion == FairnessNotion::EqualizedOdds && !has_full_group_coverage(d)) {
    throw Error(ErrorCode::EmptyGroup, "equalized-odds penalty needs all four (y,s) cells");
  }

  const double n = static_cast<double>(d.size());
  ModelParams theta = init;
  TrainReport report;
  report.objective_trace.reserve(static_cast<std::size_t>(iters));

  for (int it = 0; it < iters; ++it) {
    Gradient sum = Gradient::zero(theta.dim());
    for (const Sample& s : d.samples) {
      sum.add_scaled(grad_hinge(theta, s), 1.0);
    }
    Gradient step = Gradient::zero(theta.dim());
    for (std::size_t j = 0; j < step.weights.size(); ++j) {
      step.weights[j] = sum.weights[j] / n;
    }
    step.bias = sum.bias / n;
    if (lambda > 0.0) {
      step.add_scaled(grad_relaxed(theta, d, notion), lambda);
    }
    for (std::size_t j = 0; j < theta.weights.size(); ++j) {
      theta.weights[j] -= eta * step.weights[j];
    }
    theta.bias -= eta * step.bias;

    double objective = mean_hinge_loss(theta, d);
    if (lambda > 0.0) {
      objective += lambda * relaxed_penalty(notion, theta, d);
    }
    if (!std::isfinite(objective)) {
      throw Error(ErrorCode::NumericError,
                  "training diverged at iteration " + std::to_string(it));
    }
    report.objective_trace.push_back(objective);
  }

  report.final_params = std::move(theta);
  report.iterations = iters;
  return report;
}

}  // namespace pfml
