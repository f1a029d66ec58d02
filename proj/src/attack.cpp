#include "pfml/attack.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "pfml/linear_model.hpp"

namespace pfml {

namespace {

constexpr double kGapFloor = 1e-6;

double resolve_gamma(const AttackConfig& config, const ModelParams& theta,
                     const Dataset& dc) {
  if (config.gamma.mode == GammaSpec::Mode::Fixed) {
    return config.gamma.value;
  }
  try {
    const double gap = empirical_gap(config.notion, theta, dc);
    return mean_hinge_loss(theta, dc) / std::max(gap, kGapFloor);
  } catch (const Error& e) {
    // With alpha = 1 the fairness term is inactive and the scale is unused.
    if (config.alpha == 1.0 && e.code() == ErrorCode::EmptyGroup) {
      return 1.0;
    }
    throw;
  }
}

void check_finite(const ModelParams& theta, std::size_t iteration) {
  for (double w : theta.weights) {
    if (!std::isfinite(w)) {
      throw Error(ErrorCode::NumericError,
                  "non-finite parameters at attack iteration " + std::to_string(iteration));
    }
  }
  if (!std::isfinite(theta.bias)) {
    throw Error(ErrorCode::NumericError,
                "non-finite bias at attack iteration " + std::to_string(iteration));
  }
}

}  // namespace

std::size_t poison_count(double epsilon, std::size_t n) {
  const auto count = static_cast<std::size_t>(std::floor(epsilon * static_cast<double>(n)));
  return std::max<std::size_t>(count, 1);
}

double score_candidate(const ModelParams& theta, const Sample& c, const GapTracker& tracker,
                       double alpha, double gamma) {
  const double h = hinge_loss(theta, c);
  if (alpha == 1.0) {
    return h;
  }
  const double gap = tracker.query_with_candidate(theta, c).empirical_gap;
  return alpha * h + (1.0 - alpha) * gamma * gap;
}

AttackResult run_pfml(const Dataset& dc, const PoisonPool& pool, const AttackConfig& config) {
  config.validate();
  validate_dataset(dc);
  const std::size_t n = dc.size();
  const std::size_t target = poison_count(config.epsilon, n);
  if (pool.size() < target) {
    throw Error(ErrorCode::PoolExhausted,
                "pool holds " + std::to_string(pool.size()) + " candidates, need " +
                    std::to_string(target));
  }

  // Pretraining on the clean set (penalized when lambda > 0).
  TrainReport pre = train_penalized(dc, config.notion, config.lambda, config.eta,
                                    config.pretrain_iters, zero_params(dc.dim()));
  ModelParams theta = pre.final_params;

  AttackResult result;
  result.gamma = resolve_gamma(config, theta, dc);

  Dataset training = dc;  // grows as poisoning points are selected
  std::vector<bool> alive(pool.size(), true);
  GapTracker tracker(config.notion);

  result.poison_set.feature_names = dc.feature_names;
  result.poison_set.binary_feature_indices = dc.binary_feature_indices;
  result.trace.reserve(target);

  const auto loop_start = std::chrono::steady_clock::now();
  for (std::size_t t = 1; t <= target; ++t) {
    tracker.refresh(theta, training);

    double best_score = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = pool.size();
    for (std::size_t idx = 0; idx < pool.size(); ++idx) {
      if (!alive[idx]) continue;
      const double score =
          score_candidate(theta, pool.candidates[idx], tracker, config.alpha, result.gamma);
      if (score > best_score) {  // ties keep the lowest index
        best_score = score;
        best_idx = idx;
      }
    }
    if (best_idx == pool.size()) {
      throw Error(ErrorCode::PoolExhausted, "no candidate left to select");
    }

    const Sample& chosen = pool.candidates[best_idx];
    TraceRecord record;
    record.candidate_index = best_idx;
    record.accuracy_loss = hinge_loss(theta, chosen);
    record.combined_score = best_score;
    try {
      const FairnessValue fv = tracker.query_with_candidate(theta, chosen);
      record.fairness_empirical = fv.empirical_gap;
      record.fairness_relaxed = fv.relaxed_value;
    } catch (const Error&) {
      record.fairness_empirical = std::numeric_limits<double>::quiet_NaN();
      record.fairness_relaxed = std::numeric_limits<double>::quiet_NaN();
    }

    alive[best_idx] = false;
    training.samples.push_back(chosen);
    result.poison_set.samples.push_back(chosen);

    // One penalized subgradient step over the extended training set.
    const double scale = static_cast<double>(n + t);
    Gradient sum = Gradient::zero(theta.dim());
    for (const Sample& s : training.samples) {
      sum.add_scaled(grad_hinge(theta, s), 1.0);
    }
    Gradient step = Gradient::zero(theta.dim());
    for (std::size_t j = 0; j < step.weights.size(); ++j) {
      step.weights[j] = sum.weights[j] / scale;
    }
    step.bias = sum.bias / scale;
    if (config.lambda > 0.0) {
      step.add_scaled(grad_relaxed(theta, training, config.notion), config.lambda);
    }
    for (std::size_t j = 0; j < theta.weights.size(); ++j) {
      theta.weights[j] -= config.eta * step.weights[j];
    }
    theta.bias -= config.eta * step.bias;
    check_finite(theta, t);

    double objective = mean_hinge_loss(theta, training);
    if (config.lambda > 0.0) {
      objective += config.lambda * relaxed_penalty(config.notion, theta, training);
    }
    record.post_objective = objective;
    result.trace.push_back(record);
  }
  const auto loop_end = std::chrono::steady_clock::now();
  result.loop_seconds = std::chrono::duration<double>(loop_end - loop_start).count();
  result.final_theta = std::move(theta);
  return result;
}

AttackResult run_online_accuracy(const Dataset& dc, const PoisonPool& pool,
                                 const AttackConfig& config) {
  AttackConfig degenerate = config;
  degenerate.alpha = 1.0;
  degenerate.lambda = 0.0;
  return run_pfml(dc, pool, degenerate);
}

}  // namespace pfml
