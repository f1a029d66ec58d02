#pragma once

#include <vector>

#include "pfml/domain.hpp"
#include "pfml/fairness.hpp"
#include "pfml/pools.hpp"

namespace pfml {

struct TraceRecord {
  std::size_t candidate_index = 0;  // index into the original pool
  double accuracy_loss = 0.0;       // hinge loss of the chosen candidate
  double fairness_empirical = 0.0;  // gap of base set plus chosen candidate
  double fairness_relaxed = 0.0;
  double combined_score = 0.0;
  double post_objective = 0.0;  // penalized objective after the parameter step
};

struct AttackResult {
  Dataset poison_set;  // selection order
  ModelParams final_theta;
  std::vector<TraceRecord> trace;
  double gamma = 1.0;        // resolved scaling factor
  double loop_seconds = 0.0; // greedy loop only, excludes pretraining
};

// Greedy selection score: alpha * hinge + (1-alpha) * gamma * gap-with-candidate.
// The tracker must be refreshed against (theta, current training set).
double score_candidate(const ModelParams& theta, const Sample& c, const GapTracker& tracker,
                       double alpha, double gamma);

// The PFML online greedy attack: pretrains the penalized model on dc, then
// iteratively picks the highest-scoring pool candidate and takes one penalized
// subgradient step over the growing training set.
AttackResult run_pfml(const Dataset& dc, const PoisonPool& pool, const AttackConfig& config);

// Accuracy-only degenerate form: run_pfml with alpha forced to 1 and lambda
// forced to 0.
AttackResult run_online_accuracy(const Dataset& dc, const PoisonPool& pool,
                                 const AttackConfig& config);

// Poison count rule: floor(epsilon * n), minimum 1.
std::size_t poison_count(double epsilon, std::size_t n);

}  // namespace pfml
