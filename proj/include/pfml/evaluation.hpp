#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pfml/attack.hpp"
#include "pfml/data_pipeline.hpp"
#include "pfml/domain.hpp"

namespace pfml {

struct EvalReport {
  std::string attack_id;  // "Benign", "RS", "LF", "HE", "PFML-AS", ...
  FairnessNotion notion = FairnessNotion::EqualizedOdds;
  double victim_lambda = 0.0;
  double alpha = 0.0;    // NaN when not applicable
  double epsilon = 0.0;  // NaN when not applicable
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double dp_gap = 0.0;
  double eo_gap = 0.0;
  double runtime_seconds = 0.0;  // attack stage only; kept out of report files
};

struct AggregateReport {
  std::string attack_id;
  FairnessNotion notion = FairnessNotion::EqualizedOdds;
  double victim_lambda = 0.0;
  double alpha = 0.0;
  double epsilon = 0.0;
  int repeats = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_dp_gap = 0.0;
  double std_dp_gap = 0.0;
  double mean_eo_gap = 0.0;
  double std_eo_gap = 0.0;
};

struct ExperimentGrid {
  std::vector<double> alphas;
  std::vector<double> epsilons;
  std::vector<double> lambdas;
  std::vector<FairnessNotion> notions;
  std::vector<AttackVariant> variants;
  int repeats = 1;
  std::uint64_t base_seed = 0;
  TrainHyper victim_hyper;
  double flip_fraction = 0.15;

  void validate() const;
};

struct ExperimentResult {
  std::vector<EvalReport> rows;
  std::vector<AggregateReport> aggregates;
};

// Penalized victim training on the (possibly poisoned) training set.
ModelParams train_victim(const Dataset& train, FairnessNotion notion, double lambda,
                         const TrainHyper& hyper);

// Fills accuracy and both empirical gaps over the test set.
EvalReport evaluate(const ModelParams& theta, const Dataset& test);

Dataset concat(const Dataset& a, const Dataset& b);

// Full sweep: one attack row per grid cell and repeat, one benign row per
// (notion, lambda), and RS/LF/HE baseline rows per (notion, lambda, epsilon,
// repeat). Aggregates hold mean and standard deviation over repeats.
ExperimentResult run_experiment(const Dataset& dc, const Dataset& dk, const Dataset& dtest,
                                const std::vector<bool>& hard_flags,
                                const ExperimentGrid& grid);

ExperimentGrid grid_from_json_file(const std::filesystem::path& path);

void write_report_csv(const std::filesystem::path& path, const ExperimentResult& result);
void write_report_json(const std::filesystem::path& path, const ExperimentResult& result);
void write_timings_csv(const std::filesystem::path& path, const ExperimentResult& result);
void write_trace_csv(const std::filesystem::path& path, const AttackResult& result);

}  // namespace pfml
