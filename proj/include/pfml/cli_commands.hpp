#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "pfml/domain.hpp"
#include "pfml/evaluation.hpp"

namespace pfml::cli {

struct PrepareOptions {
  std::filesystem::path input;
  std::string sensitive_column;
  std::string label_column;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  bool standardize = true;
  double easy_fraction = 0.6;
  TrainHyper ranking;
};

struct AttackOptions {
  std::filesystem::path split_dir;
  std::filesystem::path out_dir;
  AttackConfig config;
};

struct ExperimentOptions {
  std::filesystem::path split_dir;
  std::filesystem::path grid_file;
  std::filesystem::path out_dir;
};

struct EvaluateOptions {
  std::filesystem::path split_dir;
  std::filesystem::path poison_csv;  // empty: evaluate the benign victim
  FairnessNotion notion = FairnessNotion::EqualizedOdds;
  double lambda = 5.0;
  TrainHyper victim;
  std::filesystem::path out_dir;
};

void cmd_prepare(const PrepareOptions& opt);
void cmd_attack(const AttackOptions& opt);
void cmd_experiment(const ExperimentOptions& opt);
void cmd_evaluate(const EvaluateOptions& opt);

}  // namespace pfml::cli
