#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pfml/domain.hpp"

namespace pfml {

struct SplitSpec {
  int clean_ratio = 4;
  int attack_ratio = 1;
  int test_ratio = 1;
  double easy_fraction = 0.6;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SplitResult {
  Dataset d_c;
  Dataset d_k;
  Dataset d_test;
  std::vector<bool> hard_flags;  // over d_k
};

struct TrainHyper {
  double eta = 0.001;
  int iters = 2000;
};

// Parses a UTF-8 comma-separated file with a header row. The named sensitive
// and label columns must hold only {0,1}; all remaining columns become
// features, and columns holding only {0,1} are auto-registered as binary.
Dataset load_csv(const std::filesystem::path& path, const std::string& sensitive_column,
                 const std::string& label_column);

// Zero-mean unit-variance scaling of non-binary feature columns. Binary and
// constant columns are left untouched. Identity when standardize is false.
Dataset preprocess(const Dataset& d, bool standardize);

// Trains an unpenalized ranking SVM on the whole input, splits the lowest-loss
// easy_fraction of samples 4:1:1 into clean/attack/test, and appends the
// remaining high-loss samples to the attack set as flagged hard examples.
// Reseeds the 4:1:1 shuffle up to 100 times until d_c covers all four (y,s)
// cells.
SplitResult loss_ranked_split(const Dataset& d, const SplitSpec& spec,
                              const TrainHyper& pretrain);

// Split directory layout used by the CLI: clean.csv, attack.csv, test.csv
// (schema = features + sensitive + label + role) plus manifest.json.
void write_split_dir(const std::filesystem::path& dir, const SplitResult& split,
                     const std::string& sensitive_column, const std::string& label_column,
                     const SplitSpec& spec, const TrainHyper& pretrain);

SplitResult read_split_dir(const std::filesystem::path& dir);

// Stable numeric formatting used in every CSV the tool writes: shortest
// round-trip representation of a double.
std::string format_double(double v);

}  // namespace pfml
