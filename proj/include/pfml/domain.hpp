#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfml/error.hpp"

namespace pfml {

// One training/test record. Features are preprocessed real values; the
// sensitive attribute and the label are kept out of the feature vector.
struct Sample {
  std::vector<double> features;
  int sensitive = 0;  // {0,1}
  int label = 0;      // {0,1}
};

struct Dataset {
  std::vector<Sample> samples;
  std::vector<std::string> feature_names;
  // Indices of feature columns that hold only {0,1} values. Insertion
  // order is preserved so seeded random choices are reproducible.
  std::vector<std::size_t> binary_feature_indices;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::size_t dim() const { return samples.empty() ? 0 : samples.front().features.size(); }
};

// Linear decision boundary: weights plus explicit bias.
struct ModelParams {
  std::vector<double> weights;
  double bias = 0.0;

  std::size_t dim() const { return weights.size(); }
};

enum class FairnessNotion {
  DemographicParity,
  EqualizedOdds,
};

enum class AttackVariant {
  AS,  // adversarial sampling
  AF,  // adversarial labeling
  AM,  // adversarial feature modification
};

struct GammaSpec {
  enum class Mode { Auto, Fixed };
  Mode mode = Mode::Auto;
  double value = 1.0;  // used when mode == Fixed

  static GammaSpec auto_scaled() { return {Mode::Auto, 1.0}; }
  static GammaSpec fixed(double v) { return {Mode::Fixed, v}; }
};

struct AttackConfig {
  double alpha = 0.8;
  double epsilon = 0.1;
  double lambda = 5.0;
  double eta = 0.001;
  GammaSpec gamma = GammaSpec::auto_scaled();
  FairnessNotion notion = FairnessNotion::EqualizedOdds;
  AttackVariant variant = AttackVariant::AS;
  int pretrain_iters = 2000;
  double flip_fraction = 0.15;  // AF only
  std::uint64_t seed = 0;

  // Throws InvalidArgument when a field is out of range.
  void validate() const;
};

ModelParams zero_params(std::size_t dim);

// Checks every Dataset invariant: nonempty, consistent feature dimension,
// declared binary columns holding only {0,1}.
void validate_dataset(const Dataset& d);

// True when all four (y,s) cells are nonempty.
bool has_full_group_coverage(const Dataset& d);

// True when both sensitive groups are nonempty.
bool has_both_sensitive_groups(const Dataset& d);

const char* to_string(FairnessNotion n);
const char* to_string(AttackVariant v);
FairnessNotion notion_from_string(const std::string& s);
AttackVariant variant_from_string(const std::string& s);

}  // namespace pfml
