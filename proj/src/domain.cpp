#include "pfml/domain.hpp"

#include <cmath>
#include <string>

namespace pfml {

namespace {

bool is_binary_value(double v) { return v == 0.0 || v == 1.0; }

}  // namespace

void AttackConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0,1]");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0,1)");
  }
  if (!(lambda >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be >= 0");
  }
  if (!(eta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "eta must be > 0");
  }
  if (gamma.mode == GammaSpec::Mode::Fixed && !(gamma.value > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "fixed gamma must be > 0");
  }
  if (pretrain_iters <= 0) {
    throw Error(ErrorCode::InvalidArgument, "pretrain_iters must be positive");
  }
  if (!(flip_fraction >= 0.0 && flip_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "flip_fraction must lie in [0,1]");
  }
}

ModelParams zero_params(std::size_t dim) {
  ModelParams p;
  p.weights.assign(dim, 0.0);
  p.bias = 0.0;
  return p;
}

void validate_dataset(const Dataset& d) {
  if (d.samples.empty()) {
    throw Error(ErrorCode::EmptyDataset, "dataset has no samples");
  }
  const std::size_t dim = d.samples.front().features.size();
  if (dim < 1) {
    throw Error(ErrorCode::DimensionMismatch, "samples must have at least one feature");
  }
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    const Sample& s = d.samples[i];
    if (s.features.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "sample " + std::to_string(i) + " has dimension " +
                      std::to_string(s.features.size()) + ", expected " + std::to_string(dim));
    }
    for (double v : s.features) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NumericError,
                    "non-finite feature value in sample " + std::to_string(i));
      }
    }
    if (s.sensitive != 0 && s.sensitive != 1) {
      throw Error(ErrorCode::NonBinaryColumn,
                  "sensitive attribute of sample " + std::to_string(i) + " is not in {0,1}");
    }
    if (s.label != 0 && s.label != 1) {
      throw Error(ErrorCode::NonBinaryColumn,
                  "label of sample " + std::to_string(i) + " is not in {0,1}");
    }
  }
  for (std::size_t col : d.binary_feature_indices) {
    if (col >= dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "binary feature index " + std::to_string(col) + " out of range");
    }
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
      if (!is_binary_value(d.samples[i].features[col])) {
        throw Error(ErrorCode::NonBinaryColumn,
                    "column " + std::to_string(col) + " declared binary but sample " +
                        std::to_string(i) + " holds a non-binary value");
      }
    }
  }
}

bool has_full_group_coverage(const Dataset& d) {
  bool cell[2][2] = {{false, false}, {false, false}};
  for (const Sample& s : d.samples) {
    cell[s.label][s.sensitive] = true;
  }
  return cell[0][0] && cell[0][1] && cell[1][0] && cell[1][1];
}

bool has_both_sensitive_groups(const Dataset& d) {
  bool seen[2] = {false, false};
  for (const Sample& s : d.samples) {
    seen[s.sensitive] = true;
  }
  return seen[0] && seen[1];
}

const char* to_string(FairnessNotion n) {
  return n == FairnessNotion::DemographicParity ? "DP" : "EO";
}

const char* to_string(AttackVariant v) {
  switch (v) {
    case AttackVariant::AS: return "AS";
    case AttackVariant::AF: return "AF";
    case AttackVariant::AM: return "AM";
  }
  return "?";
}

FairnessNotion notion_from_string(const std::string& s) {
  if (s == "DP" || s == "dp" || s == "demographic-parity") return FairnessNotion::DemographicParity;
  if (s == "EO" || s == "eo" || s == "equalized-odds") return FairnessNotion::EqualizedOdds;
  throw Error(ErrorCode::InvalidArgument, "unknown fairness notion: " + s);
}

AttackVariant variant_from_string(const std::string& s) {
  if (s == "AS" || s == "as") return AttackVariant::AS;
  if (s == "AF" || s == "af") return AttackVariant::AF;
  if (s == "AM" || s == "am") return AttackVariant::AM;
  throw Error(ErrorCode::InvalidArgument, "unknown attack variant: " + s);
}

}  // namespace pfml
