#include "pfml/pools.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace pfml {

namespace {

std::size_t round_half_up(double x) {
  return static_cast<std::size_t>(std::floor(x + 0.5));
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

}  // namespace

PoisonPool build_as(const Dataset& dk) {
  validate_dataset(dk);
  PoisonPool pool;
  pool.candidates = dk.samples;
  pool.provenance.resize(dk.size());
  for (std::size_t i = 0; i < dk.size(); ++i) {
    pool.provenance[i] = {i, MutationKind::None, 0};
  }
  return pool;
}

PoisonPool build_af(const Dataset& dk, double flip_fraction, std::uint64_t seed) {
  if (!(flip_fraction >= 0.0 && flip_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "flip_fraction must lie in [0,1]");
  }
  PoisonPool pool = build_as(dk);
  const std::size_t flips = round_half_up(flip_fraction * static_cast<double>(dk.size()));
  const auto order = shuffled_indices(dk.size(), seed);
  for (std::size_t k = 0; k < flips; ++k) {
    const std::size_t i = order[k];
    pool.candidates[i].label = 1 - pool.candidates[i].label;
    pool.provenance[i].mutation = MutationKind::LabelFlipped;
  }
  return pool;
}

PoisonPool build_am(const Dataset& dk, std::uint64_t seed) {
  validate_dataset(dk);
  if (dk.binary_feature_indices.empty()) {
    throw Error(ErrorCode::NoBinaryFeatures,
                "feature modification needs at least one binary feature column");
  }
  PoisonPool pool = build_as(dk);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, dk.binary_feature_indices.size() - 1);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const std::size_t col = dk.binary_feature_indices[pick(rng)];
    pool.candidates[i].features[col] = 1.0 - pool.candidates[i].features[col];
    pool.provenance[i].mutation = MutationKind::FeatureFlipped;
    pool.provenance[i].feature_index = col;
  }
  return pool;
}

Dataset baseline_select(const Dataset& dk, BaselineKind kind, std::size_t count,
                        const std::vector<bool>& hard_example_flags, std::uint64_t seed) {
  validate_dataset(dk);
  if (count > dk.size()) {
    throw Error(ErrorCode::InsufficientCandidates,
                "requested more poisoning samples than the attack set holds");
  }

  std::vector<std::size_t> universe;
  if (kind == BaselineKind::HE) {
    if (hard_example_flags.size() != dk.size()) {
      throw Error(ErrorCode::InvalidArgument, "hard-example flags do not cover the attack set");
    }
    for (std::size_t i = 0; i < dk.size(); ++i) {
      if (hard_example_flags[i]) universe.push_back(i);
    }
    if (universe.size() < count) {
      throw Error(ErrorCode::InsufficientCandidates,
                  "fewer flagged hard examples than requested");
    }
  } else {
    universe.resize(dk.size());
    std::iota(universe.begin(), universe.end(), std::size_t{0});
  }

  std::mt19937_64 rng(seed);
  std::shuffle(universe.begin(), universe.end(), rng);

  Dataset out;
  out.feature_names = dk.feature_names;
  out.binary_feature_indices = dk.binary_feature_indices;
  out.samples.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Sample s = dk.samples[universe[k]];
    if (kind == BaselineKind::LF) {
      s.label = 1 - s.label;
    }
    out.samples.push_back(std::move(s));
  }
  return out;
}

BaselineKind baseline_from_string(const std::string& s) {
  if (s == "RS" || s == "rs") return BaselineKind::RS;
  if (s == "LF" || s == "lf") return BaselineKind::LF;
  if (s == "HE" || s == "he") return BaselineKind::HE;
  throw Error(ErrorCode::InvalidArgument, "unknown baseline kind: " + s);
}

const char* to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::RS: return "RS";
    case BaselineKind::LF: return "LF";
    case BaselineKind::HE: return "HE";
  }
  return "?";
}

}  // namespace pfml
