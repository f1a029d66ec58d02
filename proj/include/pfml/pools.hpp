#pragma once

#include <cstdint>
#include <vector>

#include "pfml/domain.hpp"

namespace pfml {

enum class MutationKind {
  None,
  LabelFlipped,
  FeatureFlipped,
};

struct Provenance {
  std::size_t origin_index = 0;
  MutationKind mutation = MutationKind::None;
  std::size_t feature_index = 0;  // meaningful only for FeatureFlipped
};

// Feasible poisoning set: one candidate per attack-set sample, with a record
// of which mutation (if any) produced it.
struct PoisonPool {
  std::vector<Sample> candidates;
  std::vector<Provenance> provenance;

  std::size_t size() const { return candidates.size(); }
};

// Adversarial sampling: the pool is the attack set itself.
PoisonPool build_as(const Dataset& dk);

// Adversarial labeling: a seeded random subset of round(flip_fraction * |dk|)
// candidates gets its label complemented.
PoisonPool build_af(const Dataset& dk, double flip_fraction, std::uint64_t seed);

// Adversarial feature modification: every candidate has one seeded uniformly
// chosen binary feature complemented.
PoisonPool build_am(const Dataset& dk, std::uint64_t seed);

enum class BaselineKind { RS, LF, HE };

// Naive baseline poisoning sets: random sampling, label flipping, and hard
// examples, all sampled without replacement.
Dataset baseline_select(const Dataset& dk, BaselineKind kind, std::size_t count,
                        const std::vector<bool>& hard_example_flags, std::uint64_t seed);

BaselineKind baseline_from_string(const std::string& s);
const char* to_string(BaselineKind k);

}  // namespace pfml
