#include <doctest.h>

#include <random>

#include "pfml/fairness.hpp"
#include "test_support.hpp"

using namespace pfml;

namespace {

const ModelParams kTheta{{1.0, -1.0}, 0.0};
const ModelParams kZero{{0.0, 0.0}, 0.0};

}  // namespace

TEST_CASE("dp gap on the tiny dataset") {
  const Dataset d = testing::tiny_dataset();
  CHECK(dp_gap(kTheta, d) == doctest::Approx(0.5));
  CHECK(dp_gap(kZero, d) == doctest::Approx(0.0));  // everything predicts 1
}

TEST_CASE("dp gap extreme case is exactly 1") {
  Dataset d;
  d.feature_names = {"x"};
  d.samples = {{{1.0}, 0, 0}, {{1.0}, 0, 1}, {{-1.0}, 1, 0}, {{-1.0}, 1, 1}};
  CHECK(dp_gap(ModelParams{{1.0}, 0.0}, d) == doctest::Approx(1.0));
}

TEST_CASE("dp gap requires both sensitive groups") {
  Dataset d = testing::tiny_dataset();
  for (Sample& s : d.samples) s.sensitive = 1;
  CHECK_THROWS_AS(dp_gap(kTheta, d), Error);
}

TEST_CASE("eo gap on the tiny dataset") {
  const Dataset d = testing::tiny_dataset();
  CHECK(eo_gap(kTheta, d) == doctest::Approx(1.0));
  CHECK(eo_gap(kZero, d) == doctest::Approx(0.0));  // all predict 1, rates (1,1) and (0,0)
}

TEST_CASE("eo gap of a perfect classifier is zero") {
  Dataset d;
  d.feature_names = {"x"};
  d.samples = {{{1.0}, 0, 1}, {{-1.0}, 0, 0}, {{1.0}, 1, 1}, {{-1.0}, 1, 0}};
  CHECK(eo_gap(ModelParams{{1.0}, 0.0}, d) == doctest::Approx(0.0));
}

TEST_CASE("dp relaxation on the tiny dataset and degenerate inputs") {
  const Dataset d = testing::tiny_dataset();
  CHECK(dp_relaxed(kTheta, d) == doctest::Approx(0.0));

  Dataset same_s = d;
  for (Sample& s : same_s.samples) s.sensitive = 1;
  CHECK(dp_relaxed(kTheta, same_s) == doctest::Approx(0.0));

  Dataset pair;
  pair.feature_names = {"x"};
  pair.samples = {{{1.0}, 1, 1}, {{1.0}, 0, 0}};
  CHECK(dp_relaxed(ModelParams{{2.0}, 0.0}, pair) == doctest::Approx(0.0));
}

TEST_CASE("eo relaxation on the tiny dataset") {
  const Dataset d = testing::tiny_dataset();
  // cells (1,1) and (0,1) both sit on the boundary: risks (0, 0.5) and (0, 0.5)
  CHECK(eo_relaxed(kTheta, d) == doctest::Approx(0.5));
  CHECK(eo_relaxed(kZero, d) == doctest::Approx(0.0));
}

TEST_CASE("eo relaxation vanishes on a dataset symmetric in s") {
  Dataset d;
  d.feature_names = {"x"};
  for (int s = 0; s < 2; ++s) {
    d.samples.push_back({{0.7}, s, 1});
    d.samples.push_back({{-0.2}, s, 0});
  }
  const ModelParams theta{{1.3}, -0.1};
  CHECK(eo_relaxed(theta, d) == doctest::Approx(0.0));
  CHECK(eo_relaxed(theta, d) >= 0.0);
}

TEST_CASE("gaps and relaxations agree with brute-force oracles on random instances") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    const Dataset d = testing::random_covered_dataset(rng, rng() % 28, 3);
    const ModelParams theta = testing::random_params(rng, 3);
    CHECK(dp_gap(theta, d) == doctest::Approx(testing::oracle_dp_gap(theta, d)).epsilon(1e-12));
    CHECK(eo_gap(theta, d) == doctest::Approx(testing::oracle_eo_gap(theta, d)).epsilon(1e-12));
    CHECK(std::abs(dp_relaxed(theta, d) - testing::oracle_dp_relaxed(theta, d)) < 1e-12);
    CHECK(std::abs(eo_relaxed(theta, d) - testing::oracle_eo_relaxed(theta, d)) < 1e-12);
  }
}

TEST_CASE("dp relaxation is linear in theta") {
  std::mt19937_64 rng(77);
  const Dataset d = testing::random_covered_dataset(rng, 20, 3);
  const ModelParams theta = testing::random_params(rng, 3);
  const double base = dp_relaxed(theta, d);
  for (double c : {-2.0, -0.5, 0.0, 0.5, 3.0}) {
    ModelParams scaled = theta;
    for (double& w : scaled.weights) w *= c;
    scaled.bias *= c;
    CHECK(dp_relaxed(scaled, d) == doctest::Approx(c * base).epsilon(1e-10));
  }
}

TEST_CASE("empirical gaps are invariant under positive rescaling of theta") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset d = testing::random_covered_dataset(rng, 16, 2);
    const ModelParams theta = testing::random_params(rng, 2);
    ModelParams scaled = theta;
    for (double& w : scaled.weights) w *= 7.5;
    scaled.bias *= 7.5;
    CHECK(dp_gap(theta, d) == dp_gap(scaled, d));
    CHECK(eo_gap(theta, d) == eo_gap(scaled, d));
  }
}

TEST_CASE("relaxation gradients match finite differences away from kinks") {
  std::mt19937_64 rng(2023);
  int dp_checked = 0;
  int eo_checked = 0;
  while (dp_checked < 500 || eo_checked < 500) {
    const Dataset d = testing::random_covered_dataset(rng, 12, 3);
    const ModelParams theta = testing::random_params(rng, 3);
    if (dp_checked < 500 && std::abs(dp_relaxed(theta, d)) > 1e-3) {
      const Gradient fd = testing::finite_difference(
          [&](const ModelParams& p) { return std::abs(dp_relaxed(p, d)); }, theta);
      CHECK(testing::max_relative_error(
                grad_relaxed(theta, d, FairnessNotion::DemographicParity), fd) < 1e-5);
      ++dp_checked;
    }
    // keep clear of the |R0 - R1| kinks
    const ModelParams probe = theta;
    bool away = true;
    {
      double sums[2][2] = {{0, 0}, {0, 0}};
      double cnt[2][2] = {{0, 0}, {0, 0}};
      for (const Sample& s : d.samples) {
        cnt[s.label][s.sensitive] += 1;
        sums[s.label][s.sensitive] += linear_loss(probe, s);
      }
      for (int y = 0; y < 2; ++y) {
        if (std::abs(sums[y][0] / cnt[y][0] - sums[y][1] / cnt[y][1]) < 1e-3) away = false;
      }
    }
    if (eo_checked < 500 && away) {
      const Gradient fd = testing::finite_difference(
          [&](const ModelParams& p) { return eo_relaxed(p, d); }, theta);
      CHECK(testing::max_relative_error(grad_relaxed(theta, d, FairnessNotion::EqualizedOdds),
                                        fd) < 1e-5);
      ++eo_checked;
    }
  }
}

TEST_CASE("relaxation gradient sign(0) = 0 rules") {
  Dataset d = testing::tiny_dataset();
  // DP at the tiny dataset has covariance exactly 0 under kTheta
  Gradient g = grad_relaxed(kTheta, d, FairnessNotion::DemographicParity);
  CHECK(g.weights[0] == 0.0);
  CHECK(g.weights[1] == 0.0);
  CHECK(g.bias == 0.0);

  Dataset same_s = d;
  for (Sample& s : same_s.samples) s.sensitive = 0;
  g = grad_relaxed(kTheta, same_s, FairnessNotion::DemographicParity);
  CHECK(g.weights[0] == 0.0);
  CHECK(g.bias == 0.0);
}

TEST_CASE("tracker refresh equals the standalone computations exactly") {
  const Dataset d = testing::tiny_dataset();
  for (FairnessNotion notion :
       {FairnessNotion::DemographicParity, FairnessNotion::EqualizedOdds}) {
    GapTracker tracker(notion);
    tracker.refresh(kTheta, d);
    const FairnessValue v = tracker.query();
    if (notion == FairnessNotion::DemographicParity) {
      CHECK(v.empirical_gap == dp_gap(kTheta, d));
      CHECK(v.relaxed_value == dp_relaxed(kTheta, d));
    } else {
      CHECK(v.empirical_gap == eo_gap(kTheta, d));
      CHECK(v.relaxed_value == eo_relaxed(kTheta, d));
    }
    // idempotence
    tracker.refresh(kTheta, d);
    const FairnessValue again = tracker.query();
    CHECK(again.empirical_gap == v.empirical_gap);
    CHECK(again.relaxed_value == v.relaxed_value);
  }
}

TEST_CASE("candidate query reproduces the full recomputation on the tiny dataset") {
  Dataset base = testing::tiny_dataset();
  const Sample last = base.samples.back();
  base.samples.pop_back();
  GapTracker tracker(FairnessNotion::DemographicParity);
  tracker.refresh(kTheta, base);
  const FairnessValue v = tracker.query_with_candidate(kTheta, last);
  CHECK(v.empirical_gap == doctest::Approx(0.5));
}

TEST_CASE("candidate query equals recomputation on 10000 random trials") {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 10000; ++trial) {
    const FairnessNotion notion = trial % 2 == 0 ? FairnessNotion::DemographicParity
                                                 : FairnessNotion::EqualizedOdds;
    Dataset base = testing::random_covered_dataset(rng, 10, 2);
    const ModelParams theta = testing::random_params(rng, 2);
    Sample candidate;
    candidate.features = {0.3, -0.9};
    candidate.sensitive = static_cast<int>(rng() % 2);
    candidate.label = static_cast<int>(rng() % 2);
    if (trial % 5 == 0) candidate = base.samples[rng() % base.samples.size()];

    GapTracker tracker(notion);
    tracker.refresh(theta, base);
    const FairnessValue incremental = tracker.query_with_candidate(theta, candidate);

    Dataset extended = base;
    extended.samples.push_back(candidate);
    const double gap = notion == FairnessNotion::DemographicParity ? dp_gap(theta, extended)
                                                                   : eo_gap(theta, extended);
    const double relaxed = notion == FairnessNotion::DemographicParity
                               ? dp_relaxed(theta, extended)
                               : eo_relaxed(theta, extended);
    CHECK(std::abs(incremental.empirical_gap - gap) < 1e-12);
    CHECK(std::abs(incremental.relaxed_value - relaxed) < 1e-12);
  }
}

TEST_CASE("candidate cannot fill a required empty cell alone") {
  Dataset base;
  base.feature_names = {"x"};
  base.samples = {{{1.0}, 0, 1}, {{-1.0}, 0, 0}};  // only s=0
  const ModelParams zero1{{0.0}, 0.0};
  GapTracker tracker(FairnessNotion::EqualizedOdds);
  tracker.refresh(zero1, base);
  const Sample candidate{{1.0}, 1, 1};
  CHECK_THROWS_AS(tracker.query_with_candidate(zero1, candidate), Error);
}
