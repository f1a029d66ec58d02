#include <doctest.h>

#include <functional>
#include <limits>

#include "pfml/domain.hpp"
#include "test_support.hpp"

using namespace pfml;

namespace {

Dataset valid_fixture() {
  Dataset d = testing::tiny_dataset();
  d.binary_feature_indices = {0, 1};
  return d;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("validate_dataset accepts a well-formed dataset") {
  CHECK_NOTHROW(validate_dataset(valid_fixture()));
}

TEST_CASE("validate_dataset rejects ragged feature vectors") {
  Dataset d = valid_fixture();
  d.samples[2].features.push_back(0.0);
  CHECK(code_of([&] { validate_dataset(d); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("validate_dataset rejects non-binary values in declared binary columns") {
  Dataset d = valid_fixture();
  d.samples[0].features[0] = 0.5;
  CHECK(code_of([&] { validate_dataset(d); }) == ErrorCode::NonBinaryColumn);
}

TEST_CASE("validate_dataset rejects empty datasets") {
  Dataset d;
  CHECK(code_of([&] { validate_dataset(d); }) == ErrorCode::EmptyDataset);
}

TEST_CASE("every single invariant mutation of a valid fixture is rejected") {
  // non-finite feature
  Dataset d = valid_fixture();
  d.binary_feature_indices.clear();
  d.samples[1].features[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate_dataset(d), Error);

  // sensitive outside {0,1}
  d = valid_fixture();
  d.samples[0].sensitive = 2;
  CHECK(code_of([&] { validate_dataset(d); }) == ErrorCode::NonBinaryColumn);

  // label outside {0,1}
  d = valid_fixture();
  d.samples[3].label = -1;
  CHECK(code_of([&] { validate_dataset(d); }) == ErrorCode::NonBinaryColumn);

  // binary index out of range
  d = valid_fixture();
  d.binary_feature_indices = {7};
  CHECK(code_of([&] { validate_dataset(d); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("dataset iteration order is stable") {
  const Dataset d = valid_fixture();
  std::vector<int> first, second;
  for (const Sample& s : d.samples) first.push_back(s.label);
  for (const Sample& s : d.samples) second.push_back(s.label);
  CHECK(first == second);
}

TEST_CASE("attack config defaults match the documented hyperparameters") {
  const AttackConfig cfg;
  CHECK(cfg.pretrain_iters == 2000);
  CHECK(cfg.eta == doctest::Approx(0.001));
  CHECK(cfg.lambda == doctest::Approx(5.0));
  CHECK(cfg.epsilon == doctest::Approx(0.1));
  CHECK(cfg.flip_fraction == doctest::Approx(0.15));
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("attack config rejects out-of-range fields") {
  AttackConfig cfg;
  cfg.alpha = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.eta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.lambda = -1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
