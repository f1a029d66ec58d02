#pragma once

#include <array>
#include <cstdint>

#include "pfml/domain.hpp"
#include "pfml/linear_model.hpp"

namespace pfml {

struct FairnessValue {
  double empirical_gap = 0.0;
  double relaxed_value = 0.0;  // signed covariance for DP, nonnegative for EO
};

// Empirical demographic-parity gap: |positive rate(s=1) - positive rate(s=0)|.
double dp_gap(const ModelParams& theta, const Dataset& d);

// Empirical equalized-odds gap: max over y of the absolute difference in
// misclassification rates across sensitive groups.
double eo_gap(const ModelParams& theta, const Dataset& d);

// Empirical gap for the given notion.
double empirical_gap(FairnessNotion notion, const ModelParams& theta, const Dataset& d);

// Signed covariance between the sensitive attribute and the decision value;
// the training penalty uses its absolute value.
double dp_relaxed(const ModelParams& theta, const Dataset& d);

// Half the sum over y of |group-mean linear loss difference across s|.
double eo_relaxed(const ModelParams& theta, const Dataset& d);

// Penalty value used by train_penalized: |dp_relaxed| or eo_relaxed.
double relaxed_penalty(FairnessNotion notion, const ModelParams& theta, const Dataset& d);

// Exact subgradient of |dp_relaxed| or eo_relaxed; sign(0) taken as 0.
Gradient grad_relaxed(const ModelParams& theta, const Dataset& d, FairnessNotion notion);

// Per-(y,s) sufficient statistics over a frozen (theta, dataset) allowing
// O(d) fairness scoring of a single extra candidate.
class GapTracker {
 public:
  explicit GapTracker(FairnessNotion notion) : notion_(notion) {}

  FairnessNotion notion() const { return notion_; }

  // One O(N*d) pass recomputing every statistic; idempotent.
  void refresh(const ModelParams& theta, const Dataset& d);

  // Gap and relaxed value of the refreshed base set.
  FairnessValue query() const;

  // Gap and relaxed value of base set plus candidate c, without mutation.
  // theta must be the parameters the tracker was refreshed with.
  FairnessValue query_with_candidate(const ModelParams& theta, const Sample& c) const;

  std::int64_t total() const { return total_; }

 private:
  FairnessValue evaluate(const std::array<std::int64_t, 4>& group_counts,
                         const std::array<std::int64_t, 2>& positive_pred,
                         const std::array<std::int64_t, 4>& misclassified,
                         const std::array<double, 4>& linear_loss_sums, double sum_s,
                         double sum_d, double sum_s_times_d, std::int64_t total) const;

  FairnessNotion notion_;
  // cell index = label * 2 + sensitive
  std::array<std::int64_t, 4> group_counts_{};
  std::array<std::int64_t, 2> positive_pred_counts_{};  // per sensitive value
  std::array<std::int64_t, 4> misclassified_counts_{};
  std::array<double, 4> linear_loss_sums_{};
  double sum_s_ = 0.0;
  double sum_d_ = 0.0;
  double sum_s_times_d_ = 0.0;
  std::int64_t total_ = 0;
};

}  // namespace pfml
