#include "pfml/fairness.hpp"

#include <cmath>
#include <cstdlib>

namespace pfml {

namespace {

inline int cell_of(int label, int sensitive) { return label * 2 + sensitive; }

inline double sign_of(double v) {
  if (v > 0.0) return 1.0;
  if (v < 0.0) return -1.0;
  return 0.0;
}

void require_both_groups(const std::array<std::int64_t, 4>& cells) {
  const std::int64_t s0 = cells[cell_of(0, 0)] + cells[cell_of(1, 0)];
  const std::int64_t s1 = cells[cell_of(0, 1)] + cells[cell_of(1, 1)];
  if (s0 == 0 || s1 == 0) {
    throw Error(ErrorCode::EmptyGroup, "a sensitive group is empty");
  }
}

void require_all_cells(const std::array<std::int64_t, 4>& cells) {
  for (int c = 0; c < 4; ++c) {
    if (cells[c] == 0) {
      throw Error(ErrorCode::EmptyGroup, "a (y,s) group cell is empty");
    }
  }
}

}  // namespace

double dp_gap(const ModelParams& theta, const Dataset& d) {
  std::int64_t group[2] = {0, 0};
  std::int64_t positive[2] = {0, 0};
  for (const Sample& s : d.samples) {
    group[s.sensitive] += 1;
    positive[s.sensitive] += predict(theta, s.features);
  }
  if (group[0] == 0 || group[1] == 0) {
    throw Error(ErrorCode::EmptyGroup, "demographic parity needs both sensitive groups");
  }
  const double r0 = static_cast<double>(positive[0]) / static_cast<double>(group[0]);
  const double r1 = static_cast<double>(positive[1]) / static_cast<double>(group[1]);
  return std::abs(r1 - r0);
}

double eo_gap(const ModelParams& theta, const Dataset& d) {
  std::array<std::int64_t, 4> cells{};
  std::array<std::int64_t, 4> mis{};
  for (const Sample& s : d.samples) {
    const int c = cell_of(s.label, s.sensitive);
    cells[c] += 1;
    mis[c] += predict(theta, s.features) != s.label ? 1 : 0;
  }
  require_all_cells(cells);
  double gap = 0.0;
  for (int y = 0; y < 2; ++y) {
    const double m0 = static_cast<double>(mis[cell_of(y, 0)]) /
                      static_cast<double>(cells[cell_of(y, 0)]);
    const double m1 = static_cast<double>(mis[cell_of(y, 1)]) /
                      static_cast<double>(cells[cell_of(y, 1)]);
    gap = std::max(gap, std::abs(m0 - m1));
  }
  return gap;
}

double empirical_gap(FairnessNotion notion, const ModelParams& theta, const Dataset& d) {
  return notion == FairnessNotion::DemographicParity ? dp_gap(theta, d) : eo_gap(theta, d);
}

double dp_relaxed(const ModelParams& theta, const Dataset& d) {
  if (d.empty()) {
    throw Error(ErrorCode::EmptyDataset, "covariance relaxation over empty dataset");
  }
  double sum_s = 0.0;
  double sum_d = 0.0;
  double sum_sd = 0.0;
  for (const Sample& s : d.samples) {
    const double dv = decision_value(theta, s.features);
    sum_s += s.sensitive;
    sum_d += dv;
    sum_sd += s.sensitive * dv;
  }
  const double n = static_cast<double>(d.size());
  return (sum_sd - (sum_s / n) * sum_d) / n;
}

double eo_relaxed(const ModelParams& theta, const Dataset& d) {
  std::array<std::int64_t, 4> cells{};
  std::array<double, 4> loss_sums{};
  for (const Sample& s : d.samples) {
    const int c = cell_of(s.label, s.sensitive);
    cells[c] += 1;
    loss_sums[c] += linear_loss(theta, s);
  }
  require_all_cells(cells);
  double value = 0.0;
  for (int y = 0; y < 2; ++y) {
    const double r0 = loss_sums[cell_of(y, 0)] / static_cast<double>(cells[cell_of(y, 0)]);
    const double r1 = loss_sums[cell_of(y, 1)] / static_cast<double>(cells[cell_of(y, 1)]);
    value += std::abs(r0 - r1);
  }
  return 0.5 * value;
}

double relaxed_penalty(FairnessNotion notion, const ModelParams& theta, const Dataset& d) {
  return notion == FairnessNotion::DemographicParity ? std::abs(dp_relaxed(theta, d))
                                                     : eo_relaxed(theta, d);
}

Gradient grad_relaxed(const ModelParams& theta, const Dataset& d, FairnessNotion notion) {
  Gradient g = Gradient::zero(theta.dim());
  if (notion == FairnessNotion::DemographicParity) {
    const double c = dp_relaxed(theta, d);
    const double sgn = sign_of(c);
    if (sgn == 0.0) {
      return g;
    }
    const double n = static_cast<double>(d.size());
    double sum_s = 0.0;
    for (const Sample& s : d.samples) {
      sum_s += s.sensitive;
    }
    const double s_bar = sum_s / n;
    for (const Sample& s : d.samples) {
      const double w = sgn * (s.sensitive - s_bar) / n;
      for (std::size_t j = 0; j < g.weights.size(); ++j) {
        g.weights[j] += w * s.features[j];
      }
      // d/db of the centered covariance is identically zero.
    }
    return g;
  }

  // Equalized odds: C = 0.5 * sum_y |R_{y,0} - R_{y,1}| with linear losses.
  std::array<std::int64_t, 4> cells{};
  std::array<double, 4> loss_sums{};
  for (const Sample& s : d.samples) {
    const int c = cell_of(s.label, s.sensitive);
    cells[c] += 1;
    loss_sums[c] += linear_loss(theta, s);
  }
  require_all_cells(cells);

  // Per-cell scale applied to each sample's linear-loss gradient.
  std::array<double, 4> scale{};
  for (int y = 0; y < 2; ++y) {
    const double r0 = loss_sums[cell_of(y, 0)] / static_cast<double>(cells[cell_of(y, 0)]);
    const double r1 = loss_sums[cell_of(y, 1)] / static_cast<double>(cells[cell_of(y, 1)]);
    const double sgn = sign_of(r0 - r1);
    scale[cell_of(y, 0)] = 0.5 * sgn / static_cast<double>(cells[cell_of(y, 0)]);
    scale[cell_of(y, 1)] = -0.5 * sgn / static_cast<double>(cells[cell_of(y, 1)]);
  }
  for (const Sample& s : d.samples) {
    const double w = scale[cell_of(s.label, s.sensitive)];
    if (w == 0.0) continue;
    const double y = signed_label(s.label);
    // grad of linear loss: (-y x / 2, -y / 2)
    for (std::size_t j = 0; j < g.weights.size(); ++j) {
      g.weights[j] += w * (-0.5 * y * s.features[j]);
    }
    g.bias += w * (-0.5 * y);
  }
  return g;
}

void GapTracker::refresh(const ModelParams& theta, const Dataset& d) {
  group_counts_ = {};
  positive_pred_counts_ = {};
  misclassified_counts_ = {};
  linear_loss_sums_ = {};
  sum_s_ = 0.0;
  sum_d_ = 0.0;
  sum_s_times_d_ = 0.0;
  total_ = 0;
  for (const Sample& s : d.samples) {
    const int c = cell_of(s.label, s.sensitive);
    const double dv = decision_value(theta, s.features);
    const int pred = dv >= 0.0 ? 1 : 0;
    group_counts_[c] += 1;
    positive_pred_counts_[s.sensitive] += pred;
    misclassified_counts_[c] += pred != s.label ? 1 : 0;
    linear_loss_sums_[c] += 0.5 * (1.0 - signed_label(s.label) * dv);
    sum_s_ += s.sensitive;
    sum_d_ += dv;
    sum_s_times_d_ += s.sensitive * dv;
    total_ += 1;
  }
}

FairnessValue GapTracker::query() const {
  return evaluate(group_counts_, positive_pred_counts_, misclassified_counts_,
                  linear_loss_sums_, sum_s_, sum_d_, sum_s_times_d_, total_);
}

FairnessValue GapTracker::query_with_candidate(const ModelParams& theta,
                                               const Sample& c) const {
  const int cell = cell_of(c.label, c.sensitive);
  const double dv = decision_value(theta, c.features);
  const int pred = dv >= 0.0 ? 1 : 0;

  auto group_counts = group_counts_;
  auto positive_pred = positive_pred_counts_;
  auto misclassified = misclassified_counts_;
  auto loss_sums = linear_loss_sums_;
  group_counts[cell] += 1;
  positive_pred[c.sensitive] += pred;
  misclassified[cell] += pred != c.label ? 1 : 0;
  loss_sums[cell] += 0.5 * (1.0 - signed_label(c.label) * dv);

  return evaluate(group_counts, positive_pred, misclassified, loss_sums,
                  sum_s_ + c.sensitive, sum_d_ + dv, sum_s_times_d_ + c.sensitive * dv,
                  total_ + 1);
}

FairnessValue GapTracker::evaluate(const std::array<std::int64_t, 4>& group_counts,
                                   const std::array<std::int64_t, 2>& positive_pred,
                                   const std::array<std::int64_t, 4>& misclassified,
                                   const std::array<double, 4>& linear_loss_sums,
                                   double sum_s, double sum_d, double sum_s_times_d,
                                   std::int64_t total) const {
  if (total == 0) {
    throw Error(ErrorCode::EmptyDataset, "tracker holds no samples");
  }
  FairnessValue out;
  if (notion_ == FairnessNotion::DemographicParity) {
    require_both_groups(group_counts);
    const std::int64_t n0 = group_counts[cell_of(0, 0)] + group_counts[cell_of(1, 0)];
    const std::int64_t n1 = group_counts[cell_of(0, 1)] + group_counts[cell_of(1, 1)];
    const double r0 = static_cast<double>(positive_pred[0]) / static_cast<double>(n0);
    const double r1 = static_cast<double>(positive_pred[1]) / static_cast<double>(n1);
    out.empirical_gap = std::abs(r1 - r0);
    const double n = static_cast<double>(total);
    out.relaxed_value = (sum_s_times_d - (sum_s / n) * sum_d) / n;
  } else {
    require_all_cells(group_counts);
    double gap = 0.0;
    double relaxed = 0.0;
    for (int y = 0; y < 2; ++y) {
      const double n0 = static_cast<double>(group_counts[cell_of(y, 0)]);
      const double n1 = static_cast<double>(group_counts[cell_of(y, 1)]);
      gap = std::max(gap, std::abs(static_cast<double>(misclassified[cell_of(y, 0)]) / n0 -
                                   static_cast<double>(misclassified[cell_of(y, 1)]) / n1));
      relaxed += std::abs(linear_loss_sums[cell_of(y, 0)] / n0 -
                          linear_loss_sums[cell_of(y, 1)] / n1);
    }
    out.empirical_gap = gap;
    out.relaxed_value = 0.5 * relaxed;
  }
  return out;
}

}  // namespace pfml
