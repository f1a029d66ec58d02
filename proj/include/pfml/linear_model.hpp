#pragma once

#include <vector>

#include "pfml/domain.hpp"

namespace pfml {

struct Gradient {
  std::vector<double> weights;
  double bias = 0.0;

  static Gradient zero(std::size_t dim) {
    Gradient g;
    g.weights.assign(dim, 0.0);
    return g;
  }

  void add_scaled(const Gradient& other, double scale);
};

struct TrainReport {
  ModelParams final_params;
  int iterations = 0;
  std::vector<double> objective_trace;  // penalized objective after each step
};

// Signed label: {0,1} -> {-1,+1}.
inline double signed_label(int y) { return 2.0 * y - 1.0; }

double decision_value(const ModelParams& theta, const std::vector<double>& x);

// 1 when the decision value is >= 0 (tie at exactly 0 predicts 1).
int predict(const ModelParams& theta, const std::vector<double>& x);

double hinge_loss(const ModelParams& theta, const Sample& s);

// Linear loss (1 - y~ * theta'x) / 2 used by the equalized-odds relaxation.
double linear_loss(const ModelParams& theta, const Sample& s);

// Subgradient of the hinge loss; zero at the kink (margin exactly 1).
Gradient grad_hinge(const ModelParams& theta, const Sample& s);

double mean_hinge_loss(const ModelParams& theta, const Dataset& d);

// Full-batch subgradient descent on (1/n) sum hinge + lambda * C_relaxed.
// With lambda = 0 this is plain unpenalized SVM subgradient descent.
TrainReport train_penalized(const Dataset& d, FairnessNotion notion, double lambda,
                            double eta, int iters, const ModelParams& init);

}  // namespace pfml
