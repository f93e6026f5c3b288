#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mwi/rng.hpp"

#include <Eigen/Dense>

namespace mwi {

// Growing set of (alpha, Phi) examples in normalized [0,1]^K coordinates.
// Appending a point closer than 1e-12 (max-abs) to an existing sample is a
// rejected duplicate.
class TrainingSet {
 public:
  TrainingSet() = default;
  explicit TrainingSet(int dim) : dim_(dim) {}

  int size() const { return static_cast<int>(costs_.size()); }
  int dim() const { return dim_; }

  // Returns false (and leaves the set unchanged) for duplicates.
  bool append(const Eigen::VectorXd& alpha, double phi);
  bool contains(const Eigen::VectorXd& alpha) const;

  const Eigen::VectorXd& sample(int b) const { return samples_[b]; }
  double cost(int b) const { return costs_[b]; }
  double min_cost() const;
  int argmin_cost() const;

  Eigen::MatrixXd sample_matrix() const;  // B x K
  Eigen::VectorXd cost_vector() const;

  void dump_csv(const std::string& path) const;
  static TrainingSet load_csv(const std::string& path);

  static constexpr double duplicate_tolerance = 1e-12;

 private:
  int dim_ = 0;
  std::vector<Eigen::VectorXd> samples_;
  std::vector<double> costs_;
};

struct KrigingHyper {
  Eigen::VectorXd theta;  // K positive values
  double nu = 2.0;        // exponent in [1, 2]
};

// Correlation w(a,b) = exp(-sum_k theta_k |a_k - b_k|^nu).
double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const KrigingHyper& hyper);

struct FitOptions {
  int starts = 20;
  int max_evals = 2000;
  std::optional<KrigingHyper> warm_start;
};

// Ordinary Kriging of the cost function. gamma and xi2 use the closed
// forms with U = W^{-1}; hyperparameters maximize the concentrated
// log-likelihood via multi-start pattern search in log10(theta) space over
// theta_k in [1e-3, 1e3] and nu in {1.0, 1.5, 2.0}.
class KrigingModel {
 public:
  static KrigingModel fit(const TrainingSet& ts, Rng& rng, const FitOptions& opts = {});

  // Builds a model with given hyperparameters (no search); also the test
  // hook for hand-constructed gamma/xi2 scenarios.
  static KrigingModel with_hyper(const TrainingSet& ts, const KrigingHyper& hyper);

  struct Prediction {
    double mean = 0.0;         // Phi_hat
    double uncertainty = 0.0;  // varsigma = 2*xi*sqrt(1 - w'Uw), clamped at 0
  };
  Prediction predict(const Eigen::VectorXd& alpha) const;

  double gamma() const { return gamma_; }
  double xi2() const { return xi2_; }
  const KrigingHyper& hyper() const { return hyper_; }
  bool nugget_applied() const { return nugget_applied_; }
  int size() const { return static_cast<int>(phi_.size()); }

 private:
  KrigingModel() = default;
  void build(const TrainingSet& ts, const KrigingHyper& hyper);

  std::vector<Eigen::VectorXd> x_;
  Eigen::VectorXd phi_;
  KrigingHyper hyper_;
  Eigen::MatrixXd u_;             // W^{-1}
  Eigen::VectorXd u_row_sums_;
  Eigen::VectorXd u_phi_centered_;  // U (phi - gamma 1)
  double gamma_ = 0.0;
  double xi2_ = 0.0;
  bool nugget_applied_ = false;
};

}  // namespace mwi
