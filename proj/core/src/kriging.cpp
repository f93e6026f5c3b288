#include "mwi/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mwi {

namespace {
constexpr double kNugget = 1e-10;
constexpr double kLogThetaMin = -3.0;
constexpr double kLogThetaMax = 3.0;
constexpr double kNuChoices[] = {2.0, 1.0, 1.5};

Eigen::VectorXd theta_from_log(const Eigen::VectorXd& log_theta) {
  Eigen::VectorXd theta(log_theta.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k)
    theta[k] = std::pow(10.0, log_theta[k]);
  return theta;
}
}  // namespace

bool TrainingSet::append(const Eigen::VectorXd& alpha, double phi) {
  if (dim_ == 0) dim_ = static_cast<int>(alpha.size());
  if (alpha.size() != dim_) throw std::invalid_argument("TrainingSet: dimension mismatch");
  if (contains(alpha)) return false;
  samples_.push_back(alpha);
  costs_.push_back(phi);
  return true;
}

bool TrainingSet::contains(const Eigen::VectorXd& alpha) const {
  for (const auto& s : samples_)
    if ((s - alpha).cwiseAbs().maxCoeff() < duplicate_tolerance) return true;
  return false;
}

double TrainingSet::min_cost() const { return costs_[argmin_cost()]; }

int TrainingSet::argmin_cost() const {
  if (costs_.empty()) throw std::logic_error("TrainingSet: empty");
  int best = 0;
  for (int b = 1; b < size(); ++b)
    if (costs_[b] < costs_[best]) best = b;
  return best;
}

Eigen::MatrixXd TrainingSet::sample_matrix() const {
  Eigen::MatrixXd m(size(), dim_);
  for (int b = 0; b < size(); ++b) m.row(b) = samples_[b].transpose();
  return m;
}

Eigen::VectorXd TrainingSet::cost_vector() const {
  return Eigen::Map<const Eigen::VectorXd>(costs_.data(), size());
}

void TrainingSet::dump_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("TrainingSet: cannot write " + path);
  out << "phi";
  for (int k = 0; k < dim_; ++k) out << ",a" << k;
  out << "\n";
  char buf[32];
  for (int b = 0; b < size(); ++b) {
    std::snprintf(buf, sizeof buf, "%.17g", costs_[b]);
    out << buf;
    for (int k = 0; k < dim_; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", samples_[b][k]);
      out << ',' << buf;
    }
    out << "\n";
  }
}

TrainingSet TrainingSet::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("TrainingSet: cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("TrainingSet: empty file " + path);
  TrainingSet ts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(row, field, ',')) values.push_back(std::stod(field));
    if (values.size() < 2) throw std::runtime_error("TrainingSet: malformed row in " + path);
    Eigen::VectorXd alpha =
        Eigen::Map<const Eigen::VectorXd>(values.data() + 1, values.size() - 1);
    ts.append(alpha, values[0]);
  }
  return ts;
}

double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const KrigingHyper& hyper) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k)
    s += hyper.theta[k] * std::pow(std::abs(a[k] - b[k]), hyper.nu);
  return std::exp(-s);
}

void KrigingModel::build(const TrainingSet& ts, const KrigingHyper& hyper) {
  const int b = ts.size();
  if (b < 1) throw std::invalid_argument("KrigingModel: empty training set");
  if (hyper.theta.size() != ts.dim())
    throw std::invalid_argument("KrigingModel: theta dimension mismatch");

  x_.clear();
  x_.reserve(b);
  for (int i = 0; i < b; ++i) x_.push_back(ts.sample(i));
  phi_ = ts.cost_vector();
  hyper_ = hyper;

  Eigen::MatrixXd w(b, b);
  for (int i = 0; i < b; ++i) {
    w(i, i) = 1.0;
    for (int j = i + 1; j < b; ++j) w(i, j) = w(j, i) = correlation(x_[i], x_[j], hyper);
  }

  nugget_applied_ = false;
  Eigen::LLT<Eigen::MatrixXd> llt(w);
  bool ok = llt.info() == Eigen::Success;
  if (ok) {
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    if (diag.minCoeff() < 1e-6 * diag.maxCoeff()) ok = false;
  }
  if (!ok) {
    w.diagonal().array() += kNugget;
    llt.compute(w);
    nugget_applied_ = true;
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("KrigingModel: correlation matrix not positive definite");
  }

  u_ = llt.solve(Eigen::MatrixXd::Identity(b, b));
  u_row_sums_ = u_.rowwise().sum();
  const double denom = u_row_sums_.sum();
  gamma_ = u_row_sums_.dot(phi_) / denom;
  const Eigen::VectorXd centered = phi_.array() - gamma_;
  u_phi_centered_ = u_ * centered;
  xi2_ = std::max(centered.dot(u_phi_centered_) / b, 0.0);
}

KrigingModel KrigingModel::with_hyper(const TrainingSet& ts, const KrigingHyper& hyper) {
  KrigingModel model;
  model.build(ts, hyper);
  return model;
}

KrigingModel::Prediction KrigingModel::predict(const Eigen::VectorXd& alpha) const {
  const int b = size();
  Eigen::VectorXd w(b);
  for (int i = 0; i < b; ++i) w[i] = correlation(alpha, x_[i], hyper_);
  Prediction p;
  p.mean = gamma_ + w.dot(u_phi_centered_);
  const double slack = 1.0 - w.dot(u_ * w);
  p.uncertainty = 2.0 * std::sqrt(xi2_) * std::sqrt(std::max(slack, 0.0));
  return p;
}

namespace {

// Likelihood evaluations share the pairwise distance geometry across all
// hyperparameter trials; only |dx|^nu depends on nu and the theta-weighted
// sum on theta, so both are cached (pow dominates a naive rebuild).
class NllEvaluator {
 public:
  explicit NllEvaluator(const TrainingSet& ts)
      : b_(ts.size()), phi_(ts.cost_vector()), adiff_(ts.dim()) {
    for (int k = 0; k < ts.dim(); ++k) {
      adiff_[k].resize(b_, b_);
      for (int i = 0; i < b_; ++i) {
        adiff_[k](i, i) = 0.0;
        for (int j = i + 1; j < b_; ++j)
          adiff_[k](i, j) = adiff_[k](j, i) = std::abs(ts.sample(i)[k] - ts.sample(j)[k]);
      }
    }
  }

  // Concentrated negative log-likelihood: (B/2) ln(xi^2) + sum_i ln(L_ii).
  // Returns +infinity when the correlation matrix defies factorization.
  double operator()(const Eigen::VectorXd& theta, double nu) {
    if (nu != cached_nu_) {
      powed_.resize(adiff_.size());
      for (std::size_t k = 0; k < adiff_.size(); ++k)
        powed_[k] = adiff_[k].array().pow(nu).matrix();
      cached_nu_ = nu;
    }
    Eigen::MatrixXd s = theta[0] * powed_[0];
    for (std::size_t k = 1; k < powed_.size(); ++k) s.noalias() += theta[k] * powed_[k];
    Eigen::MatrixXd w = (-s).array().exp().matrix();

    Eigen::LLT<Eigen::MatrixXd> llt(w);
    bool ok = llt.info() == Eigen::Success;
    if (ok) {
      const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
      if (diag.minCoeff() < 1e-6 * diag.maxCoeff()) ok = false;
    }
    if (!ok) {
      w.diagonal().array() += kNugget;
      llt.compute(w);
      if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    }

    const Eigen::VectorXd u_ones = llt.solve(Eigen::VectorXd::Ones(b_));
    const double gamma = u_ones.dot(phi_) / u_ones.sum();
    const Eigen::VectorXd centered = phi_.array() - gamma;
    const double xi2 = std::max(centered.dot(llt.solve(centered)) / b_, 1e-100);

    double log_det_half = 0.0;
    for (int i = 0; i < b_; ++i) log_det_half += std::log(llt.matrixLLT()(i, i));
    return 0.5 * b_ * std::log(xi2) + log_det_half;
  }

 private:
  int b_;
  Eigen::VectorXd phi_;
  std::vector<Eigen::MatrixXd> adiff_;
  std::vector<Eigen::MatrixXd> powed_;
  double cached_nu_ = -1.0;
};

}  // namespace

KrigingModel KrigingModel::fit(const TrainingSet& ts, Rng& rng, const FitOptions& opts) {
  const int k = ts.dim();
  KrigingHyper fallback;
  fallback.theta = Eigen::VectorXd::Ones(k);
  fallback.nu = 2.0;
  if (ts.size() < 2) return with_hyper(ts, opts.warm_start.value_or(fallback));

  NllEvaluator nll(ts);
  int evals_left = opts.max_evals;
  const auto spend = [&](const Eigen::VectorXd& log_theta, double nu) {
    if (evals_left <= 0) return std::numeric_limits<double>::infinity();
    --evals_left;
    return nll(theta_from_log(log_theta), nu);
  };

  Eigen::VectorXd best_log_theta = Eigen::VectorXd::Zero(k);
  double best_nu = 2.0;
  double best_nll = std::numeric_limits<double>::infinity();

  for (int start = 0; start < opts.starts && evals_left > 0; ++start) {
    Eigen::VectorXd log_theta(k);
    double nu;
    if (start == 0 && opts.warm_start) {
      for (int i = 0; i < k; ++i)
        log_theta[i] = std::clamp(std::log10(opts.warm_start->theta[i]), kLogThetaMin,
                                  kLogThetaMax);
      nu = opts.warm_start->nu;
    } else {
      for (int i = 0; i < k; ++i) log_theta[i] = rng.uniform(kLogThetaMin, kLogThetaMax);
      nu = kNuChoices[start % 3];
    }

    double current = spend(log_theta, nu);
    double step = 0.5;
    while (step >= 1e-2 && evals_left > 0) {
      bool improved = false;
      for (int i = 0; i < k && evals_left > 0; ++i) {
        for (const double dir : {+1.0, -1.0}) {
          Eigen::VectorXd trial = log_theta;
          trial[i] = std::clamp(trial[i] + dir * step, kLogThetaMin, kLogThetaMax);
          if (trial[i] == log_theta[i]) continue;
          const double value = spend(trial, nu);
          if (value < current) {
            current = value;
            log_theta = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }

    if (current < best_nll) {
      best_nll = current;
      best_log_theta = log_theta;
      best_nu = nu;
    }
  }

  if (!std::isfinite(best_nll)) return with_hyper(ts, fallback);
  return with_hyper(ts, KrigingHyper{theta_from_log(best_log_theta), best_nu});
}

}  // namespace mwi
