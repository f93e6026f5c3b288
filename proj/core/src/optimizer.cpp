#include "mwi/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace mwi {

Eigen::MatrixXd lhs_sample(int count, int dim, Rng& rng) {
  if (count < 1 || dim < 1) throw std::invalid_argument("lhs_sample: bad shape");
  Eigen::MatrixXd x(count, dim);
  std::vector<int> perm(count);
  for (int k = 0; k < dim; ++k) {
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    for (int i = 0; i < count; ++i) x(i, k) = (perm[i] + rng.uniform()) / count;
  }
  return x;
}

void pso_step(Eigen::MatrixXd& positions, Eigen::MatrixXd& velocities,
              const Eigen::MatrixXd& personal_best, const Eigen::VectorXd& global_best,
              const PsoParams& params, Rng& rng) {
  for (Eigen::Index p = 0; p < positions.rows(); ++p)
    for (Eigen::Index k = 0; k < positions.cols(); ++k) {
      const double r1 = rng.uniform();
      const double r2 = rng.uniform();
      double v = params.omega * velocities(p, k) +
                 params.c1 * r1 * (personal_best(p, k) - positions(p, k)) +
                 params.c2 * r2 * (global_best[k] - positions(p, k));
      v = std::clamp(v, -params.vmax, params.vmax);
      double x = positions(p, k) + v;
      if (x < 0.0) {
        x = 0.0;
        v = 0.0;
      } else if (x > 1.0) {
        x = 1.0;
        v = 0.0;
      }
      positions(p, k) = x;
      velocities(p, k) = v;
    }
}

int sbd_agent_select(const std::vector<KrigingModel::Prediction>& predictions) {
  if (predictions.empty()) throw std::invalid_argument("sbd_agent_select: empty");
  int best = 0;
  double best_value = predictions[0].mean - predictions[0].uncertainty;
  for (int i = 1; i < static_cast<int>(predictions.size()); ++i) {
    const double value = predictions[i].mean - predictions[i].uncertainty;
    if (value < best_value) {
      best_value = value;
      best = i;
    }
  }
  return best;
}

namespace {
double optimistic_value(const Appraisal& a) {
  return a.member ? a.phi_exact : a.phi_hat - a.sigma;
}

double pessimistic_value(const Appraisal& a) {
  return a.member ? a.phi_exact : a.phi_hat + a.sigma;
}
}  // namespace

int ranking_choose(const Appraisal& first, const Appraisal& second) {
  if (first.member != second.member) {
    const Appraisal& predicted = first.member ? second : first;
    const Appraisal& member = first.member ? first : second;
    const bool predicted_wins = pessimistic_value(predicted) < member.phi_exact;
    if (first.member) return predicted_wins ? 1 : 0;
    return predicted_wins ? 0 : 1;
  }
  return optimistic_value(second) < optimistic_value(first) ? 1 : 0;
}

int global_best_choose(const std::vector<Appraisal>& candidates, int varpi) {
  if (candidates.empty()) throw std::invalid_argument("global_best_choose: empty");
  const auto value = [varpi](const Appraisal& a) {
    return a.member ? a.phi_exact : a.phi_hat + varpi * a.sigma;
  };
  int best = 0;
  double best_value = value(candidates[0]);
  for (int i = 1; i < static_cast<int>(candidates.size()); ++i) {
    const double v = value(candidates[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

void KrigingSurrogate::refit(const TrainingSet& ts, Rng& fit_rng, bool initial) {
  FitOptions opts = initial ? initial_ : refit_;
  if (!initial && model_) opts.warm_start = model_->hyper();
  model_ = KrigingModel::fit(ts, fit_rng, opts);
}

KrigingModel::Prediction KrigingSurrogate::predict(const Eigen::VectorXd& alpha) const {
  if (!model_) throw std::logic_error("KrigingSurrogate: predict before refit");
  return model_->predict(alpha);
}

namespace {

int find_in_training(const TrainingSet& ts, const Eigen::VectorXd& alpha) {
  for (int b = 0; b < ts.size(); ++b)
    if ((ts.sample(b) - alpha).cwiseAbs().maxCoeff() < TrainingSet::duplicate_tolerance)
      return b;
  return -1;
}

Appraisal appraise(const TrainingSet& ts, const Surrogate& surrogate,
                   const Eigen::VectorXd& alpha) {
  Appraisal a;
  const int idx = find_in_training(ts, alpha);
  if (idx >= 0) {
    a.member = true;
    a.phi_exact = ts.cost(idx);
    a.phi_hat = a.phi_exact;
    a.sigma = 0.0;
  } else {
    const KrigingModel::Prediction p = surrogate.predict(alpha);
    a.phi_hat = p.mean;
    a.sigma = p.uncertainty;
  }
  return a;
}

void check_config(int dim, const OptimizerConfig& config) {
  if (dim < 1) throw std::invalid_argument("optimizer: dim must be >= 1");
  if (config.swarm < 1) throw std::invalid_argument("optimizer: swarm must be >= 1");
  if (config.init_samples < config.swarm)
    throw std::invalid_argument("optimizer: init_samples must be >= swarm");
  if (config.iterations < 1) throw std::invalid_argument("optimizer: iterations must be >= 1");
}

}  // namespace

RunReport run_sbd(const CostFn& cost, int dim, const OptimizerConfig& config,
                  Surrogate* injected) {
  check_config(dim, config);
  const auto t0 = std::chrono::steady_clock::now();

  Rng design_rng = make_stream(config.seed, rng_stream::design);
  Rng swarm_rng = make_stream(config.seed, rng_stream::swarm);
  Rng fit_rng = make_stream(config.seed, rng_stream::fit);

  KrigingSurrogate fallback(config.initial_fit, config.refit);
  Surrogate* surrogate = injected ? injected : &fallback;

  const int p_count = config.swarm;

  // Initial design O_0: LHS samples, all full-wave evaluated.
  const Eigen::MatrixXd design = lhs_sample(config.init_samples, dim, design_rng);
  TrainingSet ts(dim);
  int fullwave = 0;
  for (int b = 0; b < config.init_samples; ++b) {
    const Eigen::VectorXd point = design.row(b).transpose();
    const CostEval eval = cost(point);
    ++fullwave;
    ts.append(point, eval.phi);
  }
  surrogate->refit(ts, fit_rng, true);

  // Swarm: the first P design points, or the P cheapest when requested.
  std::vector<int> order(config.init_samples);
  std::iota(order.begin(), order.end(), 0);
  if (config.swarm_from_best)
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return ts.cost(a) < ts.cost(b); });

  Eigen::MatrixXd positions(p_count, dim);
  Eigen::MatrixXd pbest(p_count, dim);
  for (int p = 0; p < p_count; ++p) {
    positions.row(p) = ts.sample(order[p]).transpose();
    pbest.row(p) = positions.row(p);
  }
  Eigen::MatrixXd velocities(p_count, dim);
  for (int p = 0; p < p_count; ++p)
    for (int k = 0; k < dim; ++k)
      velocities(p, k) = swarm_rng.uniform(-config.pso.v_init, config.pso.v_init);

  // Initial global best: cheapest member of the whole design.
  Eigen::VectorXd gbest = ts.sample(ts.argmin_cost());

  RunReport report;
  report.trace.reserve(config.iterations + 1);
  report.trace.push_back({0, ts.min_cost(), fullwave});

  for (int iter = 1; iter <= config.iterations; ++iter) {
    const bool prev_gbest_evaluated = find_in_training(ts, gbest) >= 0;

    // (a)-(b) reward-penalized agent choice under the current model.
    std::vector<KrigingModel::Prediction> predictions(p_count);
    for (int p = 0; p < p_count; ++p) {
      const Appraisal a = appraise(ts, *surrogate, positions.row(p).transpose());
      predictions[p] = {a.phi_hat, a.sigma};
    }
    const int star = sbd_agent_select(predictions);
    const Eigen::VectorXd alpha_star = positions.row(star).transpose();

    // (c) full-wave evaluation only when the optimistic prediction can beat
    // the best cost seen; known points are never re-solved.
    const double gate = predictions[star].mean - predictions[star].uncertainty;
    if (gate <= ts.min_cost() && find_in_training(ts, alpha_star) < 0) {
      const CostEval eval = cost(alpha_star);
      ++fullwave;
      ts.append(alpha_star, eval.phi);
      surrogate->refit(ts, fit_rng, false);
    }

    // (d) personal bests under the post-update model.
    for (int p = 0; p < p_count; ++p) {
      const Appraisal incumbent = appraise(ts, *surrogate, pbest.row(p).transpose());
      const Appraisal current = appraise(ts, *surrogate, positions.row(p).transpose());
      if (ranking_choose(incumbent, current) == 1) pbest.row(p) = positions.row(p);
    }

    // (e) global best over the previous one and all personal bests.
    std::vector<Appraisal> candidates;
    candidates.reserve(p_count + 1);
    candidates.push_back(appraise(ts, *surrogate, gbest));
    for (int p = 0; p < p_count; ++p)
      candidates.push_back(appraise(ts, *surrogate, pbest.row(p).transpose()));
    const int varpi = prev_gbest_evaluated ? 1 : -1;
    const int chosen = global_best_choose(candidates, varpi);
    if (chosen > 0) gbest = pbest.row(chosen - 1).transpose();
    const Appraisal& chosen_appraisal = candidates[chosen];
    report.trace.push_back(
        {iter, chosen_appraisal.member ? chosen_appraisal.phi_exact : chosen_appraisal.phi_hat,
         fullwave});

    // (f) swarm kinematics.
    pso_step(positions, velocities, pbest, gbest, config.pso, swarm_rng);
  }

  report.best_unit = gbest;
  report.fullwave_evals = fullwave;
  report.eta = eta_saving(fullwave, config.swarm, config.iterations);
  const int idx = find_in_training(ts, gbest);
  report.best_was_in_training = idx >= 0;
  report.best_phi = idx >= 0 ? ts.cost(idx) : cost(gbest).phi;
  report.training = std::move(ts);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

RunReport run_ea(const CostFn& cost, int dim, const OptimizerConfig& config) {
  check_config(dim, config);
  const auto t0 = std::chrono::steady_clock::now();

  Rng design_rng = make_stream(config.seed, rng_stream::design);
  Rng swarm_rng = make_stream(config.seed, rng_stream::swarm);

  const int p_count = config.swarm;

  // Identical design and kinematics draws as the surrogate-based run; the
  // baseline just never evaluates the design.
  const Eigen::MatrixXd design = lhs_sample(config.init_samples, dim, design_rng);
  Eigen::MatrixXd positions = design.topRows(p_count);
  Eigen::MatrixXd pbest = positions;
  Eigen::VectorXd pbest_cost =
      Eigen::VectorXd::Constant(p_count, std::numeric_limits<double>::infinity());
  Eigen::MatrixXd velocities(p_count, dim);
  for (int p = 0; p < p_count; ++p)
    for (int k = 0; k < dim; ++k)
      velocities(p, k) = swarm_rng.uniform(-config.pso.v_init, config.pso.v_init);

  Eigen::VectorXd gbest = positions.row(0).transpose();
  double gbest_cost = std::numeric_limits<double>::infinity();
  int fullwave = 0;

  RunReport report;
  report.trace.reserve(config.iterations + 1);
  report.trace.push_back({0, std::numeric_limits<double>::infinity(), 0});

  for (int iter = 1; iter <= config.iterations; ++iter) {
    for (int p = 0; p < p_count; ++p) {
      const CostEval eval = cost(positions.row(p).transpose());
      ++fullwave;
      if (eval.phi < pbest_cost[p]) {
        pbest_cost[p] = eval.phi;
        pbest.row(p) = positions.row(p);
      }
    }
    for (int p = 0; p < p_count; ++p)
      if (pbest_cost[p] < gbest_cost) {
        gbest_cost = pbest_cost[p];
        gbest = pbest.row(p).transpose();
      }
    report.trace.push_back({iter, gbest_cost, fullwave});
    pso_step(positions, velocities, pbest, gbest, config.pso, swarm_rng);
  }

  report.best_unit = gbest;
  report.best_phi = gbest_cost;
  report.best_was_in_training = true;
  report.fullwave_evals = fullwave;
  report.eta = eta_saving(fullwave, config.swarm, config.iterations);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

namespace {

RunReport finish_context_run(RunReport report, const SearchSpace& space) {
  report.best_alpha = space.denormalize(report.best_unit);
  report.best_descriptor = decode(report.best_alpha);
  return report;
}

CostFn bind_cost(const EvalContext& ctx, const SearchSpace& space) {
  return [&ctx, space](const Eigen::VectorXd& unit) {
    return evaluate_cost(ctx, decode(space.denormalize(unit)));
  };
}

}  // namespace

RunReport run_sbd(const EvalContext& ctx, const SearchSpace& space,
                  const OptimizerConfig& config, Surrogate* injected) {
  return finish_context_run(run_sbd(bind_cost(ctx, space), space.dim(), config, injected),
                            space);
}

RunReport run_ea(const EvalContext& ctx, const SearchSpace& space,
                 const OptimizerConfig& config) {
  return finish_context_run(run_ea(bind_cost(ctx, space), space.dim(), config), space);
}

void write_trace_csv(const std::string& path, const RunReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_trace_csv: cannot write " + path);
  out << "iter,gbest_phi,fullwave\n";
  char buf[32];
  for (const TraceRow& row : report.trace) {
    std::snprintf(buf, sizeof buf, "%.17g", row.gbest_phi);
    out << row.iter << ',' << buf << ',' << row.fullwave << "\n";
  }
}

void write_summary(const std::string& path, const RunReport& report,
                   const OptimizerConfig& config) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_summary: cannot write " + path);
  out << "swarm = " << config.swarm << "\n";
  out << "iterations = " << config.iterations << "\n";
  out << "init_samples = " << config.init_samples << "\n";
  out << "seed = " << config.seed << "\n";
  out << "fullwave_evals = " << report.fullwave_evals << "\n";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", report.eta);
  out << "eta = " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.17g", report.best_phi);
  out << "best_phi = " << buf << "\n";
  out << "best_was_in_training = " << (report.best_was_in_training ? 1 : 0) << "\n";
  std::snprintf(buf, sizeof buf, "%.3f", report.wall_seconds);
  out << "wall_seconds = " << buf << "\n";
  out << "best_alpha =";
  for (Eigen::Index k = 0; k < report.best_alpha.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", report.best_alpha[k]);
    out << ' ' << buf;
  }
  out << "\n";
}

}  // namespace mwi
