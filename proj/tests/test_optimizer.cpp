#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "mwi/optimizer.hpp"
#include "mwi/rng.hpp"

namespace {

// Cheap smooth multimodal target on the unit cube, minimum near 0.62.
mwi::CostEval wavy_bowl(const Eigen::VectorXd& unit) {
  double phi = 0.05;
  for (int k = 0; k < unit.size(); ++k) {
    const double t = unit[k] - 0.62;
    phi += t * t + 0.03 * std::cos(9.0 * unit[k] + k);
  }
  return {phi, true};
}

// Surrogate that answers with the true cost and zero spread. With this
// oracle the selection rules degenerate to plain comparisons, so the SbD
// loop must retrace the plain swarm baseline step for step.
class ExactOracle final : public mwi::Surrogate {
 public:
  explicit ExactOracle(mwi::CostFn f) : f_(std::move(f)) {}
  void refit(const mwi::TrainingSet&, mwi::Rng&, bool) override {}
  mwi::KrigingModel::Prediction predict(const Eigen::VectorXd& alpha) const override {
    return {f_(alpha).phi, 0.0};
  }

 private:
  mwi::CostFn f_;
};

}  // namespace

TEST_CASE("latin hypercube design is stratified in every dimension") {
  mwi::Rng rng(17);
  const int count = 16;
  const int dim = 5;
  const Eigen::MatrixXd design = mwi::lhs_sample(count, dim, rng);
  REQUIRE(design.rows() == count);
  REQUIRE(design.cols() == dim);

  for (int k = 0; k < dim; ++k) {
    std::vector<int> hits(count, 0);
    for (int b = 0; b < count; ++b) {
      CHECK(design(b, k) >= 0.0);
      CHECK(design(b, k) < 1.0);
      ++hits[static_cast<int>(design(b, k) * count)];
    }
    for (int s = 0; s < count; ++s) CHECK(hits[s] == 1);
  }

  mwi::Rng rng2(17);
  CHECK(mwi::lhs_sample(count, dim, rng2) == design);
  mwi::Rng rng3(18);
  CHECK(mwi::lhs_sample(count, dim, rng3) != design);
}

TEST_CASE("pso step clamps velocities and boxes positions") {
  const int p_count = 6;
  const int dim = 4;
  mwi::Rng rng(3);
  Eigen::MatrixXd pos(p_count, dim), vel(p_count, dim), pbest(p_count, dim);
  for (int p = 0; p < p_count; ++p)
    for (int k = 0; k < dim; ++k) {
      pos(p, k) = (p + k) % 2 ? 0.95 : 0.05;
      vel(p, k) = (k % 2 ? -1 : 1) * 0.4;
      pbest(p, k) = p % 2 ? 1.0 : 0.0;
    }
  const Eigen::VectorXd gbest = Eigen::VectorXd::Constant(dim, 1.0);

  mwi::PsoParams params;
  params.c1 = 4.0;  // exaggerated pulls force both clamps to engage
  params.c2 = 4.0;
  mwi::Rng rng_b(3);
  Eigen::MatrixXd pos_b = pos, vel_b = vel;

  mwi::pso_step(pos, vel, pbest, gbest, params, rng);
  const double vmax = params.vmax;  // clamp applies per normalized dimension
  bool hit_box = false;
  for (int p = 0; p < p_count; ++p)
    for (int k = 0; k < dim; ++k) {
      CHECK(std::abs(vel(p, k)) <= vmax + 1e-15);
      CHECK(pos(p, k) >= 0.0);
      CHECK(pos(p, k) <= 1.0);
      if (pos(p, k) == 0.0 || pos(p, k) == 1.0) {
        hit_box = true;
        CHECK(vel(p, k) == 0.0);
      }
    }
  CHECK(hit_box);

  mwi::pso_step(pos_b, vel_b, pbest, gbest, params, rng_b);
  CHECK(pos_b == pos);
  CHECK(vel_b == vel);
}

TEST_CASE("agent selection rewards predicted cost minus spread") {
  using P = mwi::KrigingModel::Prediction;
  CHECK(mwi::sbd_agent_select({P{1.0, 0.1}, P{0.9, 0.0}, P{1.05, 0.3}}) == 2);
  CHECK(mwi::sbd_agent_select({P{0.5, 0.0}, P{0.6, 0.1}}) == 0);  // tie keeps first
  CHECK(mwi::sbd_agent_select({P{2.0, 0.0}}) == 0);
}

TEST_CASE("personal-best ranking distinguishes members from predictions") {
  const auto member = [](double phi) {
    return mwi::Appraisal{phi, 0.0, true, phi};
  };
  const auto predicted = [](double mean, double sigma) {
    return mwi::Appraisal{mean, sigma, false, 0.0};
  };

  // Both exact: plain comparison, tie keeps the first (the incumbent).
  CHECK(mwi::ranking_choose(member(1.0), member(0.9)) == 1);
  CHECK(mwi::ranking_choose(member(0.9), member(1.0)) == 0);
  CHECK(mwi::ranking_choose(member(1.0), member(1.0)) == 0);

  // Both predicted: optimistic comparison.
  CHECK(mwi::ranking_choose(predicted(1.0, 0.3), predicted(0.9, 0.0)) == 0);  // 0.7 < 0.9
  CHECK(mwi::ranking_choose(predicted(1.0, 0.0), predicted(0.9, 0.05)) == 1);

  // Mixed: the prediction must beat the exact value even when penalized.
  CHECK(mwi::ranking_choose(member(1.0), predicted(0.85, 0.1)) == 1);   // 0.95 < 1.0
  CHECK(mwi::ranking_choose(member(1.0), predicted(0.95, 0.1)) == 0);   // 1.05 > 1.0
  CHECK(mwi::ranking_choose(member(1.0), predicted(0.9, 0.1)) == 0);    // tie keeps exact
  CHECK(mwi::ranking_choose(predicted(0.85, 0.1), member(1.0)) == 0);
  CHECK(mwi::ranking_choose(predicted(0.95, 0.1), member(1.0)) == 1);
}

TEST_CASE("global-best choice flips the spread sign with varpi") {
  std::vector<mwi::Appraisal> candidates{
      {0.90, 0.00, true, 0.90},   // previous best, exact
      {0.85, 0.10, false, 0.0},   // optimistic candidate
  };
  // Previous best was evaluated: varpi = +1 penalizes the uncertain one.
  CHECK(mwi::global_best_choose(candidates, +1) == 0);  // 0.95 > 0.90
  // Previous best not evaluated: varpi = -1 favors exploration.
  CHECK(mwi::global_best_choose(candidates, -1) == 1);  // 0.75 < 0.90

  CHECK_THROWS_AS(mwi::global_best_choose({}, 1), std::invalid_argument);
}

TEST_CASE("plain swarm baseline spends exactly P*I evaluations") {
  mwi::OptimizerConfig config;
  config.swarm = 7;
  config.iterations = 15;
  config.init_samples = 12;
  config.seed = 4;

  int calls = 0;
  const mwi::CostFn counted = [&calls](const Eigen::VectorXd& unit) {
    ++calls;
    return wavy_bowl(unit);
  };
  const mwi::RunReport report = mwi::run_ea(counted, 3, config);

  CHECK(calls == 7 * 15);
  CHECK(report.fullwave_evals == 7 * 15);
  CHECK(report.eta == 0.0);
  CHECK(report.best_was_in_training);
  REQUIRE(report.trace.size() == 16);
  CHECK(report.trace[0].gbest_phi == std::numeric_limits<double>::infinity());
  CHECK(report.trace[0].fullwave == 0);
  for (int i = 1; i <= 15; ++i) {
    CHECK(report.trace[i].gbest_phi <= report.trace[i - 1].gbest_phi);
    CHECK(report.trace[i].fullwave == 7 * i);
  }
  CHECK(report.best_phi == wavy_bowl(report.best_unit).phi);
  CHECK(report.best_phi < 0.2);

  const mwi::RunReport again = mwi::run_ea(wavy_bowl, 3, config);
  CHECK(again.best_unit == report.best_unit);
  for (size_t i = 0; i < report.trace.size(); ++i)
    CHECK(again.trace[i].gbest_phi == report.trace[i].gbest_phi);
}

TEST_CASE("surrogate run respects the incremental budget law") {
  mwi::OptimizerConfig config;
  config.swarm = 6;
  config.iterations = 10;
  config.init_samples = 9;
  config.seed = 11;

  int calls = 0;
  const mwi::CostFn counted = [&calls](const Eigen::VectorXd& unit) {
    ++calls;
    return wavy_bowl(unit);
  };
  const mwi::RunReport report = mwi::run_sbd(counted, 3, config);

  CHECK(report.fullwave_evals >= config.init_samples);
  CHECK(report.fullwave_evals <= config.init_samples + config.iterations);
  CHECK(report.training.size() == report.fullwave_evals);
  CHECK(calls == report.fullwave_evals + (report.best_was_in_training ? 0 : 1));
  CHECK(report.eta ==
        doctest::Approx(1.0 - double(report.fullwave_evals) / (6 * 10)).epsilon(1e-15));

  REQUIRE(report.trace.size() == 11);
  CHECK(report.trace[0].fullwave == config.init_samples);
  for (int i = 1; i <= 10; ++i) {
    CHECK(report.trace[i].fullwave >= report.trace[i - 1].fullwave);
    CHECK(report.trace[i].fullwave <= config.init_samples + i);
  }
  CHECK(report.best_phi == wavy_bowl(report.best_unit).phi);
  CHECK(report.best_phi <= report.trace[0].gbest_phi);

  // Same seed, same trajectory; the Kriging refits are deterministic too.
  const mwi::RunReport again = mwi::run_sbd(wavy_bowl, 3, config);
  CHECK(again.best_unit == report.best_unit);
  CHECK(again.fullwave_evals == report.fullwave_evals);
  for (size_t i = 0; i < report.trace.size(); ++i)
    CHECK(again.trace[i].gbest_phi == report.trace[i].gbest_phi);

  // The cheapest-members swarm variant obeys the same bookkeeping.
  mwi::OptimizerConfig from_best = config;
  from_best.swarm_from_best = true;
  const mwi::RunReport sorted_run = mwi::run_sbd(wavy_bowl, 3, from_best);
  CHECK(sorted_run.fullwave_evals <= config.init_samples + config.iterations);
  CHECK(sorted_run.best_phi == wavy_bowl(sorted_run.best_unit).phi);
}

TEST_CASE("exact surrogate oracle reduces the sbd loop to the baseline") {
  // With B0 = P both engines start from the same evaluated swarm, and the
  // zero-spread oracle collapses every selection rule to the plain
  // comparisons of the baseline: the two trajectories must agree bit for
  // bit, while the surrogate run evaluates at most B0 + I times.
  mwi::OptimizerConfig config;
  config.swarm = 8;
  config.iterations = 12;
  config.init_samples = 8;
  config.seed = 23;

  ExactOracle oracle{wavy_bowl};
  const mwi::RunReport sbd = mwi::run_sbd(wavy_bowl, 4, config, &oracle);
  const mwi::RunReport ea = mwi::run_ea(wavy_bowl, 4, config);

  REQUIRE(sbd.trace.size() == ea.trace.size());
  for (size_t i = 1; i < ea.trace.size(); ++i)
    CHECK(sbd.trace[i].gbest_phi == ea.trace[i].gbest_phi);
  CHECK(sbd.best_unit == ea.best_unit);
  CHECK(sbd.best_phi == ea.best_phi);
  CHECK(sbd.fullwave_evals <= config.init_samples + config.iterations);
  CHECK(ea.fullwave_evals == 8 * 12);
  CHECK(sbd.eta > 0.5);
}

TEST_CASE("configuration guards reject degenerate runs") {
  mwi::OptimizerConfig config;
  config.swarm = 4;
  config.iterations = 3;
  config.init_samples = 4;

  CHECK_THROWS_AS(mwi::run_sbd(wavy_bowl, 0, config), std::invalid_argument);
  CHECK_THROWS_AS(mwi::run_ea(wavy_bowl, 0, config), std::invalid_argument);

  mwi::OptimizerConfig no_iter = config;
  no_iter.iterations = 0;
  CHECK_THROWS_AS(mwi::run_sbd(wavy_bowl, 2, no_iter), std::invalid_argument);
  CHECK_THROWS_AS(mwi::run_ea(wavy_bowl, 2, no_iter), std::invalid_argument);

  mwi::OptimizerConfig tiny_design = config;
  tiny_design.init_samples = 3;  // smaller than the swarm
  CHECK_THROWS_AS(mwi::run_sbd(wavy_bowl, 2, tiny_design), std::invalid_argument);

  mwi::OptimizerConfig no_swarm = config;
  no_swarm.swarm = 0;
  CHECK_THROWS_AS(mwi::run_ea(wavy_bowl, 2, no_swarm), std::invalid_argument);
}
