#include <benchmark/benchmark.h>

#include "mwi/fields.hpp"
#include "mwi/kriging.hpp"
#include "mwi/objective.hpp"
#include "mwi/optimizer.hpp"
#include "mwi/tumor.hpp"

namespace {

mwi::ImagingSetup desk_setup() {
  mwi::ImagingSetup setup;
  setup.frequency = 1.3e9;
  setup.eps_b = 22.4;
  setup.sigma_b = 1.26;
  setup.n_views = 16;
  setup.ring_radius = 0.076;
  return setup;
}

void bm_green_assembly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const mwi::ImagingSetup setup = desk_setup();
  const mwi::Grid grid{0.072, n, Eigen::Vector2d::Zero()};
  const mwi::PermittivityMap map =
      mwi::ideal_phantom(grid, setup, 0.025, 16.5, 0.60);
  for (auto _ : state)
    benchmark::DoNotOptimize(mwi::build_green_operators(map, setup));
}
BENCHMARK(bm_green_assembly)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void bm_forward_solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const mwi::ImagingSetup setup = desk_setup();
  const mwi::Grid grid{0.072, n, Eigen::Vector2d::Zero()};
  const mwi::PermittivityMap map =
      mwi::ideal_phantom(grid, setup, 0.025, 16.5, 0.60);
  for (auto _ : state)
    benchmark::DoNotOptimize(mwi::forward_solve(map, setup));
}
BENCHMARK(bm_forward_solve)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

mwi::EvalContext desk_context() {
  const mwi::ImagingSetup setup = desk_setup();
  const mwi::Grid grid{0.072, 24, Eigen::Vector2d::Zero()};
  const mwi::PermittivityMap reference =
      mwi::ideal_phantom(grid, setup, 0.025, 16.5, 0.60);

  mwi::TumorDescriptor truth;
  truth.eps_psi = 59.3;
  truth.sigma_psi = 1.54;
  truth.x_psi = 0.005;
  truth.y_psi = -0.003;
  truth.d = {0.005, 0.005, 0.005, 0.005};
  const mwi::RasterResult raster = mwi::rasterize_tumor(truth, grid);
  const mwi::PermittivityMap actual = mwi::decode_map(
      truth, reference, mwi::breast_support(reference, setup.eps_b, setup.sigma_b), raster);

  const mwi::FieldSet ref_fields = mwi::forward_solve(reference, setup);
  const mwi::FieldSet act_fields = mwi::forward_solve(actual, setup);
  mwi::MeasurementSet meas;
  for (int v = 0; v < setup.n_views; ++v)
    meas.d_meas.push_back(act_fields.scattered_at_receivers[v] -
                          ref_fields.scattered_at_receivers[v]);
  return mwi::make_eval_context(reference, setup, std::move(meas));
}

void bm_cost_eval(benchmark::State& state) {
  const mwi::EvalContext ctx = desk_context();
  mwi::TumorDescriptor candidate;
  candidate.eps_psi = 55.0;
  candidate.sigma_psi = 1.4;
  candidate.x_psi = 0.004;
  candidate.y_psi = -0.002;
  candidate.d = {0.004, 0.006, 0.005, 0.004};
  for (auto _ : state)
    benchmark::DoNotOptimize(mwi::evaluate_cost(ctx, candidate));
}
BENCHMARK(bm_cost_eval)->Unit(benchmark::kMillisecond);

void bm_kriging_fit(benchmark::State& state) {
  const int b = static_cast<int>(state.range(0));
  mwi::Rng rng(7);
  mwi::TrainingSet ts(8);
  while (ts.size() < b) {
    Eigen::VectorXd x(8);
    for (int k = 0; k < 8; ++k) x[k] = rng.uniform();
    ts.append(x, std::cos(3.0 * x.sum()) + x.squaredNorm());
  }
  mwi::FitOptions opts;
  opts.starts = 2;
  opts.max_evals = 150;
  for (auto _ : state) {
    mwi::Rng fit_rng(11);
    benchmark::DoNotOptimize(mwi::KrigingModel::fit(ts, fit_rng, opts));
  }
}
BENCHMARK(bm_kriging_fit)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

void bm_kriging_predict(benchmark::State& state) {
  mwi::Rng rng(7);
  mwi::TrainingSet ts(8);
  while (ts.size() < 100) {
    Eigen::VectorXd x(8);
    for (int k = 0; k < 8; ++k) x[k] = rng.uniform();
    ts.append(x, std::cos(3.0 * x.sum()) + x.squaredNorm());
  }
  mwi::KrigingHyper hyper;
  hyper.theta = Eigen::VectorXd::Constant(8, 2.0);
  const mwi::KrigingModel model = mwi::KrigingModel::with_hyper(ts, hyper);
  Eigen::VectorXd probe = Eigen::VectorXd::Constant(8, 0.37);
  for (auto _ : state)
    benchmark::DoNotOptimize(model.predict(probe));
}
BENCHMARK(bm_kriging_predict);

}  // namespace

BENCHMARK_MAIN();
