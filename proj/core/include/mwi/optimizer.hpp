#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "mwi/kriging.hpp"
#include "mwi/objective.hpp"
#include "mwi/rng.hpp"
#include "mwi/tumor.hpp"

namespace mwi {

struct PsoParams {
  double omega = 0.7298;
  double c1 = 1.49618;
  double c2 = 1.49618;
  double vmax = 0.5;       // per normalized dimension
  double v_init = 0.1;     // initial velocities uniform in [-v_init, v_init]
};

struct OptimizerConfig {
  int swarm = 16;         // P
  int iterations = 200;   // I
  int init_samples = 40;  // B0
  std::uint64_t seed = 1;
  PsoParams pso;
  bool swarm_from_best = false;  // pick the P lowest-cost members of O_0
  FitOptions initial_fit{20, 2000, std::nullopt};
  FitOptions refit{2, 150, std::nullopt};  // warm-started from the incumbent
};

// Latin hypercube design: B0 points in [0,1]^K, one sample per stratum per
// dimension.
Eigen::MatrixXd lhs_sample(int count, int dim, Rng& rng);

// One inertia-weight PSO update in the unit box: velocity clamped to
// +-vmax per dimension, position clamped to [0,1] with the violating
// velocity component zeroed. Draw order: agent-major, dimension-minor,
// cognitive uniform before social uniform.
void pso_step(Eigen::MatrixXd& positions, Eigen::MatrixXd& velocities,
              const Eigen::MatrixXd& personal_best, const Eigen::VectorXd& global_best,
              const PsoParams& params, Rng& rng);

// How a candidate enters best-selection rules: members of the training set
// carry exact cost and zero uncertainty.
struct Appraisal {
  double phi_hat = 0.0;
  double sigma = 0.0;
  bool member = false;
  double phi_exact = 0.0;
};

// Best agent of a population: argmin of (phi_hat - sigma); ties -> lowest index.
int sbd_agent_select(const std::vector<KrigingModel::Prediction>& predictions);

// Three-case personal-best ranking; returns 0 to keep `first`, 1 for
// `second`. Both-member/both-predicted: argmin of (value - sigma) with
// exact substitution for members; mixed: the predicted one wins only if
// its cost penalized by the uncertainty still beats the exact one.
int ranking_choose(const Appraisal& first, const Appraisal& second);

// Global best over candidates: argmin of (phi_hat + varpi*sigma), exact
// values for members; varpi is +1 when the previous global best was
// full-wave evaluated, -1 otherwise.
int global_best_choose(const std::vector<Appraisal>& candidates, int varpi);

// Cost callback in normalized coordinates.
using CostFn = std::function<CostEval(const Eigen::VectorXd& unit_alpha)>;

// Surrogate backend of the SbD loop; the default is Kriging. The interface
// exists so tests can inject an exact oracle.
class Surrogate {
 public:
  virtual ~Surrogate() = default;
  virtual void refit(const TrainingSet& ts, Rng& fit_rng, bool initial) = 0;
  virtual KrigingModel::Prediction predict(const Eigen::VectorXd& alpha) const = 0;
};

class KrigingSurrogate final : public Surrogate {
 public:
  KrigingSurrogate(FitOptions initial, FitOptions refit)
      : initial_(initial), refit_(refit) {}
  void refit(const TrainingSet& ts, Rng& fit_rng, bool initial) override;
  KrigingModel::Prediction predict(const Eigen::VectorXd& alpha) const override;
  const KrigingModel& model() const { return *model_; }

 private:
  FitOptions initial_;
  FitOptions refit_;
  std::optional<KrigingModel> model_;
};

struct TraceRow {
  int iter = 0;
  double gbest_phi = std::numeric_limits<double>::infinity();
  int fullwave = 0;
};

struct RunReport {
  Eigen::VectorXd best_unit;       // final global best, normalized coordinates
  Eigen::VectorXd best_alpha;      // physical units (filled by the context wrappers)
  TumorDescriptor best_descriptor; // decoded (context wrappers)
  double best_phi = 0.0;           // full-wave cost of the final global best
  bool best_was_in_training = false;  // true: no extra solve was needed at the end
  int fullwave_evals = 0;          // B_I (SbD) or P*I (EA); excludes the final re-evaluation
  double eta = 0.0;                // saving vs T = P*I (0 for the EA baseline)
  std::vector<TraceRow> trace;     // I+1 rows
  double wall_seconds = 0.0;
  TrainingSet training;            // final O_I (SbD only)
};

// Generic engines on the unit cube (unit-testable with synthetic costs).
RunReport run_sbd(const CostFn& cost, int dim, const OptimizerConfig& config,
                  Surrogate* injected = nullptr);
RunReport run_ea(const CostFn& cost, int dim, const OptimizerConfig& config);

// EM-context wrappers: bind the cost to evaluate_cost(ctx, decode(alpha))
// over the search space and decode the winner.
RunReport run_sbd(const EvalContext& ctx, const SearchSpace& space,
                  const OptimizerConfig& config, Surrogate* injected = nullptr);
RunReport run_ea(const EvalContext& ctx, const SearchSpace& space,
                 const OptimizerConfig& config);

// Serialization of a run: trace.csv (iter,gbest_phi,fullwave) and a
// summary text block. Wall time appears only in the summary (trace files
// are byte-reproducible).
void write_trace_csv(const std::string& path, const RunReport& report);
void write_summary(const std::string& path, const RunReport& report,
                   const OptimizerConfig& config);

}  // namespace mwi
