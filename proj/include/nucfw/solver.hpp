#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nucfw/objective.hpp"
#include "nucfw/observations.hpp"
#include "nucfw/thin_svd.hpp"
#include "nucfw/types.hpp"

namespace nucfw {

enum class Variant { Fw, Afw, InFace, Rdfw };

Variant variant_from_string(const std::string& name);
std::string to_string(Variant v);

enum class StepType { Fw, Away, InFace, RdInterior, RdExterior, Stop };

std::string to_string(StepType t);

struct SolverConfig {
  double delta = 1.0;
  int max_iters = 1000;
  double rel_gap_tol = 1e-2;
  double rank_threshold = kDefaultRankThreshold;
  Variant variant = Variant::Rdfw;
  std::uint64_t seed = 0;
  double power_tol = kDefaultPowerTol;
  int power_max_iter = kDefaultPowerMaxIter;
  // Away-step variant only: re-densify the atomic decomposition after each
  // iteration and compare against the factored iterate (test scale).
  bool validate_decomposition = false;
};

/// One record per iteration: the state at iterate k plus the step taken at
/// k. The final record carries the terminal iterate with step_type Stop.
/// Rank-drop and in-face rows reuse the previous gap value (no oracle call
/// happens on those iterations); the step type marks them.
struct TraceRow {
  int iter = 0;
  double objective = 0.0;
  double gap = 0.0;
  double nuclear_norm = 0.0;
  int rank = 0;
  StepType step_type = StepType::Fw;
  double tau = 0.0;
  double elapsed_s = 0.0;
};

using TraceSink = std::function<void(const TraceRow&)>;

/// Weighted rank-one atoms representing the away-step iterate,
/// x = sum_a weight_a * atom_a with unit-norm u, v, |scale| = delta,
/// strictly positive weights and total weight at most 1.
struct AtomicDecomposition {
  std::vector<RankOneOuter> atoms;
  std::vector<double> weights;
};

Matrix densify(const AtomicDecomposition& decomposition, Index m, Index n);

struct AwayChoice {
  int index = -1;
  double inner = 0.0;     // <atom, grad f> of the selected atom
  double max_step = 0.0;  // weight / (1 - weight)
};

/// Active atom most aligned with the gradient; empty when no atoms exist.
std::optional<AwayChoice> away_choice(const AtomicDecomposition& decomposition,
                                      const SparseResidual& res);

struct SolveResult {
  ThinSvd x;
  std::vector<TraceRow> trace;
  bool converged = false;  // stopped by the gap rule rather than max_iters
  AtomicDecomposition decomposition;  // populated by the away-step variant
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<TraceRow> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<TraceRow>& trace() const { return trace_; }

 private:
  std::vector<TraceRow> trace_;
};

/// Runs the configured variant from the zero iterate. Every iterate stays
/// inside the nuclear ball (within 1e-8); termination when
/// gap / max(f, 1e-12) <= rel_gap_tol or after max_iters steps.
SolveResult solve(const Observations& train, const SolverConfig& config,
                  const TraceSink& sink = {});

/// Per-row suboptimality bound 8 * delta^2 * L / (4 + N_fw), where N_fw
/// counts plain Frank-Wolfe steps taken before each row. For the half
/// squared loss the gradient is 1-Lipschitz on the observed entries, so
/// lipschitz = 1 applies.
std::vector<double> convergence_bound(const std::vector<TraceRow>& trace,
                                      double delta, double lipschitz);

}  // namespace nucfw
