#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nucfw/observations.hpp"
#include "nucfw/thin_svd.hpp"
#include "nucfw/types.hpp"

namespace nucfw {

enum class VerifyScale { Quick, Full };

struct PropertyReport {
  std::string name;
  int trials = 0;
  int failures = 0;
  std::vector<std::uint64_t> counterexample_seeds;
  std::string note;

  bool ok() const { return failures == 0; }
};

// Randomized instance helpers shared by the verification suite and tests.
Matrix random_orthonormal(Index rows, Index cols, std::mt19937_64& rng);
ThinSvd random_thin_svd(Index m, Index n, Index r, double sv_min,
                        double sv_max, std::mt19937_64& rng);
Matrix random_dense_of_rank(Index m, Index n, Index rank,
                            std::mt19937_64& rng);
/// Full-grid observations whose residual at x equals the dense gradient g.
Observations observations_with_gradient(const ThinSvd& x, const Matrix& g);

/// Densely applies X+ = X + tau * (X - delta * (U s)(V t)^T) and reports
/// feasibility (nuclear norm within delta + 1e-8) and whether the rank
/// dropped by exactly one under the 1e-6 threshold.
struct StepOutcome {
  bool feasible = false;
  bool rank_dropped = false;
  double nuclear_norm_after = 0.0;
  Index rank_after = 0;
};
StepOutcome check_rank_drop_outcome(const ThinSvd& x, double delta,
                                    const Vector& s, const Vector& t,
                                    double tau);

// Property checkers; each trial derives its own seed from seed0 so failures
// are reproducible in isolation.
PropertyReport check_rank_drop_exactness(int trials, std::uint64_t seed0);
PropertyReport check_radius_lower_bound(int trials, std::uint64_t seed0);
PropertyReport check_interior_feasibility(int trials, std::uint64_t seed0);
PropertyReport check_interior_nonempty(int trials, std::uint64_t seed0);
PropertyReport check_interior_selection_quality(int instances, int samples,
                                                std::uint64_t seed0);
PropertyReport check_boundary_descent(int aligned_instances,
                                      int misaligned_instances,
                                      std::uint64_t seed0);
PropertyReport check_exterior_boundary_proximity(int trials,
                                                 std::uint64_t seed0);
PropertyReport check_exterior_feasibility(int trials, std::uint64_t seed0);
PropertyReport check_face_membership(int trials, std::uint64_t seed0);
PropertyReport check_svd_update_maintenance(int trials, int updates_per_trial,
                                            Index m, Index n,
                                            std::uint64_t seed0);
PropertyReport check_convergence_bound(int runs, std::uint64_t seed0);
PropertyReport check_solver_feasibility(int runs, std::uint64_t seed0);
PropertyReport check_rank_discipline(int runs, std::uint64_t seed0);
PropertyReport check_rank_one_trace_equivalence(int runs,
                                                std::uint64_t seed0);

std::vector<PropertyReport> run_property_suite(VerifyScale scale,
                                               std::uint64_t seed0);

}  // namespace nucfw
