#pragma once

#include <vector>

#include "nucfw/observations.hpp"
#include "nucfw/thin_svd.hpp"
#include "nucfw/types.hpp"

namespace nucfw {

inline constexpr double kZeroSvTol = 1e-8;

enum class RankDropKind { Interior, Exterior };

/// A rank-annihilating perturbation of the factored iterate: taking
/// X+ = X + tau_star * (X - delta * U s t^T V^T) lowers the rank by exactly
/// one while keeping the iterate inside the nuclear-norm ball. s and t are
/// unit vectors in the rank-r coefficient space; the exterior case has
/// s = t. score is the gradient correlation <grad f, U s t^T V^T>.
struct RankDropStep {
  Vector s;
  Vector t;
  double tau_star = 0.0;
  RankDropKind kind = RankDropKind::Interior;
  double score = 0.0;
};

struct InteriorCandidate {
  Vector s;
  Vector t;
  double lambda = 0.0;    // eigenvalue that produced the candidate
  double score = 0.0;     // s^T W t
  double bilinear = 0.0;  // s^T Sigma^{-1} t, positive after sign fixing
};

struct ExteriorStep {
  Vector s;
  double tau_star = 0.0;
};

/// Half the nuclear-norm distance to the ball boundary,
/// (delta - ||X||_NN) / 2. Throws if the iterate is infeasible beyond a
/// 1e-10 slack.
double kappa(const ThinSvd& x, double delta);

/// W = U^T grad f(X) V, built column-by-column from the sparse gradient.
Matrix projected_gradient(const ThinSvd& x, const SparseResidual& res);

/// Stationary-point candidates of the interior rank-drop subproblem: for
/// each real eigenvalue lambda of -Sigma W, the near-null singular pair of
/// -(W + lambda Sigma^{-1}) / 2, kept when kappa * s^T Sigma^{-1} t >= 1
/// after flipping s so the bilinear form is positive. Per eigenvalue the
/// best-scoring pair under the tolerance is kept. Empty result means no
/// feasible candidate.
std::vector<InteriorCandidate> interior_candidates(const Matrix& W,
                                                   const Vector& S,
                                                   double kappa_value,
                                                   double zero_sv_tol);

/// Maximizer of the symmetrized Rayleigh quotient
/// 0.5 * s^T (W + W^T) s / (s^T Sigma^{-1} s) over unit s, reduced to a
/// standard eigenproblem through z = Sigma^{-1/2} s; the paired step size
/// tau* = (delta * s^T Sigma^{-1} s - 1)^{-1} annihilates one singular
/// direction while preserving feasibility. Throws when tau* degenerates.
ExteriorStep exterior_step(const Matrix& W, const Vector& S, double delta);

/// Full rank-drop direction selection: interior candidates when
/// kappa >= sigma_r (picking the best candidate, see below), exterior
/// fallback otherwise or when no interior candidate is feasible. Requires
/// rank >= 2. Candidate selection maximizes the first-order decrease of the
/// actual step, i.e. the gradient correlation of the unit-nuclear-norm
/// perturbation.
RankDropStep rank_drop_direction(const ThinSvd& x, const SparseResidual& res,
                                 double delta);

}  // namespace nucfw
