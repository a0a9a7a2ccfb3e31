#pragma once

#include <random>
#include <span>

#include "nucfw/observations.hpp"
#include "nucfw/thin_svd.hpp"
#include "nucfw/types.hpp"

namespace nucfw {

inline constexpr double kDefaultPowerTol = 1e-9;
inline constexpr int kDefaultPowerMaxIter = 500;

enum class Side { Left, Right };

struct LmoResult {
  RankOneOuter atom;        // -delta * u1 * v1^T
  double sigma = 0.0;       // leading singular value estimate of the gradient
  bool converged = true;
  bool zero_gradient = false;
  int iterations = 0;
};

/// Half squared loss over the observed entries:
/// f(X) = 0.5 * sum_{(i,j) in Omega} (X_ij - Y_ij)^2.
double objective_value(const ThinSvd& x, const Observations& obs);

/// f from an already-computed residual.
double objective_value(const SparseResidual& res);

/// Gradient of the half squared loss: R_ij = X_ij - Y_ij on the pattern.
/// Also caches the reconstructed X values.
SparseResidual residual(const ThinSvd& x, const Observations& obs);

/// G v (Right) or G^T u (Left) for the sparse gradient G.
Vector apply_gradient(const SparseResidual& res, Side side, const Vector& vec);

/// Linear minimization over the nuclear-norm ball of radius delta:
/// Z = -delta * u1 * v1^T with (u1, v1) the leading singular pair of the
/// gradient, found by power iteration on the Gram operator with a random
/// start and one restart on stagnation. A zero gradient is reported through
/// zero_gradient (the caller treats the gap as 0); hitting the iteration cap
/// returns the best iterate with converged = false.
LmoResult lmo(const SparseResidual& res, double delta, double power_tol,
              int power_max_iter, std::mt19937_64& rng);

/// argmin over [0, tau_max] of 0.5 * ||R + tau * D||^2 on Omega;
/// closed form clamp(-<R, D> / ||D||^2, 0, tau_max). Returns 0 when D is
/// identically zero on Omega.
double line_search_on_residual(std::span<const double> rvals,
                               std::span<const double> dvals, double tau_max);

/// Convenience form computing the residual first.
double exact_line_search(const ThinSvd& x, const Observations& obs,
                         std::span<const double> dir_on_omega, double tau_max);

/// Frank-Wolfe duality gap g = <grad f, X - Z> for the oracle atom Z;
/// g >= 0 up to the power-iteration tolerance and f(X) - f* <= g.
double duality_gap(const ThinSvd& x, const SparseResidual& res,
                   const RankOneOuter& lmo_atom);

/// Root mean squared error over a (nonempty) test set.
double rmse(const ThinSvd& x, const Observations& test);

}  // namespace nucfw
