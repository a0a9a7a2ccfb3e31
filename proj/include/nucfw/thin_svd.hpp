#pragma once

#include <utility>
#include <vector>

#include "nucfw/types.hpp"

namespace nucfw {

inline constexpr double kOrthoTol = 1e-8;
inline constexpr double kDefaultRankThreshold = 1e-6;

/// Factored iterate X = U * diag(S) * V^T.
///
/// U (m x r) and V (n x r) are column-orthonormal within kOrthoTol and S
/// holds strictly positive singular values in descending order. Rank zero
/// (empty factors) represents the zero matrix, so the origin is a valid
/// iterate. Values are immutable after construction; operations return new
/// values and are safe to share read-only across threads.
struct ThinSvd {
  Matrix U;  // m x r
  Vector S;  // r, descending, strictly positive
  Matrix V;  // n x r
  Index m = 0;
  Index n = 0;

  Index rank() const { return S.size(); }
};

/// Rank-0 iterate of the given shape.
ThinSvd zero_iterate(Index m, Index n);

/// Builds a ThinSvd from factors, checking orthonormality, ordering and
/// positivity. Throws std::invalid_argument on violation.
ThinSvd make_thin_svd(Matrix U, Vector S, Matrix V);

/// Sum of singular values; 0 for the rank-0 iterate.
double nuclear_norm(const ThinSvd& x);

/// Number of singular values strictly above rank_threshold.
Index numeric_rank(const ThinSvd& x, double rank_threshold);

/// Max-norm deviation of U^T U and V^T V from the identity.
double ortho_drift(const ThinSvd& x);

double reconstruct_entry(const ThinSvd& x, Index i, Index j);

/// X_ij for each requested index, O(count * r). Throws on out-of-bounds
/// indices.
std::vector<double> reconstruct_entries(
    const ThinSvd& x, const std::vector<std::pair<Index, Index>>& indices);

Matrix densify(const ThinSvd& x);

/// Thin SVD of iterate_scale * X + delta.scale * delta.u * delta.v^T via an
/// incremental rank-one update of the maintained factorization. Singular
/// values <= rank_threshold are truncated, so the result has rank at most
/// r + 1. If the orthonormality drift of the updated factors exceeds
/// kOrthoTol they are re-orthogonalized and the small core re-diagonalized.
ThinSvd rank_one_update(const ThinSvd& x, double iterate_scale,
                        const RankOneOuter& delta, double rank_threshold);

/// Thin SVD of a dense matrix; test-scale oracle backed by a dense solver.
/// Singular values <= rank_threshold are dropped (the default keeps
/// everything above machine-level noise relative to sigma_max).
ThinSvd full_svd_oracle(const Matrix& dense, double rank_threshold = -1.0);

/// Rank of a dense matrix: singular values strictly above threshold.
Index dense_numeric_rank(const Matrix& dense, double threshold);

/// Largest singular value of a dense matrix.
double spectral_norm(const Matrix& dense);

}  // namespace nucfw
