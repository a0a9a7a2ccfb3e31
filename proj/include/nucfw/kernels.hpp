#pragma once

#include <span>

#include "nucfw/observations.hpp"
#include "nucfw/thin_svd.hpp"
#include "nucfw/types.hpp"

namespace nucfw::kernels {

/// Every kernel has a serial reference path and an OpenMP path producing
/// bitwise-identical results: reductions accumulate fixed-size chunks in a
/// fixed order regardless of thread count, and map-style kernels write each
/// element independently.
enum class Exec { Serial, Parallel };

/// Parallel unless NUCFW_SERIAL=1 is set in the environment.
Exec default_exec();

inline constexpr std::size_t kChunk = 4096;

double dot(std::span<const double> a, std::span<const double> b, Exec exec);

double sum_squares(std::span<const double> a, Exec exec);

/// out[e] = X at (row[e], col[e]) for the factored iterate.
void reconstruct(const ThinSvd& x, const Observations& pattern,
                 std::span<double> out, Exec exec);

/// y = G v with G the sparse matrix holding gvals on the pattern.
void apply_right(const Observations& pattern, std::span<const double> gvals,
                 const Vector& v, Vector& y, Exec exec);

/// y = G^T u.
void apply_left(const Observations& pattern, std::span<const double> gvals,
                const Vector& u, Vector& y, Exec exec);

/// out[e] = atom_coef * (atom.scale * u_i * v_j) + iterate_coef * iterate[e].
void combine_rank_one(const Observations& pattern, const RankOneOuter& atom,
                      double atom_coef, std::span<const double> iterate,
                      double iterate_coef, std::span<double> out, Exec exec);

/// sum_e w[e] * u[row[e]] * v[col[e]]  (= u^T W v for W = w on the pattern).
double rank_one_inner(const Observations& pattern, std::span<const double> w,
                      const Vector& u, const Vector& v, Exec exec);

/// 0.5 * sum_e (a * iterate[e] + b * u_i * v_j - y[e])^2; evaluates the
/// objective of a rank-one trial step without materializing it.
double blend_half_sq(const Observations& pattern,
                     std::span<const double> iterate, double a,
                     const Vector& u, const Vector& v, double b, Exec exec);

}  // namespace nucfw::kernels
