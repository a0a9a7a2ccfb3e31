#pragma once

#include <cstdint>
#include <string>

#include "nucfw/observations.hpp"
#include "nucfw/thin_svd.hpp"

namespace nucfw {

enum class MovieLensFormat { Ml100k, Ml1m };

MovieLensFormat movielens_format_from_string(const std::string& name);

/// Tab-separated `user item rating timestamp` (100k) or `::`-separated
/// (1M). 1-based ids are remapped to dense 0-based indices in ascending id
/// order; duplicates keep the last occurrence with a warning. Malformed
/// lines raise an error carrying the line number.
Observations parse_movielens(const std::string& path, MovieLensFormat format);

struct Dataset {
  Observations train;
  Observations validation;
  Observations test;
  double mean = 0.0;
  double stddev = 1.0;
  std::string name;
};

/// raw value = normalized * stddev + mean.
double denormalize(const Dataset& data, double normalized_value);

/// Seeded uniform shuffle followed by a 50/25/25 split (train takes the
/// remainder). Mean and standard deviation are fitted on the training split
/// only and applied to all three. Requires at least 4 entries and a
/// nonconstant training split.
Dataset split_and_normalize(const Observations& obs, std::uint64_t seed);

struct DeltaSchedule {
  int j = 0;
  double mu = 2.0;      // 2 + 0.2 * j
  double delta = 0.0;   // mu * ||Y||_F over the observed training values
};

DeltaSchedule delta_for(const Observations& train, int j);

struct SyntheticProblem {
  Dataset data;        // identity normalization: values are raw entries
  ThinSvd ground_truth;
};

/// Planted low-rank instance: X* = A B^T with standard-normal factors,
/// entries sampled without replacement, Gaussian noise added, and the same
/// 50/25/25 split applied to the observed set.
SyntheticProblem make_synthetic(Index m, Index n, Index true_rank,
                                double obs_fraction, double noise_std,
                                std::uint64_t seed);

}  // namespace nucfw
