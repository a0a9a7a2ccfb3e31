// Test-only oracles kept independent of the implementation paths they check.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nucfw/observations.hpp"
#include "nucfw/types.hpp"

namespace oracles {

/// Golden-section minimizer for a unimodal function on [lo, hi].
template <typename F>
double golden_section(F&& phi, double lo, double hi, double tol = 1e-9) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = phi(c), fd = phi(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = phi(d);
    }
  }
  return 0.5 * (a + b);
}

/// Dense evaluation of the half squared loss over the pattern.
inline double dense_half_sq(const nucfw::Matrix& x,
                            const nucfw::Observations& obs) {
  double acc = 0.0;
  for (std::size_t e = 0; e < obs.size(); ++e) {
    const double d = x(obs.row[e], obs.col[e]) - obs.value[e];
    acc += d * d;
  }
  return 0.5 * acc;
}

inline nucfw::Matrix dense_from_observations(const nucfw::Observations& obs) {
  nucfw::Matrix out = nucfw::Matrix::Zero(obs.m, obs.n);
  for (std::size_t e = 0; e < obs.size(); ++e)
    out(obs.row[e], obs.col[e]) = obs.value[e];
  return out;
}

inline nucfw::Observations random_sparse(nucfw::Index m, nucfw::Index n,
                                         std::size_t count,
                                         std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::size_t> cells(static_cast<std::size_t>(m * n));
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i;
  for (std::size_t i = cells.size(); i > 1; --i)
    std::swap(cells[i - 1], cells[rng() % i]);
  std::vector<nucfw::Triplet> entries;
  count = std::min(count, cells.size());
  for (std::size_t k = 0; k < count; ++k) {
    entries.push_back({static_cast<int>(cells[k] / n),
                       static_cast<int>(cells[k] % n), gauss(rng)});
  }
  return nucfw::make_observations(m, n, std::move(entries));
}

}  // namespace oracles
