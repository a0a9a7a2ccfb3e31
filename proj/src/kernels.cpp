#include "nucfw/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace nucfw::kernels {

Exec default_exec() {
  static const Exec exec = [] {
    const char* env = std::getenv("NUCFW_SERIAL");
    if (env != nullptr && std::strcmp(env, "1") == 0) return Exec::Serial;
    return Exec::Parallel;
  }();
  return exec;
}

namespace {

// Fixed-size chunks summed in chunk order: the accumulation order does not
// depend on the thread count, so Serial and Parallel agree bitwise.
template <typename ChunkSum>
double chunked_sum(std::size_t count, Exec exec, ChunkSum&& chunk_sum) {
  if (count == 0) return 0.0;
  const std::ptrdiff_t nchunks =
      static_cast<std::ptrdiff_t>((count + kChunk - 1) / kChunk);
  std::vector<double> partial(static_cast<std::size_t>(nchunks));
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nchunks; ++c) {
      const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
      const std::size_t end = std::min(begin + kChunk, count);
      partial[static_cast<std::size_t>(c)] = chunk_sum(begin, end);
    }
  } else {
    for (std::ptrdiff_t c = 0; c < nchunks; ++c) {
      const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
      const std::size_t end = std::min(begin + kChunk, count);
      partial[static_cast<std::size_t>(c)] = chunk_sum(begin, end);
    }
  }
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

template <typename Body>
void element_map(std::size_t count, Exec exec, Body&& body) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(count);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t e = 0; e < n; ++e) body(static_cast<std::size_t>(e));
  } else {
    for (std::ptrdiff_t e = 0; e < n; ++e) body(static_cast<std::size_t>(e));
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b, Exec exec) {
  if (a.size() != b.size())
    throw std::invalid_argument("kernels::dot: length mismatch");
  return chunked_sum(a.size(), exec, [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += a[i] * b[i];
    return acc;
  });
}

double sum_squares(std::span<const double> a, Exec exec) {
  return chunked_sum(a.size(), exec, [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += a[i] * a[i];
    return acc;
  });
}

void reconstruct(const ThinSvd& x, const Observations& pattern,
                 std::span<double> out, Exec exec) {
  if (out.size() != pattern.size())
    throw std::invalid_argument("kernels::reconstruct: output size mismatch");
  if (x.m != pattern.m || x.n != pattern.n)
    throw std::invalid_argument("kernels::reconstruct: shape mismatch");
  const Index r = x.rank();
  if (r == 0) {
    element_map(out.size(), exec, [&](std::size_t e) { out[e] = 0.0; });
    return;
  }
  // Row-major copies keep the per-entry dot products contiguous.
  const RowMajorMatrix us = x.U * x.S.asDiagonal();
  const RowMajorMatrix vr = x.V;
  element_map(out.size(), exec, [&](std::size_t e) {
    out[e] = us.row(pattern.row[e]).dot(vr.row(pattern.col[e]));
  });
}

void apply_right(const Observations& pattern, std::span<const double> gvals,
                 const Vector& v, Vector& y, Exec exec) {
  if (gvals.size() != pattern.size())
    throw std::invalid_argument("kernels::apply_right: value size mismatch");
  if (v.size() != pattern.n)
    throw std::invalid_argument("kernels::apply_right: vector length mismatch");
  y.resize(pattern.m);
  element_map(static_cast<std::size_t>(pattern.m), exec, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t e = pattern.row_start[i]; e < pattern.row_start[i + 1];
         ++e)
      acc += gvals[e] * v(pattern.col[e]);
    y(static_cast<Index>(i)) = acc;
  });
}

void apply_left(const Observations& pattern, std::span<const double> gvals,
                const Vector& u, Vector& y, Exec exec) {
  if (gvals.size() != pattern.size())
    throw std::invalid_argument("kernels::apply_left: value size mismatch");
  if (u.size() != pattern.m)
    throw std::invalid_argument("kernels::apply_left: vector length mismatch");
  y.resize(pattern.n);
  element_map(static_cast<std::size_t>(pattern.n), exec, [&](std::size_t j) {
    double acc = 0.0;
    for (std::size_t k = pattern.col_start[j]; k < pattern.col_start[j + 1];
         ++k) {
      const int e = pattern.col_order[k];
      acc += gvals[static_cast<std::size_t>(e)] * u(pattern.row[e]);
    }
    y(static_cast<Index>(j)) = acc;
  });
}

void combine_rank_one(const Observations& pattern, const RankOneOuter& atom,
                      double atom_coef, std::span<const double> iterate,
                      double iterate_coef, std::span<double> out, Exec exec) {
  if (iterate.size() != pattern.size() || out.size() != pattern.size())
    throw std::invalid_argument("kernels::combine_rank_one: size mismatch");
  const double c = atom_coef * atom.scale;
  element_map(out.size(), exec, [&](std::size_t e) {
    out[e] = c * atom.u(pattern.row[e]) * atom.v(pattern.col[e]) +
             iterate_coef * iterate[e];
  });
}

double rank_one_inner(const Observations& pattern, std::span<const double> w,
                      const Vector& u, const Vector& v, Exec exec) {
  if (w.size() != pattern.size())
    throw std::invalid_argument("kernels::rank_one_inner: size mismatch");
  return chunked_sum(w.size(), exec, [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t e = begin; e < end; ++e)
      acc += w[e] * u(pattern.row[e]) * v(pattern.col[e]);
    return acc;
  });
}

double blend_half_sq(const Observations& pattern,
                     std::span<const double> iterate, double a,
                     const Vector& u, const Vector& v, double b, Exec exec) {
  if (iterate.size() != pattern.size())
    throw std::invalid_argument("kernels::blend_half_sq: size mismatch");
  const double acc = chunked_sum(
      iterate.size(), exec, [&](std::size_t begin, std::size_t end) {
        double local = 0.0;
        for (std::size_t e = begin; e < end; ++e) {
          const double d = a * iterate[e] +
                           b * u(pattern.row[e]) * v(pattern.col[e]) -
                           pattern.value[e];
          local += d * d;
        }
        return local;
      });
  return 0.5 * acc;
}

}  // namespace nucfw::kernels
