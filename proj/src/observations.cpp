#include "nucfw/observations.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nucfw {

Observations make_observations(Index m, Index n,
                               std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= m || t.col < 0 || t.col >= n)
      throw std::invalid_argument(
          "make_observations: entry (" + std::to_string(t.row) + ", " +
          std::to_string(t.col) + ") out of bounds");
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (std::size_t e = 1; e < entries.size(); ++e) {
    if (entries[e].row == entries[e - 1].row &&
        entries[e].col == entries[e - 1].col)
      throw std::invalid_argument(
          "make_observations: duplicate entry (" +
          std::to_string(entries[e].row) + ", " +
          std::to_string(entries[e].col) + ")");
  }

  Observations out;
  out.m = m;
  out.n = n;
  const std::size_t nnz = entries.size();
  out.row.resize(nnz);
  out.col.resize(nnz);
  out.value.resize(nnz);
  for (std::size_t e = 0; e < nnz; ++e) {
    out.row[e] = entries[e].row;
    out.col[e] = entries[e].col;
    out.value[e] = entries[e].value;
  }

  out.row_start.assign(static_cast<std::size_t>(m) + 1, 0);
  for (std::size_t e = 0; e < nnz; ++e)
    ++out.row_start[static_cast<std::size_t>(out.row[e]) + 1];
  for (std::size_t i = 1; i <= static_cast<std::size_t>(m); ++i)
    out.row_start[i] += out.row_start[i - 1];

  out.col_order.resize(nnz);
  std::iota(out.col_order.begin(), out.col_order.end(), 0);
  std::sort(out.col_order.begin(), out.col_order.end(),
            [&out](int a, int b) {
              return out.col[a] != out.col[b] ? out.col[a] < out.col[b]
                                              : out.row[a] < out.row[b];
            });
  out.col_start.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t e = 0; e < nnz; ++e)
    ++out.col_start[static_cast<std::size_t>(out.col[e]) + 1];
  for (std::size_t j = 1; j <= static_cast<std::size_t>(n); ++j)
    out.col_start[j] += out.col_start[j - 1];

  return out;
}

}  // namespace nucfw
