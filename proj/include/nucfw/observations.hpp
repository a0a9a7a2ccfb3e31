#pragma once

#include <cstddef>
#include <vector>

#include "nucfw/types.hpp"

namespace nucfw {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Sparse (row, col, value) triplets over an m x n grid. Entries are stored
/// sorted by (row, col) with no duplicates, and a column-grouped permutation
/// is kept alongside so the matrix can be applied from either side without
/// densifying. Immutable after construction.
struct Observations {
  Index m = 0;
  Index n = 0;
  std::vector<int> row;       // entry-parallel, sorted by (row, col)
  std::vector<int> col;
  std::vector<double> value;
  std::vector<std::size_t> row_start;  // m + 1 offsets into the entry arrays
  std::vector<int> col_order;          // entry ids sorted by (col, row)
  std::vector<std::size_t> col_start;  // n + 1 offsets into col_order

  std::size_t size() const { return value.size(); }
};

/// Validates bounds and duplicates, sorts, and builds both groupings.
/// Throws std::invalid_argument on out-of-bounds or duplicate (row, col).
Observations make_observations(Index m, Index n, std::vector<Triplet> entries);

/// Same sparsity pattern as the owning Observations; value[e] holds
/// X_ij - Y_ij and iterate_value[e] holds X_ij for the entry's (i, j).
/// Must not outlive the pattern it points at.
struct SparseResidual {
  const Observations* pattern = nullptr;
  std::vector<double> value;
  std::vector<double> iterate_value;
};

}  // namespace nucfw
