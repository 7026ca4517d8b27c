#pragma once

#include <functional>

#include "surfstokes/common.hpp"

namespace surfstokes {

// Element-block scatter with a canonical merge: the sparsity pattern and the
// slot->nonzero mapping are fixed up front; per-assembly the element blocks
// are computed chunk-parallel and accumulated serially in ascending element
// order, so the result is bit-identical for every thread count.
class ScatterPlan {
 public:
  // row_dofs / col_dofs are flat: dof of (elem, i) at [elem * block_rows + i]
  static ScatterPlan build(int n_rows, int n_cols, int n_elems, int block_rows, int block_cols,
                           const std::vector<int>& row_dofs, const std::vector<int>& col_dofs);

  // fill(elem, blocks): blocks[m] is a row-major block_rows x block_cols
  // slab; one sweep produces all `count` matrices sharing the pattern.
  std::vector<SpMat> assemble_many(
      int count, const std::function<void(int, std::vector<MatX>&)>& fill,
      Exec exec = Exec::Parallel) const;

  SpMat assemble(const std::function<void(int, MatX&)>& fill, Exec exec = Exec::Parallel) const;

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  Index nnz() const { return static_cast<Index>(inner_rows_.size()); }

 private:
  int n_rows_ = 0, n_cols_ = 0, n_elems_ = 0, block_rows_ = 0, block_cols_ = 0;
  std::vector<int> nnz_per_col_;
  std::vector<int> inner_rows_;     // row indices in column-major order
  std::vector<Index> slot_to_nz_;   // element slot -> nonzero ordinal
  SpMat from_values(const std::vector<double>& values) const;
};

// Deterministic per-element vector accumulation (ascending element order).
VecX assemble_vector(int n, int n_elems, int block_size, const std::vector<int>& dofs,
                     const std::function<void(int, VecX&)>& fill, Exec exec = Exec::Parallel);

namespace reference {

// Straightforward serial triplet assembly, kept as the reference
// implementation for tests and benchmarks.
SpMat assemble(int n_rows, int n_cols, int n_elems, int block_rows, int block_cols,
               const std::vector<int>& row_dofs, const std::vector<int>& col_dofs,
               const std::function<void(int, MatX&)>& fill);

}  // namespace reference

}  // namespace surfstokes
