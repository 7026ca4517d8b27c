#include "surfstokes/assembly.hpp"

#include <algorithm>
#include <numeric>

namespace surfstokes {

ScatterPlan ScatterPlan::build(int n_rows, int n_cols, int n_elems, int block_rows, int block_cols,
                               const std::vector<int>& row_dofs, const std::vector<int>& col_dofs) {
  require(static_cast<Index>(n_elems) * block_rows == static_cast<Index>(row_dofs.size()),
          "ScatterPlan: row dof list size mismatch");
  require(static_cast<Index>(n_elems) * block_cols == static_cast<Index>(col_dofs.size()),
          "ScatterPlan: col dof list size mismatch");
  ScatterPlan plan;
  plan.n_rows_ = n_rows;
  plan.n_cols_ = n_cols;
  plan.n_elems_ = n_elems;
  plan.block_rows_ = block_rows;
  plan.block_cols_ = block_cols;

  const Index n_slots = static_cast<Index>(n_elems) * block_rows * block_cols;
  std::vector<Index> order(n_slots);
  std::iota(order.begin(), order.end(), Index(0));
  auto col_of = [&](Index slot) {
    const Index e = slot / (block_rows * block_cols);
    const int j = static_cast<int>(slot % block_cols);
    return col_dofs[e * block_cols + j];
  };
  auto row_of = [&](Index slot) {
    const Index e = slot / (block_rows * block_cols);
    const int i = static_cast<int>((slot / block_cols) % block_rows);
    return row_dofs[e * block_rows + i];
  };
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const int ca = col_of(a), cb = col_of(b);
    if (ca != cb) return ca < cb;
    const int ra = row_of(a), rb = row_of(b);
    if (ra != rb) return ra < rb;
    return a < b;  // ascending element order within an entry
  });

  plan.slot_to_nz_.resize(n_slots);
  plan.nnz_per_col_.assign(n_cols, 0);
  Index nnz = -1;
  int prev_col = -1, prev_row = -1;
  for (Index k = 0; k < n_slots; ++k) {
    const Index slot = order[k];
    const int c = col_of(slot), r = row_of(slot);
    if (c != prev_col || r != prev_row) {
      ++nnz;
      plan.inner_rows_.push_back(r);
      ++plan.nnz_per_col_[c];
      prev_col = c;
      prev_row = r;
    }
    plan.slot_to_nz_[slot] = nnz;
  }
  return plan;
}

SpMat ScatterPlan::from_values(const std::vector<double>& values) const {
  SpMat A(n_rows_, n_cols_);
  A.reserve(Eigen::Map<const Eigen::VectorXi>(nnz_per_col_.data(), n_cols_));
  Index p = 0;
  for (int c = 0; c < n_cols_; ++c)
    for (int k = 0; k < nnz_per_col_[c]; ++k, ++p) A.insert(inner_rows_[p], c) = values[p];
  A.makeCompressed();
  return A;
}

std::vector<SpMat> ScatterPlan::assemble_many(
    int count, const std::function<void(int, std::vector<MatX>&)>& fill, Exec exec) const {
  const Index block = static_cast<Index>(block_rows_) * block_cols_;
  std::vector<std::vector<double>> values(count, std::vector<double>(inner_rows_.size(), 0.0));

  const int chunk = 256;
  const int n_chunks = (n_elems_ + chunk - 1) / chunk;
  std::vector<std::vector<MatX>> buf;  // per element in chunk, per matrix
  buf.resize(chunk, std::vector<MatX>(count));

  for (int ck = 0; ck < n_chunks; ++ck) {
    const int e0 = ck * chunk;
    const int e1 = std::min(n_elems_, e0 + chunk);
    parallel_for(
        e1 - e0,
        [&](Index i) {
          auto& blocks = buf[i];
          for (int m = 0; m < count; ++m) blocks[m].setZero(block_rows_, block_cols_);
          fill(e0 + static_cast<int>(i), blocks);
        },
        exec);
    // canonical serial scatter
    for (int e = e0; e < e1; ++e) {
      const Index base = static_cast<Index>(e) * block;
      for (int m = 0; m < count; ++m) {
        const MatX& blk = buf[e - e0][m];
        for (int i = 0; i < block_rows_; ++i)
          for (int j = 0; j < block_cols_; ++j)
            values[m][slot_to_nz_[base + i * block_cols_ + j]] += blk(i, j);
      }
    }
  }
  std::vector<SpMat> out;
  out.reserve(count);
  for (int m = 0; m < count; ++m) out.push_back(from_values(values[m]));
  return out;
}

SpMat ScatterPlan::assemble(const std::function<void(int, MatX&)>& fill, Exec exec) const {
  auto many = assemble_many(
      1, [&](int e, std::vector<MatX>& blocks) { fill(e, blocks[0]); }, exec);
  return std::move(many[0]);
}

VecX assemble_vector(int n, int n_elems, int block_size, const std::vector<int>& dofs,
                     const std::function<void(int, VecX&)>& fill, Exec exec) {
  std::vector<VecX> blocks(n_elems);
  parallel_for(
      n_elems,
      [&](Index e) {
        blocks[e].setZero(block_size);
        fill(static_cast<int>(e), blocks[e]);
      },
      exec);
  VecX out = VecX::Zero(n);
  for (int e = 0; e < n_elems; ++e)
    for (int i = 0; i < block_size; ++i) out(dofs[e * block_size + i]) += blocks[e](i);
  return out;
}

namespace reference {

SpMat assemble(int n_rows, int n_cols, int n_elems, int block_rows, int block_cols,
               const std::vector<int>& row_dofs, const std::vector<int>& col_dofs,
               const std::function<void(int, MatX&)>& fill) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(n_elems) * block_rows * block_cols);
  MatX blk;
  for (int e = 0; e < n_elems; ++e) {
    blk.setZero(block_rows, block_cols);
    fill(e, blk);
    for (int i = 0; i < block_rows; ++i)
      for (int j = 0; j < block_cols; ++j)
        trips.emplace_back(row_dofs[e * block_rows + i], col_dofs[e * block_cols + j], blk(i, j));
  }
  SpMat A(n_rows, n_cols);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

}  // namespace reference

}  // namespace surfstokes
