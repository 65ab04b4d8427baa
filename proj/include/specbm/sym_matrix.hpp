#pragma once

#include <cstdint>
#include <vector>

namespace specbm {

// Symmetric real matrix. Only the lower triangle (i >= j) is stored, either
// densely packed row-major or as CSR; the logical matrix is the symmetric
// completion. Instances are immutable after construction aside from the
// dense set/add builders, so they are safe to share across threads.
class SymMatrix {
 public:
  SymMatrix() = default;

  // Dense zero matrix of dimension n.
  static SymMatrix dense(int n);

  // Sparse matrix from lower-triangle CSR arrays (col indices sorted and
  // unique within each row, col <= row everywhere).
  static SymMatrix sparse_lower(int n, std::vector<int> rowptr,
                                std::vector<int> col, std::vector<double> val);

  int n() const { return n_; }
  bool is_dense() const { return dense_; }

  // Logical element access (any i, j).
  double at(int i, int j) const;

  // Dense-only mutation while building.
  void set(int i, int j, double v);
  void add(int i, int j, double v);

  // y = M x. Row-parallel over outputs; each y_i is accumulated serially in
  // a fixed order, so the result is bit-identical at any thread count.
  void symv(const double* x, double* y) const;
  // Single-threaded reference used by tests and benchmarks.
  void symv_serial(const double* x, double* y) const;

  std::vector<double> symv(const std::vector<double>& x) const;

  // Row sums (vertex degrees when M is an adjacency matrix).
  std::vector<double> row_sums() const;

  // x' M x with serial accumulation.
  double quad(const std::vector<double>& x) const;

  // Expand into a full row-major n*n buffer (solver scratch).
  void unpack_full(std::vector<double>& full) const;

  // Number of stored lower-triangle entries.
  std::int64_t stored() const;

  // Sparse internals for efficient iteration (empty when dense).
  const std::vector<int>& lower_rowptr() const { return rowptr_; }
  const std::vector<int>& lower_col() const { return col_; }
  const std::vector<double>& lower_val() const { return val_; }

 private:
  int n_ = 0;
  bool dense_ = true;
  std::vector<double> tri_;  // packed lower triangle, idx = i*(i+1)/2 + j

  // Sparse: lower-triangle CSR plus a mirror index of the strict upper part
  // (for output row i, the entries (k, i) with k > i), both fixed-order.
  std::vector<int> rowptr_, col_;
  std::vector<double> val_;
  std::vector<int> up_ptr_, up_row_, up_idx_;

  std::size_t tidx(int i, int j) const {
    return static_cast<std::size_t>(i) * (i + 1) / 2 + j;
  }
  void build_mirror();
};

}  // namespace specbm
