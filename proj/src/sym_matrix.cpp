#include "specbm/sym_matrix.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specbm {

SymMatrix SymMatrix::dense(int n) {
  SymMatrix m;
  m.n_ = n;
  m.dense_ = true;
  m.tri_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
  return m;
}

SymMatrix SymMatrix::sparse_lower(int n, std::vector<int> rowptr,
                                  std::vector<int> col,
                                  std::vector<double> val) {
  SymMatrix m;
  m.n_ = n;
  m.dense_ = false;
  m.rowptr_ = std::move(rowptr);
  m.col_ = std::move(col);
  m.val_ = std::move(val);
  if (static_cast<int>(m.rowptr_.size()) != n + 1)
    throw std::invalid_argument("sparse_lower: rowptr size must be n+1");
  m.build_mirror();
  return m;
}

void SymMatrix::build_mirror() {
  // Count strict-upper mirror entries per logical row i: stored (k, i), k > i.
  up_ptr_.assign(n_ + 1, 0);
  for (int k = 0; k < n_; ++k)
    for (int e = rowptr_[k]; e < rowptr_[k + 1]; ++e)
      if (col_[e] < k) ++up_ptr_[col_[e] + 1];
  for (int i = 0; i < n_; ++i) up_ptr_[i + 1] += up_ptr_[i];
  up_row_.resize(up_ptr_[n_]);
  up_idx_.resize(up_ptr_[n_]);
  std::vector<int> cursor(up_ptr_.begin(), up_ptr_.end() - 1);
  // Row-major sweep keeps each mirror list sorted by k.
  for (int k = 0; k < n_; ++k)
    for (int e = rowptr_[k]; e < rowptr_[k + 1]; ++e)
      if (col_[e] < k) {
        int& c = cursor[col_[e]];
        up_row_[c] = k;
        up_idx_[c] = e;
        ++c;
      }
}

double SymMatrix::at(int i, int j) const {
  if (i < j) std::swap(i, j);
  if (dense_) return tri_[tidx(i, j)];
  const int* b = col_.data() + rowptr_[i];
  const int* e = col_.data() + rowptr_[i + 1];
  const int* p = std::lower_bound(b, e, j);
  if (p != e && *p == j) return val_[p - col_.data()];
  return 0.0;
}

void SymMatrix::set(int i, int j, double v) {
  if (!dense_) throw std::logic_error("set: dense storage only");
  if (i < j) std::swap(i, j);
  tri_[tidx(i, j)] = v;
}

void SymMatrix::add(int i, int j, double v) {
  if (!dense_) throw std::logic_error("add: dense storage only");
  if (i < j) std::swap(i, j);
  tri_[tidx(i, j)] += v;
}

void SymMatrix::symv_serial(const double* x, double* y) const {
  if (dense_) {
    for (int i = 0; i < n_; ++i) {
      const double* row = tri_.data() + tidx(i, 0);
      double acc = 0.0;
      for (int j = 0; j <= i; ++j) acc += row[j] * x[j];
      // Strict upper part: stored at (k, i) for k > i.
      for (int k = i + 1; k < n_; ++k) acc += tri_[tidx(k, i)] * x[k];
      y[i] = acc;
    }
    return;
  }
  for (int i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (int e = rowptr_[i]; e < rowptr_[i + 1]; ++e) acc += val_[e] * x[col_[e]];
    for (int m = up_ptr_[i]; m < up_ptr_[i + 1]; ++m)
      acc += val_[up_idx_[m]] * x[up_row_[m]];
    y[i] = acc;
  }
}

void SymMatrix::symv(const double* x, double* y) const {
  // Each output element is owned by exactly one iteration and accumulated in
  // the same order as the serial kernel, so parallel and serial runs agree
  // bit-for-bit.
  if (dense_) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_; ++i) {
      const double* row = tri_.data() + tidx(i, 0);
      double acc = 0.0;
      for (int j = 0; j <= i; ++j) acc += row[j] * x[j];
      for (int k = i + 1; k < n_; ++k) acc += tri_[tidx(k, i)] * x[k];
      y[i] = acc;
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (int e = rowptr_[i]; e < rowptr_[i + 1]; ++e) acc += val_[e] * x[col_[e]];
    for (int m = up_ptr_[i]; m < up_ptr_[i + 1]; ++m)
      acc += val_[up_idx_[m]] * x[up_row_[m]];
    y[i] = acc;
  }
}

std::vector<double> SymMatrix::symv(const std::vector<double>& x) const {
  std::vector<double> y(n_);
  symv(x.data(), y.data());
  return y;
}

std::vector<double> SymMatrix::row_sums() const {
  std::vector<double> ones(n_, 1.0);
  return symv(ones);
}

double SymMatrix::quad(const std::vector<double>& x) const {
  std::vector<double> y = symv(x);
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += x[i] * y[i];
  return s;
}

void SymMatrix::unpack_full(std::vector<double>& full) const {
  full.assign(static_cast<std::size_t>(n_) * n_, 0.0);
  if (dense_) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_; ++i) {
      const double* row = tri_.data() + tidx(i, 0);
      for (int j = 0; j <= i; ++j) {
        full[static_cast<std::size_t>(i) * n_ + j] = row[j];
        full[static_cast<std::size_t>(j) * n_ + i] = row[j];
      }
    }
    return;
  }
  for (int i = 0; i < n_; ++i)
    for (int e = rowptr_[i]; e < rowptr_[i + 1]; ++e) {
      int j = col_[e];
      full[static_cast<std::size_t>(i) * n_ + j] = val_[e];
      full[static_cast<std::size_t>(j) * n_ + i] = val_[e];
    }
}

std::int64_t SymMatrix::stored() const {
  return dense_ ? static_cast<std::int64_t>(tri_.size())
                : static_cast<std::int64_t>(val_.size());
}

}  // namespace specbm
