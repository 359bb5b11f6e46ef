#pragma once

#include "ruthkit/scalars.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace ruthkit {

using SpMat = Eigen::SparseMatrix<Q>;
/// Sparse vector as (index, value) pairs sorted by index, no explicit zeros.
using SpVec = std::vector<std::pair<int, Q>>;

SpMat sparse_from_dense(const MatQ& m);
MatQ dense(const SpMat& m);
SpMat identity_sparse(int n);
/// Drops explicit zeros.
void prune(SpMat& m);
bool is_zero(const SpMat& m);
bool equal(const SpMat& a, const SpMat& b);
SpVec column(const SpMat& m, int j);
SpVec apply(const SpMat& m, const SpVec& v);
VecQ to_dense(const SpVec& v, int n);
SpVec to_sparse(const VecQ& v);
SpMat from_columns(int rows, const std::vector<SpVec>& cols);
/// Row-block view: rows [r0, r0+nr) and columns [c0, c0+nc).
SpMat block(const SpMat& m, int r0, int c0, int nr, int nc);

/// Exact row echelon form over the rationals.
/// Pivot choice per column: the shortest candidate row, ties broken by original row order.
class Echelon {
 public:
  Echelon(const SpMat& a, const std::vector<SpVec>& extra_columns = {});
  int rank() const { return static_cast<int>(pivot_cols_.size()); }
  /// Rank counting only the original columns.
  int rank_main() const;
  const std::vector<int>& pivot_columns() const { return pivot_cols_; }
  const std::vector<SpVec>& rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int cols_ = 0;
  int main_cols_ = 0;
  std::vector<SpVec> rows_;      // pivot rows, leading entry 1, in pivot-column order
  std::vector<int> pivot_cols_;  // increasing
};

int rank(const SpMat& a);

struct SolveResult {
  bool solvable = false;
  SpVec x;                 // solution with free variables set to zero
  int rank = 0;            // rank of A
  int rank_augmented = 0;  // rank of [A | b]
};
/// Solves A x = b exactly; back-substitution with all free variables zero.
SolveResult solve(const SpMat& a, const SpVec& b);

/// Basis of ker A from the reduced echelon form, one vector per free column.
std::vector<SpVec> nullspace(const SpMat& a);

/// Reduced row echelon basis of the span of the given vectors.
std::vector<SpVec> row_reduce(const std::vector<SpVec>& vectors, int dim);

}  // namespace ruthkit
