#pragma once

// Operators on a direct sum of discretized continuous DOFs, stored as a grid of
// blocks. Each block is tagged zero, scaled identity, diagonal (a multiplication
// operator) or dense, and products short-circuit on the cheap kinds.
//
// All dense matrices are weight-symmetrized (sqrt(w) K sqrt(w)), so operator
// products, adjoints and traces are plain matrix operations.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace biphoton {

using cd = std::complex<double>;
using CMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

class Block {
 public:
  enum class Kind { Zero, Identity, Diagonal, Dense };

  Block() = default;
  static Block zero(std::size_t rows, std::size_t cols);
  static Block identity(std::size_t n, cd scale = 1.0);
  static Block diagonal(CVector d);
  static Block dense(CMatrix m);

  Kind kind() const { return kind_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  cd scale() const { return scale_; }
  const CVector& diag() const { return diag_; }
  const CMatrix& matrix() const { return dense_; }

  CMatrix to_dense() const;
  Block adjoint() const;
  Block conjugate() const;
  Block transpose() const;
  Block scaled(cd s) const;
  cd trace() const;
  double hs_norm2() const;
  /// Restricts rows and columns by 0/1 masks; the block keeps its shape.
  Block masked(const RVector& row_mask, const RVector& col_mask) const;

 private:
  Kind kind_ = Kind::Zero;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  cd scale_ = 0.0;
  CVector diag_;
  CMatrix dense_;
};

Block operator*(const Block& a, const Block& b);
Block operator+(const Block& a, const Block& b);
Block operator-(const Block& a, const Block& b);
/// Tr(A B) without forming the product.
cd trace_product(const Block& a, const Block& b);

class BlockOperator {
 public:
  BlockOperator() = default;
  BlockOperator(std::vector<std::size_t> row_dims, std::vector<std::size_t> col_dims);

  static BlockOperator identity(const std::vector<std::size_t>& dims);
  /// Splits a dense matrix into blocks; blocks that are exactly zero are tagged as such.
  static BlockOperator from_dense(const CMatrix& m, const std::vector<std::size_t>& row_dims,
                                  const std::vector<std::size_t>& col_dims);

  std::size_t block_rows() const { return row_dims_.size(); }
  std::size_t block_cols() const { return col_dims_.size(); }
  const std::vector<std::size_t>& row_dims() const { return row_dims_; }
  const std::vector<std::size_t>& col_dims() const { return col_dims_; }
  std::size_t total_rows() const;
  std::size_t total_cols() const;

  const Block& at(std::size_t i, std::size_t j) const { return blocks_[i * col_dims_.size() + j]; }
  void set(std::size_t i, std::size_t j, Block b);

  BlockOperator adjoint() const;
  BlockOperator scaled(cd s) const;
  cd trace() const;
  double hs_norm2() const;
  CMatrix to_dense() const;
  CVector apply(const CVector& x) const;
  /// Keeps the listed block rows/columns (in order).
  BlockOperator select(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
  std::size_t dense_block_count() const;

 private:
  std::vector<std::size_t> row_dims_;
  std::vector<std::size_t> col_dims_;
  std::vector<Block> blocks_;
};

BlockOperator operator*(const BlockOperator& a, const BlockOperator& b);
BlockOperator operator+(const BlockOperator& a, const BlockOperator& b);
BlockOperator operator-(const BlockOperator& a, const BlockOperator& b);
cd trace_product(const BlockOperator& a, const BlockOperator& b);

}  // namespace biphoton
