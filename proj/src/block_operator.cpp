#include "biphoton/block_operator.hpp"

#include <numeric>
#include <span>
#include <string>

#include "biphoton/errors.hpp"
#include "biphoton/kernels.hpp"

namespace biphoton {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ShapeError(what);
}

CMatrix dense_product(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows(), b.cols());
  kernels::cgemm(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.cols()),
                 static_cast<std::size_t>(a.cols()), a.data(), b.data(), c.data());
  return c;
}

}  // namespace

Block Block::zero(std::size_t rows, std::size_t cols) {
  Block b;
  b.kind_ = Kind::Zero;
  b.rows_ = rows;
  b.cols_ = cols;
  return b;
}

Block Block::identity(std::size_t n, cd scale) {
  if (scale == cd{}) return zero(n, n);
  Block b;
  b.kind_ = Kind::Identity;
  b.rows_ = b.cols_ = n;
  b.scale_ = scale;
  return b;
}

Block Block::diagonal(CVector d) {
  Block b;
  b.rows_ = b.cols_ = static_cast<std::size_t>(d.size());
  if ((d.array() == cd{}).all()) return zero(b.rows_, b.cols_);
  b.kind_ = Kind::Diagonal;
  b.diag_ = std::move(d);
  return b;
}

Block Block::dense(CMatrix m) {
  Block b;
  b.kind_ = Kind::Dense;
  b.rows_ = static_cast<std::size_t>(m.rows());
  b.cols_ = static_cast<std::size_t>(m.cols());
  b.dense_ = std::move(m);
  return b;
}

CMatrix Block::to_dense() const {
  switch (kind_) {
    case Kind::Zero:
      return CMatrix::Zero(rows_, cols_);
    case Kind::Identity:
      return CMatrix::Identity(rows_, cols_) * scale_;
    case Kind::Diagonal:
      return diag_.asDiagonal().toDenseMatrix();
    case Kind::Dense:
      return dense_;
  }
  return {};
}

Block Block::adjoint() const {
  switch (kind_) {
    case Kind::Zero:
      return zero(cols_, rows_);
    case Kind::Identity:
      return identity(rows_, std::conj(scale_));
    case Kind::Diagonal:
      return diagonal(diag_.conjugate());
    case Kind::Dense:
      return dense(dense_.adjoint());
  }
  return {};
}

Block Block::conjugate() const {
  switch (kind_) {
    case Kind::Zero:
      return *this;
    case Kind::Identity:
      return identity(rows_, std::conj(scale_));
    case Kind::Diagonal:
      return diagonal(diag_.conjugate());
    case Kind::Dense:
      return dense(dense_.conjugate());
  }
  return {};
}

Block Block::transpose() const {
  switch (kind_) {
    case Kind::Zero:
      return zero(cols_, rows_);
    case Kind::Identity:
    case Kind::Diagonal:
      return *this;
    case Kind::Dense:
      return dense(dense_.transpose());
  }
  return {};
}

Block Block::scaled(cd s) const {
  if (s == cd{}) return zero(rows_, cols_);
  switch (kind_) {
    case Kind::Zero:
      return *this;
    case Kind::Identity:
      return identity(rows_, scale_ * s);
    case Kind::Diagonal:
      return diagonal(diag_ * s);
    case Kind::Dense:
      return dense(dense_ * s);
  }
  return {};
}

cd Block::trace() const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Identity:
      return scale_ * static_cast<double>(rows_);
    case Kind::Diagonal:
      return diag_.sum();
    case Kind::Dense:
      return dense_.trace();
  }
  return 0.0;
}

double Block::hs_norm2() const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Identity:
      return std::norm(scale_) * static_cast<double>(rows_);
    case Kind::Diagonal:
      return kernels::weighted_norm2({diag_.data(), static_cast<std::size_t>(diag_.size())}, {});
    case Kind::Dense:
      return kernels::weighted_norm2({dense_.data(), static_cast<std::size_t>(dense_.size())}, {});
  }
  return 0.0;
}

Block Block::masked(const RVector& row_mask, const RVector& col_mask) const {
  require(static_cast<std::size_t>(row_mask.size()) == rows_ &&
              static_cast<std::size_t>(col_mask.size()) == cols_,
          "mask size does not match block");
  switch (kind_) {
    case Kind::Zero:
      return *this;
    case Kind::Identity: {
      CVector d = (row_mask.array() * col_mask.array()).cast<cd>() * scale_;
      return diagonal(std::move(d));
    }
    case Kind::Diagonal: {
      CVector d = diag_.array() * (row_mask.array() * col_mask.array()).cast<cd>();
      return diagonal(std::move(d));
    }
    case Kind::Dense: {
      CMatrix m = row_mask.cast<cd>().asDiagonal() * dense_ * col_mask.cast<cd>().asDiagonal();
      return dense(std::move(m));
    }
  }
  return {};
}

Block operator*(const Block& a, const Block& b) {
  require(a.cols() == b.rows(), "block product: inner dimension mismatch");
  using K = Block::Kind;
  if (a.is_zero() || b.is_zero()) return Block::zero(a.rows(), b.cols());
  if (a.kind() == K::Identity) return b.scaled(a.scale());
  if (b.kind() == K::Identity) return a.scaled(b.scale());
  if (a.kind() == K::Diagonal && b.kind() == K::Diagonal) {
    return Block::diagonal(a.diag().cwiseProduct(b.diag()));
  }
  if (a.kind() == K::Diagonal) return Block::dense(a.diag().asDiagonal() * b.matrix());
  if (b.kind() == K::Diagonal) return Block::dense(a.matrix() * b.diag().asDiagonal());
  return Block::dense(dense_product(a.matrix(), b.matrix()));
}

Block operator+(const Block& a, const Block& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "block sum: shape mismatch");
  using K = Block::Kind;
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.kind() == K::Identity && b.kind() == K::Identity) {
    return Block::identity(a.rows(), a.scale() + b.scale());
  }
  if (a.kind() != K::Dense && b.kind() != K::Dense) {
    CVector da = a.kind() == K::Identity ? CVector::Constant(a.rows(), a.scale()) : a.diag();
    CVector db = b.kind() == K::Identity ? CVector::Constant(b.rows(), b.scale()) : b.diag();
    return Block::diagonal(da + db);
  }
  if (a.kind() == K::Dense && b.kind() == K::Dense) return Block::dense(a.matrix() + b.matrix());
  const Block& d = a.kind() == K::Dense ? a : b;
  const Block& o = a.kind() == K::Dense ? b : a;
  CMatrix m = d.matrix();
  if (o.kind() == K::Identity) {
    m.diagonal().array() += o.scale();
  } else {
    m.diagonal() += o.diag();
  }
  return Block::dense(std::move(m));
}

Block operator-(const Block& a, const Block& b) { return a + b.scaled(-1.0); }

cd trace_product(const Block& a, const Block& b) {
  require(a.cols() == b.rows() && a.rows() == b.cols(), "trace product: shape mismatch");
  using K = Block::Kind;
  if (a.is_zero() || b.is_zero()) return 0.0;
  if (a.kind() == K::Dense && b.kind() == K::Dense) {
    // Tr(AB) = sum_pq A_pq B_qp = dotu(vec A, vec B^T)
    const CMatrix bt = b.matrix().transpose();
    return kernels::dotu({a.matrix().data(), static_cast<std::size_t>(a.matrix().size())},
                         {bt.data(), static_cast<std::size_t>(bt.size())});
  }
  return (a * b).trace();
}

BlockOperator::BlockOperator(std::vector<std::size_t> row_dims, std::vector<std::size_t> col_dims)
    : row_dims_(std::move(row_dims)), col_dims_(std::move(col_dims)) {
  blocks_.reserve(row_dims_.size() * col_dims_.size());
  for (std::size_t r : row_dims_) {
    for (std::size_t c : col_dims_) blocks_.push_back(Block::zero(r, c));
  }
}

BlockOperator BlockOperator::identity(const std::vector<std::size_t>& dims) {
  BlockOperator op(dims, dims);
  for (std::size_t i = 0; i < dims.size(); ++i) op.set(i, i, Block::identity(dims[i]));
  return op;
}

BlockOperator BlockOperator::from_dense(const CMatrix& m, const std::vector<std::size_t>& row_dims,
                                        const std::vector<std::size_t>& col_dims) {
  BlockOperator op(row_dims, col_dims);
  require(static_cast<std::size_t>(m.rows()) == op.total_rows() &&
              static_cast<std::size_t>(m.cols()) == op.total_cols(),
          "from_dense: size mismatch");
  std::size_t r0 = 0;
  for (std::size_t i = 0; i < row_dims.size(); ++i) {
    std::size_t c0 = 0;
    for (std::size_t j = 0; j < col_dims.size(); ++j) {
      CMatrix blk = m.block(r0, c0, row_dims[i], col_dims[j]);
      if (!(blk.array() == cd{}).all()) op.set(i, j, Block::dense(std::move(blk)));
      c0 += col_dims[j];
    }
    r0 += row_dims[i];
  }
  return op;
}

std::size_t BlockOperator::total_rows() const {
  return std::accumulate(row_dims_.begin(), row_dims_.end(), std::size_t{0});
}

std::size_t BlockOperator::total_cols() const {
  return std::accumulate(col_dims_.begin(), col_dims_.end(), std::size_t{0});
}

void BlockOperator::set(std::size_t i, std::size_t j, Block b) {
  require(i < row_dims_.size() && j < col_dims_.size(), "block index out of range");
  require(b.rows() == row_dims_[i] && b.cols() == col_dims_[j],
          "block shape does not match layout");
  blocks_[i * col_dims_.size() + j] = std::move(b);
}

BlockOperator BlockOperator::adjoint() const {
  BlockOperator out(col_dims_, row_dims_);
  for (std::size_t i = 0; i < row_dims_.size(); ++i) {
    for (std::size_t j = 0; j < col_dims_.size(); ++j) out.set(j, i, at(i, j).adjoint());
  }
  return out;
}

BlockOperator BlockOperator::scaled(cd s) const {
  BlockOperator out(row_dims_, col_dims_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) out.blocks_[k] = blocks_[k].scaled(s);
  return out;
}

cd BlockOperator::trace() const {
  require(row_dims_ == col_dims_, "trace of a non-square layout");
  cd t = 0.0;
  for (std::size_t i = 0; i < row_dims_.size(); ++i) t += at(i, i).trace();
  return t;
}

double BlockOperator::hs_norm2() const {
  double s = 0.0;
  for (const Block& b : blocks_) s += b.hs_norm2();
  return s;
}

CMatrix BlockOperator::to_dense() const {
  CMatrix m = CMatrix::Zero(total_rows(), total_cols());
  std::size_t r0 = 0;
  for (std::size_t i = 0; i < row_dims_.size(); ++i) {
    std::size_t c0 = 0;
    for (std::size_t j = 0; j < col_dims_.size(); ++j) {
      if (!at(i, j).is_zero()) m.block(r0, c0, row_dims_[i], col_dims_[j]) = at(i, j).to_dense();
      c0 += col_dims_[j];
    }
    r0 += row_dims_[i];
  }
  return m;
}

CVector BlockOperator::apply(const CVector& x) const {
  require(static_cast<std::size_t>(x.size()) == total_cols(), "apply: vector size mismatch");
  CVector y = CVector::Zero(total_rows());
  std::size_t r0 = 0;
  for (std::size_t i = 0; i < row_dims_.size(); ++i) {
    std::size_t c0 = 0;
    for (std::size_t j = 0; j < col_dims_.size(); ++j) {
      const Block& b = at(i, j);
      const auto xs = x.segment(c0, col_dims_[j]);
      auto ys = y.segment(r0, row_dims_[i]);
      switch (b.kind()) {
        case Block::Kind::Zero:
          break;
        case Block::Kind::Identity:
          ys += b.scale() * xs;
          break;
        case Block::Kind::Diagonal:
          ys += b.diag().cwiseProduct(xs);
          break;
        case Block::Kind::Dense:
          ys += b.matrix() * xs;
          break;
      }
      c0 += col_dims_[j];
    }
    r0 += row_dims_[i];
  }
  return y;
}

BlockOperator BlockOperator::select(const std::vector<std::size_t>& rows,
                                    const std::vector<std::size_t>& cols) const {
  std::vector<std::size_t> rd;
  std::vector<std::size_t> cdims;
  for (std::size_t r : rows) {
    require(r < row_dims_.size(), "select: row out of range");
    rd.push_back(row_dims_[r]);
  }
  for (std::size_t c : cols) {
    require(c < col_dims_.size(), "select: column out of range");
    cdims.push_back(col_dims_[c]);
  }
  BlockOperator out(rd, cdims);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) out.set(i, j, at(rows[i], cols[j]));
  }
  return out;
}

std::size_t BlockOperator::dense_block_count() const {
  std::size_t n = 0;
  for (const Block& b : blocks_) n += b.kind() == Block::Kind::Dense ? 1 : 0;
  return n;
}

BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
  require(a.col_dims() == b.row_dims(), "operator product: layout mismatch");
  BlockOperator out(a.row_dims(), b.col_dims());
  for (std::size_t i = 0; i < a.block_rows(); ++i) {
    for (std::size_t j = 0; j < b.block_cols(); ++j) {
      Block acc = Block::zero(a.row_dims()[i], b.col_dims()[j]);
      for (std::size_t k = 0; k < a.block_cols(); ++k) {
        if (a.at(i, k).is_zero() || b.at(k, j).is_zero()) continue;
        acc = acc + a.at(i, k) * b.at(k, j);
      }
      out.set(i, j, std::move(acc));
    }
  }
  return out;
}

BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) {
  require(a.row_dims() == b.row_dims() && a.col_dims() == b.col_dims(),
          "operator sum: layout mismatch");
  BlockOperator out(a.row_dims(), a.col_dims());
  for (std::size_t i = 0; i < a.block_rows(); ++i) {
    for (std::size_t j = 0; j < a.block_cols(); ++j) out.set(i, j, a.at(i, j) + b.at(i, j));
  }
  return out;
}

BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) {
  return a + b.scaled(-1.0);
}

cd trace_product(const BlockOperator& a, const BlockOperator& b) {
  require(a.col_dims() == b.row_dims() && a.row_dims() == b.col_dims(),
          "trace product: layout mismatch");
  cd t = 0.0;
  for (std::size_t i = 0; i < a.block_rows(); ++i) {
    for (std::size_t k = 0; k < a.block_cols(); ++k) t += trace_product(a.at(i, k), b.at(k, i));
  }
  return t;
}

}  // namespace biphoton
