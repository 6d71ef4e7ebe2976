#include "pocket/linalg.hpp"

#include "pocket/error.hpp"

namespace pocket {

Gram::Gram(const Matrix& X) : n_(X.rows()), h_(X.cols()), dual_(X.rows() < X.cols()) {
  const Index d = dual_ ? n_ : h_;
  gram_ = Matrix::Zero(d, d);
  if (dual_)
    gram_.selfadjointView<Eigen::Lower>().rankUpdate(X);
  else
    gram_.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose());
  gram_.triangularView<Eigen::StrictlyUpper>() = gram_.transpose();
}

ShiftedGramInverse::ShiftedGramInverse(const Matrix& X, const Gram& gram, double shift,
                                       FactorizationCounter* counter)
    : x_(&X), gram_(&gram), shift_(shift) {
  if (X.rows() != gram.rows() || X.cols() != gram.cols())
    throw DimensionError("ShiftedGramInverse: Gram does not belong to X");
  if (!(shift > 0.0)) throw ConfigError("ShiftedGramInverse: shift must be positive");
  Matrix S = gram.matrix();
  S.diagonal().array() += shift;
  llt_.compute(S);
  if (llt_.info() != Eigen::Success) throw NumericalError("ShiftedGramInverse: factorization failed");
  if (counter) counter->bump();
}

Matrix ShiftedGramInverse::apply(const Matrix& rhs) const {
  if (rhs.rows() != x_->cols()) throw DimensionError("ShiftedGramInverse::apply: bad rhs height");
  if (!gram_->dual()) return llt_.solve(rhs);
  const Matrix z = llt_.solve(*x_ * rhs);
  return (rhs - x_->transpose() * z) / shift_;
}

Matrix ShiftedGramInverse::dense() const {
  return apply(Matrix::Identity(x_->cols(), x_->cols()));
}

Matrix direct_shifted_inverse(const Matrix& X, double shift) {
  Matrix A = X.transpose() * X;
  A.diagonal().array() += shift;
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success) throw NumericalError("direct_shifted_inverse: not positive definite");
  return llt.solve(Matrix::Identity(A.rows(), A.cols()));
}

Matrix select_rows(const Matrix& M, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), M.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = M.row(rows[i]);
  return out;
}

Matrix select_cols(const Matrix& M, const std::vector<Index>& cols) {
  Matrix out(M.rows(), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Index>(i)) = M.col(cols[i]);
  return out;
}

bool all_finite(const Matrix& M) { return M.allFinite(); }

} // namespace pocket
