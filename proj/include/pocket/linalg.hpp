#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace pocket {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Counts dense factorizations performed by a solver. Solvers own one and
/// expose it through their results so tests can pin the number of
/// matrix inversions an algorithm performs.
struct FactorizationCounter {
  std::size_t count = 0;
  void bump() { ++count; }
};

/// Gram data for a fixed design matrix X (N x H). When N < H only the
/// N x N kernel matrix X X^T is kept (dual form); otherwise X^T X.
class Gram {
public:
  explicit Gram(const Matrix& X);

  bool dual() const { return dual_; }
  Index rows() const { return n_; }
  Index cols() const { return h_; }
  /// X X^T when dual(), X^T X otherwise.
  const Matrix& matrix() const { return gram_; }

private:
  Index n_ = 0;
  Index h_ = 0;
  bool dual_ = false;
  Matrix gram_;
};

/// Applies (shift * I_H + X^T X)^{-1} to H x C right-hand sides using a single
/// Cholesky factorization, through the Woodbury identity
///   (kI + X^T X)^{-1} = (1/k) [I - X^T (kI_N + X X^T)^{-1} X]
/// whenever N < H.
class ShiftedGramInverse {
public:
  ShiftedGramInverse(const Matrix& X, const Gram& gram, double shift,
                     FactorizationCounter* counter = nullptr);

  Matrix apply(const Matrix& rhs) const;
  /// Materializes the H x H inverse. Only sensible for small H.
  Matrix dense() const;

  double shift() const { return shift_; }
  bool woodbury() const { return gram_->dual(); }

private:
  const Matrix* x_;
  const Gram* gram_;
  double shift_;
  Eigen::LLT<Matrix> llt_;
};

/// Direct H x H inverse of (shift * I + X^T X); the reference used to check
/// the Woodbury path.
Matrix direct_shifted_inverse(const Matrix& X, double shift);

/// Rows of M listed in `rows`, in order.
Matrix select_rows(const Matrix& M, const std::vector<Index>& rows);
/// Columns of M listed in `cols`, in order.
Matrix select_cols(const Matrix& M, const std::vector<Index>& cols);

bool all_finite(const Matrix& M);

} // namespace pocket
