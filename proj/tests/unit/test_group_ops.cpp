#include "pocket/error.hpp"
#include "pocket/group_ops.hpp"

#include "support/synthetic.hpp"

#include <doctest.h>

using namespace pocket;

TEST_CASE("group view validation") {
  CHECK_NOTHROW(GroupView({{0, 1}, {2}}, 3));
  CHECK_THROWS_AS(GroupView({{0, 1}, {1}}, 3), DimensionError);
  CHECK_THROWS_AS(GroupView({{0, 1}}, 3), DimensionError);
  CHECK_THROWS_AS(GroupView({{0, 3}}, 2), DimensionError);
  const auto v = GroupView::contiguous(3, 2);
  CHECK(v.size() == 3);
  CHECK(v.rows(1) == std::vector<Index>{2, 3});
  CHECK(v.rows_of({2, 0}) == std::vector<Index>{4, 5, 0, 1});
}

TEST_CASE("group norms") {
  Matrix M(2, 1);
  M << 3, 4;
  CHECK(group_norms(M, GroupView({{0, 1}}, 2))(0) == 5.0);
  CHECK(group_norms(Matrix::Zero(6, 3), GroupView::contiguous(3, 2)).isZero());

  std::mt19937_64 rng(1);
  const Matrix A = testsupport::gaussian(8, 3, rng);
  const Vector n = group_norms(A, GroupView::contiguous(4, 2));
  // Moving blocks around moves their norms.
  Matrix B(8, 3);
  B << A.middleRows(6, 2), A.middleRows(0, 2), A.middleRows(4, 2), A.middleRows(2, 2);
  const Vector nb = group_norms(B, GroupView::contiguous(4, 2));
  CHECK(nb(0) == n(3));
  CHECK(nb(1) == n(0));
  CHECK(nb(3) == n(1));
  CHECK_THROWS_AS(group_norms(A, GroupView::contiguous(3, 2)), DimensionError);
}

TEST_CASE("dynamic threshold") {
  Vector a(3);
  a << 5, 3, 1;
  CHECK(dynamic_threshold(a, 2).value == 1.0);
  Vector b = Vector::Constant(3, 2.0);
  const auto t = dynamic_threshold(b, 1);
  CHECK(t.value == 2.0);
  CHECK(t.order == std::vector<Index>{0, 1, 2});
  CHECK_THROWS_AS(dynamic_threshold(a, 0), ConfigError);
  CHECK_THROWS_AS(dynamic_threshold(a, 3), ConfigError);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector n = testsupport::gaussian(30, 1, rng).cwiseAbs();
    const Index m = 1 + static_cast<Index>(rng() % 29);
    const double thr = dynamic_threshold(n, m).value;
    CHECK((n.array() > thr).count() == m);
  }
}

TEST_CASE("group soft threshold") {
  Matrix g(2, 1);
  g << 3, 4;
  const GroupView one({{0, 1}}, 2);
  CHECK(group_soft_threshold(g, 5.0, one).isZero());
  const Matrix half = group_soft_threshold(g, 2.5, one);
  CHECK(half(0, 0) == doctest::Approx(1.5));
  CHECK(half(1, 0) == doctest::Approx(2.0));
  CHECK(group_soft_threshold(Matrix::Zero(2, 1), 1.0, one).isZero());
  CHECK(group_soft_threshold(Matrix::Zero(2, 1), 0.0, one).isZero());
  CHECK(group_soft_threshold(g, 0.0, one) == g);
}

TEST_CASE("soft threshold is the exact minimiser of its subproblem") {
  // min_T  sum_g ||T_g|| + (rho3 / 2) ||T - V||^2  with threshold 1 / rho3
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  const GroupView view = GroupView::contiguous(6, 2);
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix V = testsupport::gaussian(12, 3, rng);
    const double rho3 = 0.3 + 3.0 * std::abs(nd(rng));
    auto objective = [&](const Matrix& T) {
      return group_norms(T, view).sum() + 0.5 * rho3 * (T - V).squaredNorm();
    };
    const Matrix T = group_soft_threshold(V, 1.0 / rho3, view);
    const double best = objective(T);
    for (Index g = 0; g < view.size(); ++g)
      for (double eps : {1e-3, -1e-3}) {
        Matrix P = T;
        for (Index r : view.rows(g))
          for (Index c = 0; c < 3; ++c) P(r, c) += eps * nd(rng);
        CHECK(objective(P) > best);
      }
  }
}

TEST_CASE("relative threshold and nonzero groups") {
  Vector n(3);
  n << 4, 2, 1;
  CHECK(relative_threshold(n, 2) == 4.0);
  CHECK(relative_threshold(Vector::Constant(4, 3.0), 2) == 1.0);
  Vector z(3);
  z << 1, 0, 0;
  CHECK(std::isinf(relative_threshold(z, 1)));

  Matrix M = Matrix::Zero(6, 2);
  M(3, 1) = 1e-300;
  M(4, 0) = -2;
  CHECK(nonzero_groups(M, GroupView::contiguous(3, 2)) == std::vector<int>{1, 2});
}
