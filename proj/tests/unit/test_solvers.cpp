#include "pocket/admm.hpp"
#include "pocket/error.hpp"
#include "pocket/pocket.hpp"

#include "support/synthetic.hpp"

#include <doctest.h>

#include <sstream>

using namespace pocket;
using testsupport::gaussian;
using testsupport::planted_problem;

namespace {

bool contains_all(const std::vector<int>& have, const std::vector<int>& want) {
  return std::includes(have.begin(), have.end(), want.begin(), want.end());
}

// Unscaled iteration with an explicit multiplier and fixed penalty s = rho3.
struct Explicit {
  Matrix W, Theta, Lambda;
};

Explicit explicit_multiplier(const Matrix& X, const Matrix& Y, const GroupView& view, double rho1,
                             double rho2, double rho3, int T) {
  const Index H = X.cols();
  Explicit s{Matrix::Zero(H, Y.cols()), Matrix::Zero(H, Y.cols()), Matrix::Zero(H, Y.cols())};
  const Matrix A = (rho1 + rho3) * Matrix::Identity(H, H) + rho2 * X.transpose() * X;
  const auto solver = A.ldlt();
  for (int t = 0; t < T; ++t) {
    s.W = solver.solve(rho2 * X.transpose() * Y + s.Lambda + rho3 * s.Theta);
    s.Theta = group_soft_threshold(s.W - s.Lambda / rho3, 1.0 / rho3, view);
    s.Lambda += rho3 * (s.Theta - s.W);
  }
  return s;
}

} // namespace

TEST_CASE("remain resolution") {
  CHECK(resolve_remain(0.1806, 10000) == 1806);
  CHECK(resolve_remain(1e-6, 100) == 1);
  CHECK(resolve_remain(0.9999, 10) == 9);
  CHECK_THROWS_AS(resolve_remain(1.0, 10), ConfigError);
  CHECK_THROWS_AS(resolve_remain(0.0, 10), ConfigError);
  CHECK_THROWS_AS(resolve_remain(-0.5, 10), ConfigError);
}

TEST_CASE("planted support is recovered") {
  const auto p = planted_problem(60, 12, 3, 0.1, 3, 11);
  const auto view = GroupView::contiguous(12, 1);
  PocketConfig pc;
  pc.m = 3;
  pc.k = 1.0;
  const auto s1 = stage1(p.X, p.Y, pc, view);
  CHECK(s1.selected_groups == p.planted);
  CHECK(s1.factorizations == 1);
  CHECK(s1.W_pruned.rows() == 3);

  AdmmConfig ac;
  ac.m = 3;
  const auto ad = admm_prune(p.X, p.Y, view, ac);
  CHECK(contains_all(ad.selected_groups, p.planted));
  CHECK(ad.factorizations == 50);
}

TEST_CASE("inversion counts: one for stage 1, T for ADMM") {
  const auto p = planted_problem(30, 40, 4, 0.1, 2, 3);
  const auto view = GroupView::contiguous(20, 2);
  for (int T : {1, 7, 50}) {
    PocketConfig pc;
    pc.m = 5;
    pc.iterations = T;
    AdmmConfig ac;
    ac.m = 5;
    ac.iterations = T;
    CHECK(stage1(p.X, p.Y, pc, view).factorizations == 1);
    CHECK(admm_prune(p.X, p.Y, view, ac).factorizations == static_cast<std::size_t>(T));
  }
}

TEST_CASE("at most m groups survive every iteration") {
  const auto p = planted_problem(25, 30, 5, 0.3, 3, 5);
  const auto view = GroupView::contiguous(15, 2);
  for (int T = 1; T <= 6; ++T) {
    PocketConfig pc;
    pc.m = 4;
    pc.iterations = T;
    const auto r = stage1(p.X, p.Y, pc, view);
    CHECK(r.selected_groups.size() == 4);
    CHECK_FALSE(r.degenerate);
    AdmmConfig ac;
    ac.m = 4;
    ac.iterations = T;
    CHECK(admm_prune(p.X, p.Y, view, ac).selected_groups.size() <= 4);
  }
}

TEST_CASE("m = G - 1 drops the weakest group of the final iterate") {
  const auto p = planted_problem(20, 9, 3, 0.2, 2, 8);
  const auto view = GroupView::contiguous(9, 1);
  PocketConfig pc;
  pc.m = 8;
  const auto r = stage1(p.X, p.Y, pc, view);
  REQUIRE(r.selected_groups.size() == 8);
  // The thresholded matrix was W - U_prev = Theta - U_final.
  const Vector n = group_norms(r.Theta - r.U, view);
  Index weakest = 0;
  n.minCoeff(&weakest);
  CHECK(std::find(r.selected_groups.begin(), r.selected_groups.end(), static_cast<int>(weakest)) ==
        r.selected_groups.end());
}

TEST_CASE("scaled dual equals the multiplier over rho3") {
  const auto p = planted_problem(12, 10, 2, 0.1, 2, 4);
  const auto view = GroupView::contiguous(5, 2);
  for (int T : {1, 2, 5, 12}) {
    AdmmConfig ac;
    ac.m = 2;
    ac.rho1 = 0.5;
    ac.rho2 = 1.5;
    ac.iterations = T;
    ac.fixed_rho3 = 4.0;
    const auto r = admm_prune(p.X, p.Y, view, ac);
    const auto e = explicit_multiplier(p.X, p.Y, view, 0.5, 1.5, 4.0, T);
    CHECK((r.U - e.Lambda / 4.0).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((r.W - e.W).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((r.Theta - e.Theta).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("permuting groups permutes the selection") {
  const auto p = planted_problem(50, 16, 3, 0.1, 3, 21);
  const auto view = GroupView::contiguous(16, 1);
  std::vector<Index> perm(16);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(1);
  std::shuffle(perm.begin(), perm.end(), rng);
  const Matrix Xp = select_cols(p.X, perm);  // new column j = old column perm[j]
  auto mapped = [&](const std::vector<int>& sel) {
    std::vector<int> out;
    for (int j : sel) out.push_back(static_cast<int>(perm[static_cast<std::size_t>(j)]));
    std::sort(out.begin(), out.end());
    return out;
  };
  PocketConfig pc;
  pc.m = 5;
  CHECK(mapped(stage1(Xp, p.Y, pc, view).selected_groups) == stage1(p.X, p.Y, pc, view).selected_groups);
  AdmmConfig ac;
  ac.m = 5;
  CHECK(mapped(admm_prune(Xp, p.Y, view, ac).selected_groups) == admm_prune(p.X, p.Y, view, ac).selected_groups);
}

TEST_CASE("trace records every iteration") {
  const auto p = planted_problem(30, 20, 3, 0.1, 2, 6);
  const auto view = GroupView::contiguous(20, 1);
  PocketConfig pc;
  pc.m = 3;
  pc.iterations = 40;
  const auto r = stage1(p.X, p.Y, pc, view);
  REQUIRE(r.trace.size() == 40);
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& e = r.trace[i];
    CHECK(e.iter == static_cast<int>(i) + 1);
    CHECK(std::isfinite(e.norm_gap));
    CHECK(e.relative_threshold >= 1.0);
    CHECK(e.reciprocal_relative_threshold == doctest::Approx(1.0 / e.relative_threshold));
  }
  std::ostringstream csv;
  write_trace_csv(csv, r.trace);
  const std::string text = csv.str();
  CHECK(text.rfind("iter,norm_gap,relative_threshold,reciprocal_relative_threshold,inv_threshold\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 41);
}

TEST_CASE("early stop ends before T") {
  const auto p = planted_problem(40, 12, 3, 0.05, 3, 2);
  const auto view = GroupView::contiguous(12, 1);
  PocketConfig pc;
  pc.m = 3;
  pc.iterations = 500;
  pc.early_stop_tol = 1e-3;
  const auto r = stage1(p.X, p.Y, pc, view);
  CHECK(r.iterations < 500);
  CHECK(r.trace.back().norm_gap <= 1e-3 * r.W.norm());
}

TEST_CASE("zero targets give a flagged degenerate result") {
  std::mt19937_64 rng(3);
  const Matrix X = gaussian(10, 8, rng);
  const Matrix Y = Matrix::Zero(10, 2);
  const auto view = GroupView::contiguous(8, 1);
  PocketConfig pc;
  pc.m = 2;
  const auto r = stage1(X, Y, pc, view);
  CHECK(r.degenerate);
  CHECK(r.selected_groups.empty());
  AdmmConfig ac;
  ac.m = 2;
  CHECK(admm_prune(X, Y, view, ac).degenerate);
}

TEST_CASE("solver argument checks") {
  const auto p = planted_problem(10, 6, 2, 0.1, 2, 1);
  const auto view = GroupView::contiguous(6, 1);
  PocketConfig pc;
  pc.m = 6;
  CHECK_THROWS_AS(stage1(p.X, p.Y, pc, view), ConfigError);
  pc.m = 2;
  pc.k = 0.0;
  CHECK_THROWS_AS(stage1(p.X, p.Y, pc, view), ConfigError);
  pc.k = 1.0;
  pc.iterations = 0;
  CHECK_THROWS_AS(stage1(p.X, p.Y, pc, view), ConfigError);
  AdmmConfig ac;
  ac.m = 2;
  ac.rho1 = -1;
  CHECK_THROWS_AS(admm_prune(p.X, p.Y, view, ac), ConfigError);
  CHECK_THROWS_AS(admm_prune(p.X, p.Y, GroupView::contiguous(3, 1), AdmmConfig{}), DimensionError);
}

TEST_CASE("stage 2 on every group reproduces the unpruned ridge") {
  const auto p = planted_problem(30, 24, 4, 0.2, 3, 9);
  const auto view = GroupView::contiguous(12, 2);
  std::vector<int> all(12);
  std::iota(all.begin(), all.end(), 0);
  const auto m2 = stage2(p.X, all, view, p.Y);
  const double alpha = loocv_select_alpha(p.X, p.Y).best_alpha;
  CHECK(m2.alpha == alpha);
  const Matrix W = fit_ridge(p.X, p.Y, alpha);
  CHECK(m2.W == W);
  CHECK(predict(p.X, m2) == argmax_rows(p.X * W));
  CHECK_THROWS_AS(stage2(p.X, {}, view, p.Y), ConfigError);
}
