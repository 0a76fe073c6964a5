#include <random>

#include <gtest/gtest.h>

#include "dense_lp.hpp"
#include "nexus/lp.hpp"

using nexus::lp::kInf;

namespace {

struct Pair {
  nexus::lp::Model sparse;
  oracle::DenseLp dense;
};

// Random LP with a known feasible point so feasibility is not the only case
// exercised; a few are made infeasible on purpose.
Pair random_lp(std::mt19937& rng, int rows, int cols, bool force_infeasible) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 4);
  Pair p;
  std::vector<double> x0(cols);
  for (int j = 0; j < cols; ++j) {
    const double lo = std::floor(u(rng) * 3.0);
    const double up = kind(rng) == 0 ? kInf : lo + 1.0 + std::floor(4.0 * std::abs(u(rng)));
    const double c = std::round(u(rng) * 10.0);
    x0[j] = std::isfinite(up) ? lo + 0.5 * (up - lo) : lo + 1.0;
    p.sparse.add_col(c, lo, up);
    p.dense.c.push_back(c);
    p.dense.col_lo.push_back(lo);
    p.dense.col_up.push_back(up);
  }
  for (int i = 0; i < rows; ++i) {
    std::vector<std::pair<int, double>> coefs;
    std::vector<double> dense_row(cols, 0.0);
    double act = 0.0;
    for (int j = 0; j < cols; ++j) {
      if (std::abs(u(rng)) < 0.5) continue;
      const double v = std::round(u(rng) * 50.0) / 10.0;
      if (v == 0.0) continue;
      coefs.emplace_back(j, v);
      dense_row[j] = v;
      act += v * x0[j];
    }
    double lo = -kInf, up = kInf;
    switch (kind(rng)) {
      case 0: lo = up = act; break;
      case 1: lo = act - 1.0; break;
      case 2: up = act + 1.0; break;
      default: lo = act - 2.0; up = act + 0.5; break;
    }
    if (force_infeasible && i == 0) {
      lo = up = 0.0;
      coefs.clear();
      std::fill(dense_row.begin(), dense_row.end(), 0.0);
      coefs.emplace_back(0, 1.0);
      dense_row[0] = 1.0;
      lo = up = p.dense.col_up[0] + 5.0;
      if (!std::isfinite(lo)) lo = up = p.dense.col_lo[0] - 5.0;
    }
    p.sparse.add_row(lo, up, coefs);
    p.dense.a.push_back(dense_row);
    p.dense.row_lo.push_back(lo);
    p.dense.row_up.push_back(up);
  }
  return p;
}

}  // namespace

TEST(LinearProgram, SmallKnownOptimum) {
  // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3
  nexus::lp::Model m;
  const int x = m.add_col(-3.0, 0.0, 3.0);
  const int y = m.add_col(-2.0, 0.0, kInf);
  const std::pair<int, double> r1[] = {{x, 1.0}, {y, 1.0}};
  const std::pair<int, double> r2[] = {{x, 1.0}, {y, 3.0}};
  m.add_row(-kInf, 4.0, r1);
  m.add_row(-kInf, 7.0, r2);
  const auto res = nexus::lp::solve(m);
  ASSERT_EQ(res.status, nexus::lp::Status::Optimal);
  EXPECT_NEAR(res.objective, -11.0, 1e-9);
  EXPECT_NEAR(res.x[0], 3.0, 1e-9);
  EXPECT_NEAR(res.x[1], 1.0, 1e-9);
  EXPECT_NEAR(res.row_dual[0], -2.0, 1e-9);
}

TEST(LinearProgram, FreeVariableAndUnbounded) {
  nexus::lp::Model m;
  const int x = m.add_col(1.0, -kInf, kInf);
  const std::pair<int, double> r[] = {{x, 2.0}};
  m.add_row(-4.0, kInf, r);
  auto res = nexus::lp::solve(m);
  ASSERT_EQ(res.status, nexus::lp::Status::Optimal);
  EXPECT_NEAR(res.x[0], -2.0, 1e-9);

  nexus::lp::Model u;
  const int z = u.add_col(-1.0, 0.0, kInf);
  const std::pair<int, double> rz[] = {{z, 1.0}};
  u.add_row(1.0, kInf, rz);
  res = nexus::lp::solve(u);
  EXPECT_EQ(res.status, nexus::lp::Status::Unbounded);
}

TEST(LinearProgram, MatchesDenseReference) {
  std::mt19937 rng(7);
  int checked = 0, infeasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int rows = 2 + trial % 9;
    const int cols = 2 + (trial * 7) % 11;
    auto p = random_lp(rng, rows, cols, trial % 13 == 0);
    const auto ref = oracle::solve_dense(p.dense);
    const auto got = nexus::lp::solve(p.sparse);
    if (!ref.feasible) {
      EXPECT_EQ(got.status, nexus::lp::Status::Infeasible) << "trial " << trial;
      ++infeasible;
      continue;
    }
    if (!ref.bounded) {
      EXPECT_EQ(got.status, nexus::lp::Status::Unbounded) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(got.status, nexus::lp::Status::Optimal) << "trial " << trial;
    EXPECT_NEAR(got.objective, ref.objective, 1e-6 * (1.0 + std::abs(ref.objective)))
        << "trial " << trial;
    // Primal feasibility of the returned point.
    for (std::size_t i = 0; i < p.dense.a.size(); ++i) {
      double act = 0.0;
      for (std::size_t j = 0; j < got.x.size(); ++j) act += p.dense.a[i][j] * got.x[j];
      EXPECT_GE(act, p.dense.row_lo[i] - 1e-6);
      EXPECT_LE(act, p.dense.row_up[i] + 1e-6);
    }
    ++checked;
  }
  EXPECT_GT(checked, 250);
  EXPECT_GT(infeasible, 10);
}

TEST(LinearProgram, WarmStartAfterBoundChange) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_lp(rng, 6, 8, false);
    nexus::lp::Solver solver(p.sparse);
    if (solver.solve() != nexus::lp::Status::Optimal) continue;
    const auto basis = solver.basis();
    const int j = trial % 8;
    const double lo = p.dense.col_lo[j];
    const double up = std::isfinite(p.dense.col_up[j]) ? p.dense.col_up[j] : lo + 3.0;
    const double mid = std::floor(0.5 * (lo + up));
    p.dense.col_lo[j] = mid;
    p.dense.col_up[j] = mid;
    solver.set_basis(basis);
    solver.set_col_bounds(j, mid, mid);
    const auto st = solver.solve();
    const auto ref = oracle::solve_dense(p.dense);
    if (!ref.feasible) {
      EXPECT_EQ(st, nexus::lp::Status::Infeasible);
      continue;
    }
    if (!ref.bounded) continue;
    ASSERT_EQ(st, nexus::lp::Status::Optimal) << "trial " << trial;
    EXPECT_NEAR(solver.objective(), ref.objective, 1e-6 * (1.0 + std::abs(ref.objective)));
  }
}

TEST(LinearProgram, SequentialFixingsMatchDenseReference) {
  // Mimics a branch-and-bound dive: bounds are tightened one after another on
  // the same solver and every intermediate optimum is checked.
  std::mt19937 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto p = random_lp(rng, 5 + trial % 6, 9, false);
    nexus::lp::Solver solver(p.sparse);
    solver.solve();
    for (int step = 0; step < 5; ++step) {
      const int j = std::uniform_int_distribution<int>(0, 8)(rng);
      const double lo = p.dense.col_lo[j];
      const double up = std::isfinite(p.dense.col_up[j]) ? p.dense.col_up[j] : lo + 2.0;
      const double v = std::uniform_int_distribution<int>(0, 1)(rng) ? lo : up;
      p.dense.col_lo[j] = p.dense.col_up[j] = v;
      solver.set_col_bounds(j, v, v);
      const auto st = solver.solve();
      const auto ref = oracle::solve_dense(p.dense);
      if (!ref.feasible) {
        EXPECT_EQ(st, nexus::lp::Status::Infeasible) << trial << "/" << step;
        break;
      }
      if (!ref.bounded) break;
      ASSERT_EQ(st, nexus::lp::Status::Optimal) << trial << "/" << step;
      EXPECT_NEAR(solver.objective(), ref.objective, 1e-6 * (1.0 + std::abs(ref.objective)));
      ++checked;
    }
  }
  EXPECT_GT(checked, 200);
}
