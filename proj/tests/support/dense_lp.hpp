#pragma once

// Dense two-phase tableau simplex with Bland's rule. Slow but simple; used in
// tests as a reference for the sparse solver and the commitment enumeration.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

struct DenseLp {
  // min c'x  s.t.  lo_r <= A x <= up_r,  lo_c <= x <= up_c  (lo_c finite)
  std::vector<double> c, col_lo, col_up;
  std::vector<std::vector<double>> a;
  std::vector<double> row_lo, row_up;
};

struct DenseResult {
  bool feasible = false;
  bool bounded = true;
  double objective = 0.0;
  std::vector<double> x;
};

inline DenseResult solve_dense(const DenseLp& lp) {
  using Real = long double;
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = lp.c.size();

  // Build A' x' <= b with x = lo + x', x' >= 0.
  std::vector<std::vector<Real>> rows;
  std::vector<Real> rhs;
  for (std::size_t i = 0; i < lp.a.size(); ++i) {
    Real shift = 0;
    for (std::size_t j = 0; j < n; ++j) shift += Real(lp.a[i][j]) * lp.col_lo[j];
    if (lp.row_up[i] < inf) {
      std::vector<Real> r(lp.a[i].begin(), lp.a[i].end());
      rows.push_back(r);
      rhs.push_back(Real(lp.row_up[i]) - shift);
    }
    if (lp.row_lo[i] > -inf) {
      std::vector<Real> r(n);
      for (std::size_t j = 0; j < n; ++j) r[j] = -Real(lp.a[i][j]);
      rows.push_back(r);
      rhs.push_back(-(Real(lp.row_lo[i]) - shift));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (lp.col_up[j] < inf) {
      std::vector<Real> r(n, 0);
      r[j] = 1;
      rows.push_back(r);
      rhs.push_back(Real(lp.col_up[j]) - lp.col_lo[j]);
    }
  }

  const std::size_t m = rows.size();
  std::size_t n_art = 0;
  for (auto b : rhs) n_art += b < 0 ? 1 : 0;
  const std::size_t width = n + m + n_art;
  // Tableau rows 0..m-1, rhs in last column.
  std::vector<std::vector<Real>> t(m, std::vector<Real>(width + 1, 0));
  std::vector<std::size_t> basis(m);
  std::size_t art = n + m;
  for (std::size_t i = 0; i < m; ++i) {
    const Real sgn = rhs[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = sgn * rows[i][j];
    t[i][n + i] = sgn;
    t[i][width] = sgn * rhs[i];
    if (sgn < 0) {
      t[i][art] = 1;
      basis[i] = art++;
    } else {
      basis[i] = n + i;
    }
  }

  const Real eps = 1e-11L;
  auto run = [&](const std::vector<Real>& cost, std::size_t allowed) -> bool {
    for (;;) {
      // reduced costs
      std::size_t enter = width;
      for (std::size_t j = 0; j < allowed; ++j) {
        Real dj = cost[j];
        for (std::size_t i = 0; i < m; ++i) dj -= cost[basis[i]] * t[i][j];
        if (dj < -eps) {
          enter = j;
          break;
        }
      }
      if (enter == width) return true;
      std::size_t leave = m;
      Real best = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] > eps) {
          const Real ratio = t[i][width] / t[i][enter];
          if (leave == m || ratio < best - eps ||
              (std::fabs(ratio - best) <= eps && basis[i] < basis[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave == m) return false;
      const Real piv = t[leave][enter];
      for (auto& v : t[leave]) v /= piv;
      for (std::size_t i = 0; i < m; ++i) {
        if (i == leave || t[i][enter] == 0) continue;
        const Real f = t[i][enter];
        for (std::size_t j = 0; j <= width; ++j) t[i][j] -= f * t[leave][j];
      }
      basis[leave] = enter;
    }
  };

  DenseResult res;
  if (n_art > 0) {
    std::vector<Real> c1(width, 0);
    for (std::size_t j = n + m; j < width; ++j) c1[j] = 1;
    run(c1, width);
    Real infeas = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] >= n + m) infeas += t[i][width];
    }
    if (infeas > 1e-8L) return res;
    // Drive remaining zero-level artificials out where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n + m) continue;
      for (std::size_t j = 0; j < n + m; ++j) {
        if (std::fabs(t[i][j]) > 1e-9L) {
          const Real piv = t[i][j];
          for (auto& v : t[i]) v /= piv;
          for (std::size_t k = 0; k < m; ++k) {
            if (k == i || t[k][j] == 0) continue;
            const Real f = t[k][j];
            for (std::size_t q = 0; q <= width; ++q) t[k][q] -= f * t[i][q];
          }
          basis[i] = j;
          break;
        }
      }
    }
  }
  res.feasible = true;
  std::vector<Real> c2(width, 0);
  for (std::size_t j = 0; j < n; ++j) c2[j] = lp.c[j];
  if (!run(c2, n + m)) {
    res.bounded = false;
    return res;
  }
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) res.x[basis[i]] = static_cast<double>(t[i][width]);
  }
  Real obj = 0;
  for (std::size_t j = 0; j < n; ++j) {
    res.x[j] += lp.col_lo[j];
    obj += Real(lp.c[j]) * res.x[j];
  }
  res.objective = static_cast<double>(obj);
  return res;
}

}  // namespace oracle
