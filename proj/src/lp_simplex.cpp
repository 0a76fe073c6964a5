#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "nexus/lp.hpp"

namespace nexus::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
    case Status::NumericalTrouble: return "numerical-trouble";
  }
  return "unknown";
}

int Model::add_col(double c, double lower, double upper) {
  cost.push_back(c);
  col_lower.push_back(lower);
  col_upper.push_back(upper);
  return num_cols() - 1;
}

int Model::add_row(double lower, double upper, std::span<const std::pair<int, double>> coefs) {
  std::vector<std::pair<int, double>> sorted(coefs.begin(), coefs.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size();) {
    const int col = sorted[k].first;
    if (col < 0 || col >= num_cols()) throw std::out_of_range("row references unknown column");
    double v = 0.0;
    for (; k < sorted.size() && sorted[k].first == col; ++k) v += sorted[k].second;
    if (v != 0.0) {
      row_col.push_back(col);
      row_value.push_back(v);
    }
  }
  row_lower.push_back(lower);
  row_upper.push_back(upper);
  row_start.push_back(static_cast<int>(row_col.size()));
  return num_rows() - 1;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// LU factorization of the basis plus a product-form eta file for updates.
class BasisFactor {
 public:
  bool factorize(const SpMat& basis) {
    etas_.clear();
    lu_ = std::make_unique<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>();
    lu_->analyzePattern(basis);
    lu_->factorize(basis);
    return lu_->info() == Eigen::Success;
  }

  void ftran(std::vector<double>& v) const {
    Eigen::Map<Eigen::VectorXd> map(v.data(), static_cast<Eigen::Index>(v.size()));
    Eigen::VectorXd sol = lu_->solve(map);
    map = sol;
    for (const auto& eta : etas_) {
      const double vr = v[eta.pos] / eta.pivot;
      v[eta.pos] = vr;
      if (vr == 0.0) continue;
      for (std::size_t k = 0; k < eta.index.size(); ++k) v[eta.index[k]] -= eta.value[k] * vr;
    }
  }

  void btran(std::vector<double>& v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = v[it->pos];
      for (std::size_t k = 0; k < it->index.size(); ++k) acc -= it->value[k] * v[it->index[k]];
      v[it->pos] = acc / it->pivot;
    }
    Eigen::Map<Eigen::VectorXd> map(v.data(), static_cast<Eigen::Index>(v.size()));
    Eigen::VectorXd sol = lu_->transpose().solve(map);
    map = sol;
  }

  void update(int pos, const std::vector<double>& column) {
    Eta eta;
    eta.pos = pos;
    eta.pivot = column[static_cast<std::size_t>(pos)];
    for (std::size_t i = 0; i < column.size(); ++i) {
      if (static_cast<int>(i) != pos && std::abs(column[i]) > 1e-13) {
        eta.index.push_back(static_cast<int>(i));
        eta.value.push_back(column[i]);
      }
    }
    etas_.push_back(std::move(eta));
  }

  std::size_t updates() const { return etas_.size(); }

 private:
  struct Eta {
    int pos = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };
  std::unique_ptr<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>> lu_;
  std::vector<Eta> etas_;
};

double round_pow2(double s) { return std::exp2(std::round(std::log2(s))); }

}  // namespace

struct Solver::Impl {
  Options opt;
  int m = 0;
  int n = 0;
  int total = 0;

  // Scaled constraint matrix, by column and by row.
  std::vector<int> cstart, cindex;
  std::vector<double> cvalue;
  std::vector<int> rstart, rindex;
  std::vector<double> rvalue;
  std::vector<double> row_scale, col_scale;

  std::vector<double> orig_cost;  // unscaled structural costs
  std::vector<double> base_cost;  // scaled, size total
  std::vector<double> cost;       // scaled with shifts
  std::vector<double> lower, upper;

  std::vector<double> x, d;
  std::vector<int> head;
  std::vector<VarState> state;
  std::vector<double> dse;

  BasisFactor factor;
  bool factor_valid = false;
  bool shifted = false;
  Status last = Status::NumericalTrouble;
  long iterations = 0;

  // Work arrays.
  std::vector<double> alpha_row;
  std::vector<int> row_touched;
  std::vector<char> row_mark;

  explicit Impl(const Model& model, Options options) : opt(options) {
    m = model.num_rows();
    n = model.num_cols();
    total = n + m;
    build(model);
    slack_basis();
  }

  // ---------------------------------------------------------------- setup

  void build(const Model& model) {
    row_scale.assign(static_cast<std::size_t>(m), 1.0);
    col_scale.assign(static_cast<std::size_t>(n), 1.0);
    if (opt.scale && model.row_col.size() > 0) {
      for (int pass = 0; pass < 4; ++pass) {
        for (int i = 0; i < m; ++i) {
          double lo = kInf, hi = 0.0;
          for (int k = model.row_start[i]; k < model.row_start[i + 1]; ++k) {
            const double a = std::abs(model.row_value[k]) * col_scale[model.row_col[k]];
            lo = std::min(lo, a);
            hi = std::max(hi, a);
          }
          if (hi > 0.0) row_scale[i] = 1.0 / std::sqrt(lo * hi);
        }
        std::vector<double> clo(n, kInf), chi(n, 0.0);
        for (int i = 0; i < m; ++i) {
          for (int k = model.row_start[i]; k < model.row_start[i + 1]; ++k) {
            const int j = model.row_col[k];
            const double a = std::abs(model.row_value[k]) * row_scale[i];
            clo[j] = std::min(clo[j], a);
            chi[j] = std::max(chi[j], a);
          }
        }
        for (int j = 0; j < n; ++j) {
          if (chi[j] > 0.0) col_scale[j] = 1.0 / std::sqrt(clo[j] * chi[j]);
        }
      }
      for (auto& s : row_scale) s = round_pow2(s);
      for (auto& s : col_scale) s = round_pow2(s);
    }

    rstart = model.row_start;
    rindex = model.row_col;
    rvalue.resize(model.row_value.size());
    for (int i = 0; i < m; ++i) {
      for (int k = rstart[i]; k < rstart[i + 1]; ++k) {
        rvalue[k] = model.row_value[k] * row_scale[i] * col_scale[rindex[k]];
      }
    }
    // Transpose to column storage.
    cstart.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int j : rindex) ++cstart[j + 1];
    std::partial_sum(cstart.begin(), cstart.end(), cstart.begin());
    cindex.resize(rindex.size());
    cvalue.resize(rindex.size());
    std::vector<int> fill(cstart.begin(), cstart.end() - 1);
    for (int i = 0; i < m; ++i) {
      for (int k = rstart[i]; k < rstart[i + 1]; ++k) {
        const int pos = fill[rindex[k]]++;
        cindex[pos] = i;
        cvalue[pos] = rvalue[k];
      }
    }

    orig_cost = model.cost;
    base_cost.assign(static_cast<std::size_t>(total), 0.0);
    lower.assign(static_cast<std::size_t>(total), 0.0);
    upper.assign(static_cast<std::size_t>(total), 0.0);
    for (int j = 0; j < n; ++j) {
      base_cost[j] = model.cost[j] * col_scale[j];
      lower[j] = model.col_lower[j] / col_scale[j];
      upper[j] = model.col_upper[j] / col_scale[j];
    }
    for (int i = 0; i < m; ++i) {
      lower[n + i] = model.row_lower[i] * row_scale[i];
      upper[n + i] = model.row_upper[i] * row_scale[i];
    }
    cost = base_cost;
    alpha_row.assign(static_cast<std::size_t>(total), 0.0);
    row_mark.assign(static_cast<std::size_t>(total), 0);
  }

  bool boxed(int j) const { return std::isfinite(lower[j]) && std::isfinite(upper[j]); }

  VarState preferred_state(int j, double dj) const {
    const bool has_lo = std::isfinite(lower[j]);
    const bool has_up = std::isfinite(upper[j]);
    if (has_lo && has_up && lower[j] == upper[j]) return VarState::Fixed;
    if (has_lo && (dj >= 0.0 || !has_up)) return VarState::AtLower;
    if (has_up) return VarState::AtUpper;
    return VarState::AtZero;
  }

  double nonbasic_value(int j) const {
    switch (state[j]) {
      case VarState::AtLower:
      case VarState::Fixed: return lower[j];
      case VarState::AtUpper: return upper[j];
      default: return 0.0;
    }
  }

  void slack_basis() {
    state.assign(static_cast<std::size_t>(total), VarState::AtLower);
    head.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < n; ++j) state[j] = preferred_state(j, base_cost[j]);
    for (int i = 0; i < m; ++i) {
      state[n + i] = VarState::Basic;
      head[i] = n + i;
    }
    x.assign(static_cast<std::size_t>(total), 0.0);
    d.assign(static_cast<std::size_t>(total), 0.0);
    dse.assign(static_cast<std::size_t>(m), 1.0);
    factor_valid = false;
  }

  // ------------------------------------------------------------- algebra

  template <typename F>
  void for_column(int j, F&& f) const {
    if (j < n) {
      for (int k = cstart[j]; k < cstart[j + 1]; ++k) f(cindex[k], cvalue[k]);
    } else {
      f(j - n, -1.0);
    }
  }

  bool refactor() {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m) * 3);
    for (int k = 0; k < m; ++k) {
      for_column(head[k], [&](int i, double v) { trip.emplace_back(i, k, v); });
    }
    SpMat basis(m, m);
    basis.setFromTriplets(trip.begin(), trip.end());
    basis.makeCompressed();
    factor_valid = factor.factorize(basis);
    return factor_valid;
  }

  void compute_primal() {
    std::vector<double> rhs(static_cast<std::size_t>(m), 0.0);
    for (int j = 0; j < total; ++j) {
      if (state[j] == VarState::Basic) continue;
      x[j] = nonbasic_value(j);
      if (x[j] != 0.0) for_column(j, [&](int i, double v) { rhs[i] -= v * x[j]; });
    }
    if (m > 0) factor.ftran(rhs);
    for (int k = 0; k < m; ++k) x[head[k]] = rhs[k];
  }

  void compute_dual() {
    std::vector<double> y(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) y[k] = cost[head[k]];
    if (m > 0) factor.btran(y);
    for (int j = 0; j < n; ++j) {
      if (state[j] == VarState::Basic) {
        d[j] = 0.0;
        continue;
      }
      double acc = cost[j];
      for (int k = cstart[j]; k < cstart[j + 1]; ++k) acc -= y[cindex[k]] * cvalue[k];
      d[j] = acc;
    }
    for (int i = 0; i < m; ++i) d[n + i] = state[n + i] == VarState::Basic ? 0.0 : cost[n + i] + y[i];
  }

  std::vector<double> row_duals_scaled() const {
    std::vector<double> y(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) y[k] = cost[head[k]];
    if (m > 0) factor.btran(y);
    return y;
  }

  bool dual_infeasible(int j, double tol) const {
    switch (state[j]) {
      case VarState::AtLower: return d[j] < -tol;
      case VarState::AtUpper: return d[j] > tol;
      case VarState::AtZero: return std::abs(d[j]) > tol;
      default: return false;
    }
  }

  /// Restores dual feasibility: boxed variables flip bound, others get their
  /// cost shifted. Returns true if any primal value changed.
  bool repair_dual_feasibility() {
    bool flipped = false;
    for (int j = 0; j < total; ++j) {
      if (state[j] == VarState::Basic || state[j] == VarState::Fixed) continue;
      if (!dual_infeasible(j, opt.dual_tolerance)) continue;
      if (boxed(j)) {
        state[j] = state[j] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
        flipped = true;
      } else {
        cost[j] -= d[j];
        d[j] = 0.0;
        shifted = true;
      }
    }
    return flipped;
  }

  /// Row r of B^-1 A for nonbasic columns; fills alpha_row / row_touched.
  void pivot_row(const std::vector<double>& rho) {
    for (int j : row_touched) {
      alpha_row[j] = 0.0;
      row_mark[j] = 0;
    }
    row_touched.clear();
    for (int i = 0; i < m; ++i) {
      const double ri = rho[i];
      if (std::abs(ri) < 1e-14) continue;
      for (int k = rstart[i]; k < rstart[i + 1]; ++k) {
        const int j = rindex[k];
        if (state[j] == VarState::Basic) continue;
        if (!row_mark[j]) {
          row_mark[j] = 1;
          row_touched.push_back(j);
        }
        alpha_row[j] += ri * rvalue[k];
      }
      const int lj = n + i;
      if (state[lj] != VarState::Basic) {
        if (!row_mark[lj]) {
          row_mark[lj] = 1;
          row_touched.push_back(lj);
        }
        alpha_row[lj] -= ri;
      }
    }
  }

  std::vector<double> column(int j) const {
    std::vector<double> col(static_cast<std::size_t>(m), 0.0);
    for_column(j, [&](int i, double v) { col[i] = v; });
    return col;
  }

  /// Recomputes primal and dual values, refactoring only when the factor is
  /// stale, long, or `force` is set.
  bool fresh_start(bool reset_shifts, bool force = true) {
    if (reset_shifts) {
      cost = base_cost;
      shifted = false;
    }
    if (force || !factor_valid || factor.updates() >= static_cast<std::size_t>(opt.refactor_interval)) {
      if (!refactor()) return false;
    }
    compute_primal();
    compute_dual();
    if (repair_dual_feasibility()) compute_primal();
    return true;
  }

  // ------------------------------------------------------------ dual simplex

  Status dual_phase() {
    bool verified_infeasible = false;
    for (;;) {
      if (iterations >= opt.max_iterations) return Status::IterationLimit;
      if (factor.updates() >= static_cast<std::size_t>(opt.refactor_interval)) {
        if (!fresh_start(false)) return Status::NumericalTrouble;
      }

      // Pricing: dual steepest edge on primal infeasibilities.
      int r = -1;
      double best = 0.0;
      for (int k = 0; k < m; ++k) {
        const int p = head[k];
        double infeas = 0.0;
        if (x[p] < lower[p] - opt.primal_tolerance) {
          infeas = lower[p] - x[p];
        } else if (x[p] > upper[p] + opt.primal_tolerance) {
          infeas = x[p] - upper[p];
        }
        if (infeas > 0.0) {
          const double score = infeas * infeas / dse[k];
          if (score > best) {
            best = score;
            r = k;
          }
        }
      }
      if (r < 0) return Status::Optimal;

      const int p = head[r];
      const bool to_lower = x[p] < lower[p];
      const double target = to_lower ? lower[p] : upper[p];
      const double delta = x[p] - target;
      const double sign = delta < 0.0 ? -1.0 : 1.0;

      std::vector<double> rho(static_cast<std::size_t>(m), 0.0);
      rho[r] = 1.0;
      factor.btran(rho);
      pivot_row(rho);

      // Bound-flipping ratio test with a Harris tolerance.
      struct Candidate {
        int j;
        double ratio;
        double abs_alpha;
      };
      std::vector<Candidate> cands;
      for (int j : row_touched) {
        if (state[j] == VarState::Fixed) continue;
        const double a = sign * alpha_row[j];
        if (std::abs(a) < opt.pivot_tolerance) continue;
        double dj = d[j];
        if (state[j] == VarState::AtLower) {
          if (a <= 0.0) continue;
          dj = std::max(dj, 0.0);
        } else if (state[j] == VarState::AtUpper) {
          if (a >= 0.0) continue;
          dj = std::min(dj, 0.0);
        } else {
          dj = 0.0;  // free variables block immediately
        }
        cands.push_back({j, dj / a, std::abs(a)});
      }

      double slope = std::abs(delta);
      std::vector<int> flips;
      int q = -1;
      while (!cands.empty()) {
        double bound = kInf;
        for (const auto& c : cands) {
          bound = std::min(bound, c.ratio + opt.dual_tolerance / c.abs_alpha);
        }
        double drop = 0.0;
        bool all_boxed = true;
        int pick = -1;
        double pick_alpha = 0.0;
        for (std::size_t k = 0; k < cands.size(); ++k) {
          const auto& c = cands[k];
          if (c.ratio > bound) continue;
          if (boxed(c.j)) {
            drop += c.abs_alpha * (upper[c.j] - lower[c.j]);
          } else {
            all_boxed = false;
          }
          if (c.abs_alpha > pick_alpha) {
            pick_alpha = c.abs_alpha;
            pick = static_cast<int>(k);
          }
        }
        if (all_boxed && slope - drop > opt.primal_tolerance) {
          slope -= drop;
          std::vector<Candidate> rest;
          for (const auto& c : cands) {
            if (c.ratio > bound) {
              rest.push_back(c);
            } else {
              flips.push_back(c.j);
            }
          }
          cands.swap(rest);
          continue;
        }
        q = cands[static_cast<std::size_t>(pick)].j;
        break;
      }

      if (q < 0) {
        if (!verified_infeasible) {
          verified_infeasible = true;
          if (!fresh_start(false)) return Status::NumericalTrouble;
          continue;
        }
        return Status::Infeasible;
      }
      verified_infeasible = false;

      std::vector<double> alpha_q = column(q);
      factor.ftran(alpha_q);
      const double pivot = alpha_q[r];
      const double check = alpha_row[q];
      if (std::abs(pivot) < 1e-11 ||
          std::abs(pivot - check) > 1e-7 * (1.0 + std::abs(pivot))) {
        if (factor.updates() == 0) return Status::NumericalTrouble;
        if (!fresh_start(false)) return Status::NumericalTrouble;
        continue;
      }

      if (!flips.empty()) {
        std::vector<double> rhs(static_cast<std::size_t>(m), 0.0);
        for (int j : flips) {
          const bool at_lower = state[j] == VarState::AtLower;
          const double from = at_lower ? lower[j] : upper[j];
          const double to = at_lower ? upper[j] : lower[j];
          state[j] = at_lower ? VarState::AtUpper : VarState::AtLower;
          x[j] = to;
          const double step = to - from;
          for_column(j, [&](int i, double v) { rhs[i] += v * step; });
        }
        factor.ftran(rhs);
        for (int k = 0; k < m; ++k) x[head[k]] -= rhs[k];
      }

      // Primal step.
      const double theta_p = (x[p] - target) / pivot;
      x[q] += theta_p;
      for (int k = 0; k < m; ++k) {
        if (alpha_q[k] != 0.0) x[head[k]] -= theta_p * alpha_q[k];
      }
      x[p] = target;

      // Dual step.
      const double theta_d = d[q] / alpha_row[q];
      for (int j : row_touched) {
        if (state[j] == VarState::Basic) continue;
        d[j] -= theta_d * alpha_row[j];
      }
      d[q] = 0.0;
      d[p] = -theta_d;
      for (int j : row_touched) {
        if (j == q || state[j] == VarState::Basic || state[j] == VarState::Fixed) continue;
        if (dual_infeasible(j, 0.0)) {
          cost[j] -= d[j];
          d[j] = 0.0;
          shifted = true;
        }
      }

      // Dual steepest-edge weights.
      std::vector<double> tau = rho;
      factor.ftran(tau);
      double rho_norm = 0.0;
      for (double v : rho) rho_norm += v * v;
      for (int k = 0; k < m; ++k) {
        if (k == r || alpha_q[k] == 0.0) continue;
        const double ratio = alpha_q[k] / pivot;
        dse[k] = std::max(dse[k] - 2.0 * ratio * tau[k] + ratio * ratio * rho_norm, 1e-8);
      }
      dse[r] = std::max(rho_norm / (pivot * pivot), 1e-8);

      // Basis change.
      state[p] = lower[p] == upper[p] ? VarState::Fixed
                                      : (to_lower ? VarState::AtLower : VarState::AtUpper);
      state[q] = VarState::Basic;
      head[r] = q;
      factor.update(r, alpha_q);
      ++iterations;
    }
  }

  // ----------------------------------------------------------- primal simplex

  Status primal_phase() {
    bool fresh = true;
    for (;;) {
      if (iterations >= opt.max_iterations) return Status::IterationLimit;
      if (fresh || factor.updates() >= static_cast<std::size_t>(opt.refactor_interval)) {
        if ((!factor_valid || factor.updates() >= static_cast<std::size_t>(opt.refactor_interval)) && !refactor())
          return Status::NumericalTrouble;
        compute_primal();
        compute_dual();
        fresh = false;
      }

      int q = -1;
      double best = opt.dual_tolerance;
      for (int j = 0; j < total; ++j) {
        if (state[j] == VarState::Basic || state[j] == VarState::Fixed) continue;
        double score = 0.0;
        if ((state[j] == VarState::AtLower || state[j] == VarState::AtZero) && d[j] < 0.0) {
          score = -d[j];
        } else if ((state[j] == VarState::AtUpper || state[j] == VarState::AtZero) && d[j] > 0.0) {
          score = d[j];
        }
        if (score > best) {
          best = score;
          q = j;
        }
      }
      if (q < 0) return Status::Optimal;

      const double dir = d[q] < 0.0 ? 1.0 : -1.0;
      std::vector<double> alpha_q = column(q);
      factor.ftran(alpha_q);

      // Harris two-pass ratio test on basic variables.
      double bound = kInf;
      for (int k = 0; k < m; ++k) {
        const double rate = -dir * alpha_q[k];
        if (std::abs(rate) < opt.pivot_tolerance) continue;
        const int b = head[k];
        if (rate < 0.0 && std::isfinite(lower[b])) {
          bound = std::min(bound, (x[b] - lower[b] + opt.primal_tolerance) / -rate);
        } else if (rate > 0.0 && std::isfinite(upper[b])) {
          bound = std::min(bound, (upper[b] - x[b] + opt.primal_tolerance) / rate);
        }
      }
      int r = -1;
      double r_alpha = 0.0;
      double step = kInf;
      for (int k = 0; k < m; ++k) {
        const double rate = -dir * alpha_q[k];
        if (std::abs(rate) < opt.pivot_tolerance) continue;
        const int b = head[k];
        double t = kInf;
        if (rate < 0.0 && std::isfinite(lower[b])) {
          t = (x[b] - lower[b]) / -rate;
        } else if (rate > 0.0 && std::isfinite(upper[b])) {
          t = (upper[b] - x[b]) / rate;
        }
        if (std::isfinite(t) && t <= bound && std::abs(rate) > r_alpha) {
          r_alpha = std::abs(rate);
          r = k;
          step = std::max(t, 0.0);
        }
      }
      const double flip = boxed(q) ? upper[q] - lower[q] : kInf;
      if (r < 0 && !std::isfinite(flip)) return Status::Unbounded;

      if (flip <= step) {
        for (int k = 0; k < m; ++k) x[head[k]] -= dir * flip * alpha_q[k];
        state[q] = state[q] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
        x[q] = nonbasic_value(q);
        ++iterations;
        continue;
      }

      const int p = head[r];
      const double theta = dir * step;
      x[q] += theta;
      for (int k = 0; k < m; ++k) x[head[k]] -= theta * alpha_q[k];
      const bool leaves_lower = -dir * alpha_q[r] < 0.0;
      x[p] = leaves_lower ? lower[p] : upper[p];

      std::vector<double> rho(static_cast<std::size_t>(m), 0.0);
      rho[r] = 1.0;
      factor.btran(rho);
      pivot_row(rho);
      const double theta_d = d[q] / alpha_q[r];
      for (int j : row_touched) {
        if (state[j] == VarState::Basic) continue;
        d[j] -= theta_d * alpha_row[j];
      }
      d[q] = 0.0;
      d[p] = -theta_d;

      state[p] = lower[p] == upper[p] ? VarState::Fixed
                                      : (leaves_lower ? VarState::AtLower : VarState::AtUpper);
      state[q] = VarState::Basic;
      head[r] = q;
      factor.update(r, alpha_q);
      ++iterations;
    }
  }

  Status run() {
    if (!fresh_start(true, false)) {
      slack_basis();
      if (!fresh_start(true)) return last = Status::NumericalTrouble;
    }
    Status s = dual_phase();
    if (s == Status::NumericalTrouble) {
      // Retry once from the slack basis.
      slack_basis();
      if (!fresh_start(true)) return last = Status::NumericalTrouble;
      s = dual_phase();
    }
    if (s != Status::Optimal) return last = s;

    if (shifted) {
      cost = base_cost;
      shifted = false;
      if (!refactor()) return last = Status::NumericalTrouble;
      compute_primal();
      compute_dual();
      s = primal_phase();
      if (s != Status::Optimal) return last = s;
      std::fill(dse.begin(), dse.end(), 1.0);
    }
    // Final accuracy pass: recompute values rather than trust the updates.
    compute_primal();
    compute_dual();
    for (int k = 0; k < m; ++k) {
      const int p = head[k];
      if (x[p] < lower[p] - 10 * opt.primal_tolerance || x[p] > upper[p] + 10 * opt.primal_tolerance) {
        s = dual_phase();
        if (s != Status::Optimal) return last = s;
        break;
      }
    }
    return last = Status::Optimal;
  }

  void set_bounds(int j, double lo, double up) {
    lower[j] = lo / col_scale[j];
    upper[j] = up / col_scale[j];
    if (state[j] != VarState::Basic) state[j] = preferred_state(j, d[j]);
  }

  std::vector<double> structural() const {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) out[j] = x[j] * col_scale[j];
    return out;
  }
};

Solver::Solver(const Model& model, Options options)
    : impl_(std::make_unique<Impl>(model, options)) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

Status Solver::solve() { return impl_->run(); }

void Solver::set_col_bounds(int col, double lower, double upper) {
  impl_->set_bounds(col, lower, upper);
}
double Solver::col_lower(int col) const { return impl_->lower[col] * impl_->col_scale[col]; }
double Solver::col_upper(int col) const { return impl_->upper[col] * impl_->col_scale[col]; }

Basis Solver::basis() const { return Basis{impl_->state}; }

void Solver::set_basis(const Basis& basis) {
  auto& s = *impl_;
  if (basis.state.size() != static_cast<std::size_t>(s.total)) {
    throw std::invalid_argument("basis size does not match model");
  }
  std::vector<int> head;
  for (int j = 0; j < s.total; ++j) {
    if (basis.state[j] == VarState::Basic) head.push_back(j);
  }
  if (static_cast<int>(head.size()) != s.m) {
    s.slack_basis();
    return;
  }
  s.state = basis.state;
  s.head = std::move(head);
  for (int j = 0; j < s.total; ++j) {
    if (s.state[j] != VarState::Basic) s.state[j] = s.preferred_state(j, s.state[j] == VarState::AtUpper ? -1.0 : 1.0);
  }
  s.factor_valid = false;
}

Status Solver::status() const { return impl_->last; }

double Solver::objective() const {
  const auto xs = impl_->structural();
  double obj = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) obj += impl_->orig_cost[j] * xs[j];
  return obj;
}

std::vector<double> Solver::primal() const { return impl_->structural(); }

std::vector<double> Solver::row_activity() const {
  const auto& s = *impl_;
  std::vector<double> out(static_cast<std::size_t>(s.m));
  for (int i = 0; i < s.m; ++i) out[i] = s.x[s.n + i] / s.row_scale[i];
  return out;
}

std::vector<double> Solver::row_dual() const {
  const auto& s = *impl_;
  auto y = s.row_duals_scaled();
  for (int i = 0; i < s.m; ++i) y[i] *= s.row_scale[i];
  return y;
}

std::vector<double> Solver::reduced_cost() const {
  const auto& s = *impl_;
  std::vector<double> out(static_cast<std::size_t>(s.n));
  for (int j = 0; j < s.n; ++j) out[j] = s.d[j] / s.col_scale[j];
  return out;
}

long Solver::iterations() const { return impl_->iterations; }

Result solve(const Model& model, Options options) {
  Solver solver(model, options);
  Result result;
  result.status = solver.solve();
  result.iterations = solver.iterations();
  if (result.status == Status::Optimal) {
    result.x = solver.primal();
    result.objective = solver.objective();
    result.row_dual = solver.row_dual();
  }
  return result;
}

}  // namespace nexus::lp
