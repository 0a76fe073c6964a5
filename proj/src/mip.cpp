#include "nexus/mip.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <queue>

namespace nexus::mip {

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::GapLimitReached: return "gap-limit";
    case Status::TimeLimit: return "time-limit";
    case Status::NodeLimit: return "node-limit";
    case Status::Infeasible: return "infeasible";
    case Status::NoIncumbent: return "no-incumbent";
  }
  return "unknown";
}

namespace {

struct Fix {
  int col;
  double lower;
  double upper;
};

// The branching step that created a node, kept so the child's LP value can
// feed the pseudocosts once it is solved.
struct Step {
  int col = -1;
  bool up = false;
  double change = 0.0;  // distance the variable was pushed
  double parent = 0.0;  // parent LP objective
};

struct Node {
  double bound;
  long seq;
  std::vector<Fix> fixes;
  lp::Basis basis;
  Step step;
};

// Per-variable average objective gain per unit change, separately for the
// down and up branches. Unobserved variables borrow the mean over observed
// ones, so the rule starts out as most-fractional.
class Pseudocosts {
 public:
  Pseudocosts(int cols) : sum_{std::vector<double>(cols), std::vector<double>(cols)},
                          count_{std::vector<int>(cols), std::vector<int>(cols)} {}

  void record(const Step& step, double child) {
    if (step.col < 0 || step.change <= 0.0) return;
    const double gain = std::max(0.0, child - step.parent) / step.change;
    sum_[step.up][step.col] += gain;
    ++count_[step.up][step.col];
    total_[step.up] += gain;
    ++observed_[step.up];
  }

  double estimate(int col, bool up) const {
    if (count_[up][col] > 0) return sum_[up][col] / count_[up][col];
    return observed_[up] > 0 ? total_[up] / observed_[up] : 1.0;
  }

 private:
  std::vector<double> sum_[2];
  std::vector<int> count_[2];
  double total_[2] = {0.0, 0.0};
  long observed_[2] = {0, 0};
};

struct WorseBound {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

}  // namespace

Result solve(const lp::Model& model, const std::vector<int>& integers, const Options& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  lp::Solver solver(model, options.lp);
  Result result;
  double incumbent = lp::kInf;
  double pruned_bound = lp::kInf;  // smallest bound among nodes dropped by the gap rule

  auto cutoff = [&] {
    if (!std::isfinite(incumbent)) return options.cutoff;
    return incumbent - options.gap_target * std::max(1.0, std::abs(incumbent));
  };

  auto accept = [&](double obj, std::vector<double> x, const char* how) {
    if (options.log) {
      std::fprintf(stderr, "[mip] %s incumbent %.6g at node %ld (%.1fs)\n", how, obj, result.nodes, elapsed());
    }
    incumbent = obj;
    result.x = std::move(x);
    for (int j : integers) result.x[j] = std::round(result.x[j]);
    result.objective = obj;
  };

  // Neighbourhood search: fix the integers on which `x` agrees with the
  // incumbent and solve what is left with a small node budget.
  double heuristic_s = 0.0;
  auto rins = [&](const std::vector<double>& x) {
    if (!options.heuristics || !result.has_solution()) return;
    const double budget = std::min(0.25 * options.time_limit_s - heuristic_s,
                                   options.time_limit_s - elapsed());
    if (budget <= 0.05 * options.time_limit_s / 4) return;
    lp::Model sub = model;
    std::size_t fixed = 0;
    for (int j : integers) {
      if (std::abs(x[j] - result.x[j]) < 0.1) {
        sub.col_lower[j] = sub.col_upper[j] = result.x[j];
        ++fixed;
      }
    }
    if (fixed == integers.size() || fixed * 10 < integers.size() * 3) return;
    Options so = options;
    so.heuristics = false;
    so.log = false;
    so.node_limit = 500;
    so.time_limit_s = std::min(budget, 0.1 * options.time_limit_s);
    so.cutoff = incumbent - 1e-9 * std::max(1.0, std::abs(incumbent));
    const double t0 = elapsed();
    const auto r = solve(sub, integers, so);
    heuristic_s += elapsed() - t0;
    if (r.has_solution() && r.objective < incumbent) accept(r.objective, r.x, "neighbourhood");
  };

  std::vector<double> root_x;
  long next_rins = 0;

  std::vector<int> applied;
  auto apply = [&](const std::vector<Fix>& fixes) {
    for (int col : applied) solver.set_col_bounds(col, model.col_lower[col], model.col_upper[col]);
    applied.clear();
    for (const auto& f : fixes) {
      solver.set_col_bounds(f.col, f.lower, f.upper);
      applied.push_back(f.col);
    }
  };

  Pseudocosts pseudo(model.num_cols());
  std::priority_queue<Node, std::vector<Node>, WorseBound> open;
  long seq = 0;
  open.push(Node{-lp::kInf, seq++, {}, {}, {}});
  bool stopped = false;
  double stop_bound = lp::kInf;

  while (!open.empty() && !stopped) {
    Node node = open.top();
    open.pop();
    if (node.bound >= cutoff()) {
      pruned_bound = std::min(pruned_bound, node.bound);
      continue;
    }
    apply(node.fixes);
    if (!node.basis.empty()) solver.set_basis(node.basis);
    std::vector<Fix> fixes = std::move(node.fixes);
    double dive_bound = node.bound;
    Step step = node.step;

    for (;;) {
      if (elapsed() > options.time_limit_s || result.nodes >= options.node_limit) {
        stopped = true;
        result.status = elapsed() > options.time_limit_s ? Status::TimeLimit : Status::NodeLimit;
        stop_bound = dive_bound;
        break;
      }
      const auto st = solver.solve();
      ++result.nodes;
      if (st != lp::Status::Optimal) {
        if (st == lp::Status::Unbounded && result.nodes == 1) {
          result.status = Status::Infeasible;
          return result;
        }
        break;  // infeasible (or numerically hopeless) subtree
      }
      const double obj = solver.objective();
      pseudo.record(step, obj);
      dive_bound = obj;
      if (obj >= cutoff()) {
        if (std::isfinite(incumbent)) pruned_bound = std::min(pruned_bound, obj);
        break;
      }
      const auto x = solver.primal();
      if (root_x.empty()) root_x = x;
      if (result.has_solution() && result.nodes >= next_rins) {
        next_rins = result.nodes + 300;
        rins(x);
        if (obj >= cutoff()) {
          pruned_bound = std::min(pruned_bound, obj);
          break;
        }
      }

      // Product rule on the pseudocost estimates of both children.
      int branch = -1;
      double best_score = -1.0;
      for (int j : integers) {
        const double frac = x[j] - std::floor(x[j]);
        if (std::min(frac, 1.0 - frac) <= options.integrality_tolerance) continue;
        const double score = std::max(pseudo.estimate(j, false) * frac, 1e-6) *
                             std::max(pseudo.estimate(j, true) * (1.0 - frac), 1e-6);
        if (score > best_score * (1.0 + 1e-12)) {
          best_score = score;
          branch = j;
        }
      }
      if (branch < 0) {
        const bool first = !result.has_solution();
        accept(obj, x, "dive");
        if (first) rins(root_x);
        next_rins = result.nodes + 300;
        break;
      }

      const double v = x[branch];
      const double down = std::floor(v);
      const double up = std::ceil(v);
      const bool go_up = v - down >= 0.5;
      auto other = fixes;
      if (go_up) {
        other.push_back({branch, model.col_lower[branch], down});
      } else {
        other.push_back({branch, up, model.col_upper[branch]});
      }
      open.push(Node{obj, seq++, std::move(other), solver.basis(),
                     Step{branch, !go_up, go_up ? v - down : up - v, obj}});
      step = Step{branch, go_up, go_up ? up - v : v - down, obj};
      const Fix chosen = go_up ? Fix{branch, up, model.col_upper[branch]}
                               : Fix{branch, model.col_lower[branch], down};
      fixes.push_back(chosen);
      solver.set_col_bounds(chosen.col, chosen.lower, chosen.upper);
      applied.push_back(chosen.col);
    }
  }
  result.lp_iterations = solver.iterations();

  if (!result.has_solution()) {
    if (!stopped) {
      result.status = Status::Infeasible;
    } else {
      result.status = Status::NoIncumbent;
    }
    return result;
  }

  double bound = std::min(incumbent, pruned_bound);
  if (stopped) {
    bound = std::min(bound, stop_bound);
    if (!open.empty()) bound = std::min(bound, open.top().bound);
  }
  result.bound = bound;
  result.gap = std::max(0.0, (incumbent - bound) / std::max(1.0, std::abs(incumbent)));
  if (!stopped) result.status = pruned_bound < incumbent ? Status::GapLimitReached : Status::Optimal;
  return result;
}

}  // namespace nexus::mip
