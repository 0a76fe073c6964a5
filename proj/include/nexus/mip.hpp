#pragma once

#include <vector>

#include "nexus/lp.hpp"

namespace nexus::mip {

struct Options {
  double gap_target = 1e-3;        // relative
  double time_limit_s = 300.0;
  long node_limit = 200000;
  double integrality_tolerance = 1e-6;
  bool log = false;  // progress lines on stderr
  bool heuristics = true;  // sub-MIP neighbourhood search around the incumbent
  double cutoff = lp::kInf;  // only solutions strictly below this are of interest
  lp::Options lp;
};

enum class Status { Optimal, GapLimitReached, TimeLimit, NodeLimit, Infeasible, NoIncumbent };

const char* to_string(Status status);

struct Result {
  Status status = Status::NoIncumbent;
  double objective = 0.0;  // of the incumbent, in model costs
  double bound = 0.0;      // best proven lower bound
  double gap = 0.0;        // (objective - bound) / max(1, |objective|)
  std::vector<double> x;
  long nodes = 0;
  long lp_iterations = 0;

  bool has_solution() const { return !x.empty(); }
};

/// Branch-and-bound over dual simplex relaxations. `integers` lists the
/// binary/integer columns eligible for branching; the most fractional one is
/// branched on (ties broken by position in the list). Nodes are explored by a
/// depth-first dive, then best-bound backtracking. Once an incumbent exists,
/// a relaxation-induced neighbourhood (integers where LP and incumbent agree
/// are fixed) is searched as a small sub-MIP from time to time.
Result solve(const lp::Model& model, const std::vector<int>& integers, const Options& options = {});

}  // namespace nexus::mip
