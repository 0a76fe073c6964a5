#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace nexus::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min c'x  s.t.  row_lower <= A x <= row_upper,  col_lower <= x <= col_upper.
class Model {
 public:
  int add_col(double cost, double lower, double upper);
  /// Coefficients are (column, value) pairs; duplicates are summed.
  int add_row(double lower, double upper, std::span<const std::pair<int, double>> coefs);

  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(row_lower.size()); }

  std::vector<double> cost;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<double> row_lower;
  std::vector<double> row_upper;
  // Row-major storage: row_start has num_rows()+1 entries.
  std::vector<int> row_start{0};
  std::vector<int> row_col;
  std::vector<double> row_value;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit, NumericalTrouble };

const char* to_string(Status status);

struct Options {
  double primal_tolerance = 1e-7;
  double dual_tolerance = 1e-7;
  double pivot_tolerance = 1e-7;
  int max_iterations = 500000;
  int refactor_interval = 100;
  bool scale = true;
};

/// Basis statuses; stored per structural column then per row logical.
enum class VarState : std::int8_t { Basic, AtLower, AtUpper, AtZero, Fixed };

struct Basis {
  std::vector<VarState> state;  // size cols + rows
  bool empty() const { return state.empty(); }
};

/// Bounded revised simplex: dual simplex for the main phase and for warm
/// restarts after bound changes, primal simplex to clean up after cost
/// shifting. Column bounds may be changed between solves.
class Solver {
 public:
  explicit Solver(const Model& model, Options options = {});
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  Status solve();

  void set_col_bounds(int col, double lower, double upper);
  double col_lower(int col) const;
  double col_upper(int col) const;

  Basis basis() const;
  /// Installs a basis previously obtained from basis() on the same model.
  void set_basis(const Basis& basis);

  Status status() const;
  double objective() const;
  std::vector<double> primal() const;          // structural values
  std::vector<double> row_activity() const;    // A x
  std::vector<double> row_dual() const;        // y
  std::vector<double> reduced_cost() const;    // c - A'y
  long iterations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct Result {
  Status status = Status::NumericalTrouble;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> row_dual;
  long iterations = 0;
};

/// One-shot convenience wrapper.
Result solve(const Model& model, Options options = {});

}  // namespace nexus::lp
