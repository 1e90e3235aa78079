#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "kirigami/assembly.hpp"

namespace kirigami {

struct SolverReport {
  int iterations = 0;
  std::vector<double> residual_history;  // iterations + 1 entries
  bool converged = false;
  double final_relative_residual = 0.0;
  double wall_time_seconds = 0.0;
};

struct NonlinearSettings {
  double r_tol = 1e-8;
  double a_tol = 1e-14;
  int max_iterations = 50;
  double damping = 1.0;  // initial Newton step scale, halved on rejection
  std::optional<ComplexField> initial_guess;  // default: zero with Dirichlet data imposed
  AssemblyMode mode = AssemblyMode::parallel;
};

// Sparse LU with partial pivoting and fill-reducing ordering; refines until
// the residual meets 1e-10 relative. Throws on a singular matrix, naming the
// offending pivot/column.
std::vector<Complex> solve_linear(const SparseComplexMatrix& A, const std::vector<Complex>& b);
std::vector<double> solve_linear(const SparseRealMatrix& A, const std::vector<double>& b);

// Fixed-point iteration: each sweep solves the linear problem with the
// coefficient frozen at the previous iterate. Stops when the V-norm step
// drops below r_tol times the first step, or the residual test passes.
std::pair<ComplexField, SolverReport> picard_solve(const ProblemSpec& spec,
                                                   const NonlinearSettings& settings);

// Damped Newton on the 2N real unknowns. Step halving (up to 8) enforces a
// non-increasing residual; a failed line search or two consecutive
// sub-0.1% reductions trigger one Picard sweep before resuming.
std::pair<ComplexField, SolverReport> newton_solve(const ProblemSpec& spec,
                                                   const NonlinearSettings& settings);

}  // namespace kirigami
