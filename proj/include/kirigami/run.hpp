#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "kirigami/config.hpp"
#include "kirigami/postprocess.hpp"
#include "kirigami/solver.hpp"

namespace kirigami {

// Material and boundary data of a configured run, bound to a mesh.
ProblemSpec build_problem(const RunConfig& cfg, const Triangulation2D& mesh);

struct RunArtifacts {
  std::shared_ptr<Triangulation2D> mesh;
  ComplexField xi;
  ScalarField gamma;
  VectorField2 yeff;
  SolverReport report;
  TypeCensus census;
  double clamp_fraction = 0.0;
};

// Solve + post-process one configured case (no file output).
RunArtifacts solve_case(const RunConfig& cfg);

// Stable key: value report text; byte-identical for identical configs
// (wall time is deliberately excluded).
std::string format_report(const RunConfig& cfg, const RunArtifacts& artifacts);

// Full pipeline: writes <prefix>.vtk, <prefix>.csv, <prefix>.report.txt.
// Returns 0 on convergence, 2 on non-convergence (artifacts still written).
// Invalid input surfaces as std::invalid_argument.
int run_case(const RunConfig& cfg, std::ostream& log);

struct StudyLevel {
  int nx = 0;
  double h = 0.0;
  int dofs = 0;
  int iterations = 0;
  double l2_error = 0.0;   // manufactured mode: error against the exact solution
  double cauchy_l2 = 0.0;  // general mode: distance to the previous level
  double cauchy_v = 0.0;
};

// Mesh refinement study over nx = 8, 16, ... (cfg.levels entries, >= 3).
// With cfg.manufactured, solves the frozen-coefficient problem with a known
// exact solution and reports L2 errors and observed orders; otherwise
// reports Cauchy differences between consecutive levels.
std::vector<StudyLevel> run_study(const RunConfig& cfg);
int convergence_study(const RunConfig& cfg, std::ostream& out);  // runs + prints

// One row per epsilon, in input order: converged, iterations, V-norm,
// L2 norm of Im(xi). Per-row failures are recorded and the sweep continues.
int epsilon_sweep(const RunConfig& cfg, std::ostream& out);

// Manufactured study pieces, exposed for verification tests.
namespace manufactured {
constexpr double coeff_a = 1.5;
constexpr double coeff_b = 0.8;
double exact(double x, double y, double L);
double source(double x, double y, double L);
}  // namespace manufactured

}  // namespace kirigami
