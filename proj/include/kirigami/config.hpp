#pragma once

#include <string>
#include <vector>

namespace kirigami {

enum class CaseKind { auxetic, non_auxetic, mixed, custom };
enum class SolverKind { newton, picard };

const char* case_name(CaseKind k);
const char* solver_name(SolverKind s);

struct DirichletData {
  enum class Kind { constant, ramp };
  Kind kind = Kind::constant;
  double value = 0.0;
  double left = 0.0;   // ramp value at x = 0
  double right = 0.0;  // ramp value at x = L
};

struct RunConfig {
  CaseKind case_kind = CaseKind::custom;
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  int nx = 64;
  int ny = 64;
  double L = 1.5;
  double xi_minus = -0.78539816339744831;  // -pi/4
  double xi_plus = 1.0471975511965976;     // pi/3
  DirichletData dirichlet;
  double neumann = 0.0;
  double r_tol = 1e-8;
  double a_tol = 1e-14;
  int max_iterations = 50;
  SolverKind solver = SolverKind::newton;
  int quadrature_order = 2;
  std::string output_prefix = "run";
  bool manufactured = false;    // study: frozen-coefficient case with exact solution
  int levels = 4;               // study refinement levels
  std::vector<double> epsilons; // sweep values
};

// Pre-fills alpha, beta, epsilon, r_tol of the named experiment
// (auxetic: -0.9/0.9/0/1e-8, non_auxetic: -0.9/0/0.5/1e-6,
//  mixed: -1.6/0.4/0.071/1e-6); everything is overridable afterwards.
void apply_preset(RunConfig& cfg, CaseKind kind);

// Applies one `key = value` pair; throws std::invalid_argument on an unknown
// key or unparsable value. `case` applies the preset before later keys.
void apply_key_value(RunConfig& cfg, const std::string& key, const std::string& value);

// Plain-text config: one `key = value` per line, '#' comments. Errors carry
// 1-based line numbers.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::string& path);

}  // namespace kirigami
