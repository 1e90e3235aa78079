#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kirigami/fields.hpp"
#include "kirigami/material.hpp"
#include "kirigami/mesh.hpp"
#include "kirigami/sparse.hpp"

namespace kirigami {

// Kernels run either as plain sequential loops (the reference) or with the
// per-triangle local computations parallelized over OpenMP threads followed
// by a deterministic triangle-order scatter. Both paths perform the same
// floating-point operations per triangle, so results agree to reassociation
// accuracy (tested at 1e-12 relative; in practice bit-identical).
enum class AssemblyMode { serial, parallel };

struct ProblemSpec {
  ProblemSpec(const Triangulation2D& m, MaterialModel mat)
      : mesh(&m), material(std::move(mat)) {}

  const Triangulation2D* mesh;
  MaterialModel material;
  double epsilon = 0.0;
  // Boundary data; null means identically zero.
  std::function<double(double, double)> dirichlet_data;
  std::function<double(double, double)> neumann_data;
  // Volumetric source hook for manufactured solutions; null means zero.
  std::function<double(double, double)> source;
  // Frozen-coefficient hook: replaces b_hat (epsilon is still added).
  std::optional<Diag2d> coefficient_override;
  int quadrature_order = 2;
};

struct AssembledSystem {
  SparseComplexMatrix matrix;
  std::vector<Complex> rhs;
};

// Element stiffness for the form integral over one triangle of
// coeff * grad(phi_j) . grad(phi_i); row-major 3x3.
std::array<Complex, 9> local_stiffness(const std::array<Vec2, 3>& tri,
                                       const std::function<Diag2c(Vec2)>& coeff,
                                       int quadrature_order);

// Caches the sparsity pattern, element geometry and CSR scatter slots of one
// problem so repeated assemblies inside a nonlinear loop stay cheap. All
// methods are const and safe to call concurrently.
class Assembler {
 public:
  explicit Assembler(const ProblemSpec& spec);

  const ProblemSpec& spec() const { return *spec_; }

  // Frozen-coefficient operator with Dirichlet rows/columns eliminated
  // (identity rows; column contributions moved to the rhs in system()).
  SparseComplexMatrix operator_matrix(const ComplexField& xi, AssemblyMode mode) const;

  // Operator plus lifted right-hand side; this is the linear problem one
  // Picard sweep solves.
  AssembledSystem system(const ComplexField& xi, AssemblyMode mode) const;

  // Neumann + source load before Dirichlet lifting (zero on Dirichlet rows).
  std::vector<Complex> boundary_load() const;

  // Nonlinear residual; zero entries on Dirichlet rows.
  std::vector<Complex> residual(const ComplexField& xi, AssemblyMode mode) const;

  // Jacobian of the residual on the 2N real unknowns (Re, Im interleaved:
  // dof 2i is Re(xi_i), dof 2i+1 is Im(xi_i)). The coefficient depends on
  // Re(xi) only, so the map is not complex-differentiable and the real
  // split is the well-defined derivative. Dirichlet rows/cols are identity.
  SparseRealMatrix jacobian(const ComplexField& xi, AssemblyMode mode) const;

  // Zero field with the Dirichlet data imposed (the default initial guess).
  ComplexField dirichlet_lift() const;

 private:
  void check_field(const ComplexField& xi) const;

  const ProblemSpec* spec_;
  SparseComplexMatrix pattern_;              // zero values, shared structure
  std::vector<std::array<int, 9>> slots_;    // per-triangle CSR slots
  std::vector<double> area_;
  std::vector<std::array<Vec2, 3>> grad_;    // P1 gradients per triangle
  std::vector<double> dirichlet_values_;     // xi_D at Dirichlet vertices, 0 elsewhere
};

SparseComplexMatrix assemble_operator(const ProblemSpec& spec, const ComplexField& xi,
                                      AssemblyMode mode = AssemblyMode::parallel);
AssembledSystem assemble_system(const ProblemSpec& spec, const ComplexField& xi,
                                AssemblyMode mode = AssemblyMode::parallel);
std::vector<Complex> assemble_load(const ProblemSpec& spec);
std::vector<Complex> assemble_residual(const ProblemSpec& spec, const ComplexField& xi,
                                       AssemblyMode mode = AssemblyMode::parallel);
SparseRealMatrix assemble_jacobian(const ProblemSpec& spec, const ComplexField& xi,
                                   AssemblyMode mode = AssemblyMode::parallel);

}  // namespace kirigami
