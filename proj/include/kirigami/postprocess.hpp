#pragma once

#include <functional>
#include <string>

#include "kirigami/fields.hpp"
#include "kirigami/material.hpp"
#include "kirigami/mesh.hpp"

namespace kirigami {

// Global least squares: the P1 field minimizing the L2 misfit between its
// gradient and the given target vector field (evaluated per triangle at
// quadrature points), pinned to zero at anchor_vertex.
ScalarField reconstruct_potential(const Triangulation2D& mesh,
                                  const std::function<Vec2(int tri, Vec2 x)>& target,
                                  int anchor_vertex, int quadrature_order = 2);

// Panel rotation from grad(gamma) = Gamma(xi) grad(xi), with
// Gamma = [[0, gamma12], [gamma21, 0]] on the clamped coefficients. Warns on
// stderr if the clamp was active anywhere (reconstruction fidelity degrades).
ScalarField reconstruct_gamma(const Triangulation2D& mesh, const MaterialModel& material,
                              const ComplexField& xi, int anchor_vertex);

// Effective deformation from grad(y_eff) = R(gamma) A_eff(xi); A_eff uses the
// raw (unclamped) xi. The two component problems share one factorization.
VectorField2 reconstruct_yeff(const Triangulation2D& mesh, const MaterialModel& material,
                              const ComplexField& xi, const ScalarField& gamma,
                              int anchor_vertex);

// VTK legacy ASCII unstructured grid with point data xi_re, xi_im, gamma
// (scalars) and yeff (vectors).
void export_vtk(const Triangulation2D& mesh, const ComplexField& xi, const ScalarField& gamma,
                const VectorField2& yeff, const std::string& path);

// CSV with header vertex,x,y,xi_re,xi_im,gamma,yeff_x,yeff_y.
void export_csv(const Triangulation2D& mesh, const ComplexField& xi, const ScalarField& gamma,
                const VectorField2& yeff, const std::string& path);

struct TypeCensus {
  long long elliptic = 0;
  long long degenerate = 0;
  long long hyperbolic = 0;

  long long total() const { return elliptic + degenerate + hyperbolic; }
};

// Classification of the frozen operator at every quadrature point of the
// field; the observable that distinguishes the preset patterns.
TypeCensus census_types(const Triangulation2D& mesh, const MaterialModel& material,
                        const ComplexField& xi, int quadrature_order = 2);

// Share of quadrature points at which the cut-off clamp is active.
double clamp_active_fraction(const Triangulation2D& mesh, const MaterialModel& material,
                             const ComplexField& xi, int quadrature_order = 2);

}  // namespace kirigami
