#pragma once

#include <array>
#include <vector>

#include "kirigami/geometry.hpp"
#include "kirigami/mesh.hpp"

namespace kirigami {

// Nodal complex coefficients of a P1 field on a mesh.
struct ComplexField {
  const Triangulation2D* mesh = nullptr;
  std::vector<Complex> values;

  ComplexField() = default;
  explicit ComplexField(const Triangulation2D& m)
      : mesh(&m), values(m.vertex_count(), Complex(0.0, 0.0)) {}
};

struct ScalarField {
  const Triangulation2D* mesh = nullptr;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const Triangulation2D& m) : mesh(&m), values(m.vertex_count(), 0.0) {}
};

struct VectorField2 {
  const Triangulation2D* mesh = nullptr;
  std::vector<Vec2> values;

  VectorField2() = default;
  explicit VectorField2(const Triangulation2D& m) : mesh(&m), values(m.vertex_count()) {}
};

// Point location on a triangulation via a uniform background grid over the
// bounding box. Read-only after construction.
class P1Locator {
 public:
  explicit P1Locator(const Triangulation2D& mesh);

  // Triangle containing p (within tolerance), with barycentric coordinates;
  // -1 if p lies outside the mesh.
  int locate(Vec2 p, std::array<double, 3>& bary) const;

  Complex evaluate(const ComplexField& field, Vec2 p) const;

 private:
  const Triangulation2D* mesh_;
  double x0_, y0_, cell_;
  int nx_, ny_;
  std::vector<std::vector<int>> bins_;
};

// Nodal interpolation of a field onto another mesh of the same domain.
ComplexField interpolate_to(const ComplexField& field, const Triangulation2D& target);

}  // namespace kirigami
