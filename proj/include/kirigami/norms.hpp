#pragma once

#include <vector>

#include "kirigami/fields.hpp"
#include "kirigami/sparse.hpp"

namespace kirigami {

// P1 mass and identity-coefficient stiffness matrices of a mesh, used for
// L2 / H1 norms of nodal fields. Assembled once, then read-only.
class FieldNorms {
 public:
  explicit FieldNorms(const Triangulation2D& mesh);

  double l2(const std::vector<Complex>& values) const;
  double h1_semi(const std::vector<Complex>& values) const;
  double v_norm(const std::vector<Complex>& values) const;  // sqrt(l2^2 + semi^2)

  double l2(const ComplexField& f) const { return l2(f.values); }
  double h1_semi(const ComplexField& f) const { return h1_semi(f.values); }
  double v_norm(const ComplexField& f) const { return v_norm(f.values); }

  const SparseRealMatrix& stiffness() const { return stiffness_; }
  const SparseRealMatrix& mass() const { return mass_; }

 private:
  double quadratic_form(const SparseRealMatrix& m, const std::vector<Complex>& v) const;

  SparseRealMatrix stiffness_;
  SparseRealMatrix mass_;
};

double vector_norm2(const std::vector<Complex>& v);
double vector_norm2(const std::vector<double>& v);

}  // namespace kirigami
