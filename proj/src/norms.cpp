#include "kirigami/norms.hpp"

#include <algorithm>
#include <cmath>

namespace kirigami {

FieldNorms::FieldNorms(const Triangulation2D& mesh) {
  const int nv = mesh.vertex_count();
  std::vector<std::vector<int>> adj(nv);
  for (int v = 0; v < nv; ++v) adj[v].push_back(v);
  for (const auto& tri : mesh.triangles())
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) adj[tri[a]].push_back(tri[b]);

  stiffness_.rows = stiffness_.cols = nv;
  stiffness_.row_ptr.assign(nv + 1, 0);
  for (int v = 0; v < nv; ++v) {
    auto& row = adj[v];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    stiffness_.row_ptr[v + 1] = stiffness_.row_ptr[v] + static_cast<int>(row.size());
  }
  for (int v = 0; v < nv; ++v)
    stiffness_.col_idx.insert(stiffness_.col_idx.end(), adj[v].begin(), adj[v].end());
  stiffness_.values.assign(stiffness_.col_idx.size(), 0.0);
  mass_ = stiffness_;

  for (const auto& tri : mesh.triangles()) {
    const Vec2 p0 = mesh.vertices()[tri[0]];
    const Vec2 d1 = mesh.vertices()[tri[1]] - p0;
    const Vec2 d2 = mesh.vertices()[tri[2]] - p0;
    const double det = cross(d1, d2);
    const double area = 0.5 * det;
    std::array<Vec2, 3> g;
    g[1] = {d2.y / det, -d2.x / det};
    g[2] = {-d1.y / det, d1.x / det};
    g[0] = {-g[1].x - g[2].x, -g[1].y - g[2].y};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        stiffness_.coeff(tri[i], tri[j]) += area * dot(g[i], g[j]);
        mass_.coeff(tri[i], tri[j]) += area / 12.0 * (i == j ? 2.0 : 1.0);
      }
    }
  }
}

double FieldNorms::quadratic_form(const SparseRealMatrix& m, const std::vector<Complex>& v) const {
  double acc = 0.0;
  for (int i = 0; i < m.rows; ++i) {
    Complex row = 0.0;
    for (int s = m.row_ptr[i]; s < m.row_ptr[i + 1]; ++s) row += m.values[s] * v[m.col_idx[s]];
    acc += (std::conj(v[i]) * row).real();
  }
  return std::max(acc, 0.0);
}

double FieldNorms::l2(const std::vector<Complex>& values) const {
  return std::sqrt(quadratic_form(mass_, values));
}

double FieldNorms::h1_semi(const std::vector<Complex>& values) const {
  return std::sqrt(quadratic_form(stiffness_, values));
}

double FieldNorms::v_norm(const std::vector<Complex>& values) const {
  return std::sqrt(quadratic_form(mass_, values) + quadratic_form(stiffness_, values));
}

double vector_norm2(const std::vector<Complex>& v) {
  double acc = 0.0;
  for (const Complex& z : v) acc += std::norm(z);
  return std::sqrt(acc);
}

double vector_norm2(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace kirigami
