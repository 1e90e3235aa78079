#include "kirigami/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kirigami {

namespace {
constexpr double kBaryTol = 1e-10;
}

P1Locator::P1Locator(const Triangulation2D& mesh) : mesh_(&mesh) {
  double x1 = -1e300, y1 = -1e300;
  x0_ = 1e300;
  y0_ = 1e300;
  for (const Vec2& v : mesh.vertices()) {
    x0_ = std::min(x0_, v.x);
    y0_ = std::min(y0_, v.y);
    x1 = std::max(x1, v.x);
    y1 = std::max(y1, v.y);
  }
  const int target = std::max(1, static_cast<int>(std::sqrt(mesh.triangle_count())));
  nx_ = target;
  ny_ = target;
  cell_ = std::max((x1 - x0_) / nx_, (y1 - y0_) / ny_);
  if (cell_ <= 0.0) cell_ = 1.0;
  bins_.assign(static_cast<size_t>(nx_) * ny_, {});

  auto bin_of = [&](double x, double y, int& bi, int& bj) {
    bi = std::clamp(static_cast<int>((x - x0_) / cell_), 0, nx_ - 1);
    bj = std::clamp(static_cast<int>((y - y0_) / cell_), 0, ny_ - 1);
  };
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    double bx0 = 1e300, by0 = 1e300, bx1 = -1e300, by1 = -1e300;
    for (int k = 0; k < 3; ++k) {
      const Vec2 p = mesh.vertices()[tri[k]];
      bx0 = std::min(bx0, p.x);
      by0 = std::min(by0, p.y);
      bx1 = std::max(bx1, p.x);
      by1 = std::max(by1, p.y);
    }
    int i0, j0, i1, j1;
    bin_of(bx0, by0, i0, j0);
    bin_of(bx1, by1, i1, j1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) bins_[static_cast<size_t>(j) * nx_ + i].push_back(t);
  }
}

int P1Locator::locate(Vec2 p, std::array<double, 3>& bary) const {
  const int bi = std::clamp(static_cast<int>((p.x - x0_) / cell_), 0, nx_ - 1);
  const int bj = std::clamp(static_cast<int>((p.y - y0_) / cell_), 0, ny_ - 1);
  int best = -1;
  double best_min = -1e300;
  for (int t : bins_[static_cast<size_t>(bj) * nx_ + bi]) {
    const auto& tri = mesh_->triangles()[t];
    const Vec2 p0 = mesh_->vertices()[tri[0]];
    const Vec2 p1 = mesh_->vertices()[tri[1]];
    const Vec2 p2 = mesh_->vertices()[tri[2]];
    const double det = cross(p1 - p0, p2 - p0);
    const double l1 = cross(p - p0, p2 - p0) / det;
    const double l2 = cross(p1 - p0, p - p0) / det;
    const double l0 = 1.0 - l1 - l2;
    const double lmin = std::min({l0, l1, l2});
    if (lmin > best_min) {
      best_min = lmin;
      best = t;
      bary = {l0, l1, l2};
    }
  }
  if (best < 0 || best_min < -kBaryTol) return -1;
  return best;
}

Complex P1Locator::evaluate(const ComplexField& field, Vec2 p) const {
  std::array<double, 3> bary;
  const int t = locate(p, bary);
  if (t < 0) throw std::runtime_error("P1Locator: point outside mesh");
  const auto& tri = mesh_->triangles()[t];
  return bary[0] * field.values[tri[0]] + bary[1] * field.values[tri[1]] +
         bary[2] * field.values[tri[2]];
}

ComplexField interpolate_to(const ComplexField& field, const Triangulation2D& target) {
  P1Locator locator(*field.mesh);
  ComplexField out(target);
  for (int v = 0; v < target.vertex_count(); ++v)
    out.values[v] = locator.evaluate(field, target.vertices()[v]);
  return out;
}

}  // namespace kirigami
