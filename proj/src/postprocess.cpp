#include "kirigami/postprocess.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "kirigami/parallel.hpp"
#include "kirigami/quadrature.hpp"

namespace kirigami {

namespace {

// Anchored normal equations of the gradient least-squares problem: the
// identity-coefficient stiffness with one pinned vertex. Factorized once and
// reused for every right-hand side.
class GradientProjector {
 public:
  GradientProjector(const Triangulation2D& mesh, int anchor, int quadrature_order)
      : mesh_(&mesh), anchor_(anchor), order_(quadrature_order) {
    if (anchor < 0 || anchor >= mesh.vertex_count())
      throw std::invalid_argument("reconstruct: anchor vertex out of range");
    const int nv = mesh.vertex_count();

    area_.resize(mesh.triangle_count());
    grad_.resize(mesh.triangle_count());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.triangle_count() * 9 + 1);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const auto& tri = mesh.triangles()[t];
      const Vec2 p0 = mesh.vertices()[tri[0]];
      const Vec2 d1 = mesh.vertices()[tri[1]] - p0;
      const Vec2 d2 = mesh.vertices()[tri[2]] - p0;
      const double det = cross(d1, d2);
      area_[t] = 0.5 * det;
      grad_[t][1] = {d2.y / det, -d2.x / det};
      grad_[t][2] = {-d1.y / det, d1.x / det};
      grad_[t][0] = {-grad_[t][1].x - grad_[t][2].x, -grad_[t][1].y - grad_[t][2].y};
      for (int i = 0; i < 3; ++i) {
        if (tri[i] == anchor) continue;
        for (int j = 0; j < 3; ++j) {
          if (tri[j] == anchor) continue;
          trip.emplace_back(tri[i], tri[j], area_[t] * dot(grad_[t][i], grad_[t][j]));
        }
      }
    }
    trip.emplace_back(anchor, anchor, 1.0);
    normal_.resize(nv, nv);
    normal_.setFromTriplets(trip.begin(), trip.end());
    lu_.analyzePattern(normal_);
    lu_.factorize(normal_);
    if (lu_.info() != Eigen::Success)
      throw std::runtime_error("reconstruct: singular normal equations (" +
                               lu_.lastErrorMessage() + "); is the mesh connected?");
  }

  ScalarField solve(const std::function<Vec2(int, Vec2)>& target) const {
    const int nv = mesh_->vertex_count();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nv);
    const auto& rule = triangle_rule(order_);
    for (int t = 0; t < mesh_->triangle_count(); ++t) {
      const auto& tri = mesh_->triangles()[t];
      for (const TriQuadPoint& q : rule) {
        const Vec2 x = q.bary[0] * mesh_->vertices()[tri[0]] +
                       q.bary[1] * mesh_->vertices()[tri[1]] +
                       q.bary[2] * mesh_->vertices()[tri[2]];
        const Vec2 tv = target(t, x);
        for (int i = 0; i < 3; ++i) {
          if (tri[i] == anchor_) continue;
          rhs[tri[i]] += area_[t] * q.weight * dot(tv, grad_[t][i]);
        }
      }
    }
    Eigen::VectorXd sol = lu_.solve(rhs);
    ScalarField out(*mesh_);
    for (int v = 0; v < nv; ++v) out.values[v] = sol[v];
    out.values[anchor_] = 0.0;
    return out;
  }

 private:
  const Triangulation2D* mesh_;
  int anchor_;
  int order_;
  std::vector<double> area_;
  std::vector<std::array<Vec2, 3>> grad_;
  Eigen::SparseMatrix<double> normal_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

std::array<double, 3> barycentric(const Triangulation2D& mesh, const std::array<int, 3>& tri,
                                  Vec2 x) {
  const Vec2 p0 = mesh.vertices()[tri[0]];
  const Vec2 d1 = mesh.vertices()[tri[1]] - p0;
  const Vec2 d2 = mesh.vertices()[tri[2]] - p0;
  const double det = cross(d1, d2);
  std::array<double, 3> b;
  b[1] = cross(x - p0, d2) / det;
  b[2] = cross(d1, x - p0) / det;
  b[0] = 1.0 - b[1] - b[2];
  return b;
}

}  // namespace

ScalarField reconstruct_potential(const Triangulation2D& mesh,
                                  const std::function<Vec2(int, Vec2)>& target,
                                  int anchor_vertex, int quadrature_order) {
  return GradientProjector(mesh, anchor_vertex, quadrature_order).solve(target);
}

ScalarField reconstruct_gamma(const Triangulation2D& mesh, const MaterialModel& material,
                              const ComplexField& xi, int anchor_vertex) {
  if (xi.mesh != &mesh) throw std::invalid_argument("reconstruct_gamma: field/mesh mismatch");
  const double active = clamp_active_fraction(mesh, material, xi);
  if (active > 0.0)
    std::cerr << "reconstruct_gamma: warning: cut-off clamp active on "
              << active * 100.0 << "% of quadrature points; Gamma(xi) uses the "
                 "clamped coefficients there\n";

  std::vector<double> re(xi.values.size());
  for (size_t i = 0; i < re.size(); ++i) re[i] = xi.values[i].real();

  GradientProjector projector(mesh, anchor_vertex, 2);
  return projector.solve([&](int t, Vec2 x) {
    // Per-triangle constant gradient of Re(xi); Gamma evaluated pointwise
    // at the clamped interpolated value.
    const auto& tri = mesh.triangles()[t];
    const Vec2 p0 = mesh.vertices()[tri[0]];
    const Vec2 d1 = mesh.vertices()[tri[1]] - p0;
    const Vec2 d2 = mesh.vertices()[tri[2]] - p0;
    const double det = cross(d1, d2);
    const Vec2 g1 = {d2.y / det, -d2.x / det};
    const Vec2 g2 = {-d1.y / det, d1.x / det};
    const Vec2 g0 = {-g1.x - g2.x, -g1.y - g2.y};
    const Vec2 grad = {re[tri[0]] * g0.x + re[tri[1]] * g1.x + re[tri[2]] * g2.x,
                       re[tri[0]] * g0.y + re[tri[1]] * g1.y + re[tri[2]] * g2.y};
    const auto bary = barycentric(mesh, tri, x);
    const double u = bary[0] * re[tri[0]] + bary[1] * re[tri[1]] + bary[2] * re[tri[2]];
    const double uc = material.clamp(u);
    const double g12 = material.gamma12(uc);
    const double g21 = material.gamma21(uc);
    return Vec2{g12 * grad.y, g21 * grad.x};
  });
}

VectorField2 reconstruct_yeff(const Triangulation2D& mesh, const MaterialModel& material,
                              const ComplexField& xi, const ScalarField& gamma,
                              int anchor_vertex) {
  if (xi.mesh != &mesh || gamma.mesh != &mesh)
    throw std::invalid_argument("reconstruct_yeff: field/mesh mismatch");

  // A_eff is kinematic and uses the raw xi; flag excursions past the cut-off.
  double out_of_range = 0.0;
  for (const Complex& z : xi.values)
    if (z.real() < material.xi_minus() || z.real() > material.xi_plus()) out_of_range += 1.0;
  if (out_of_range > 0.0)
    std::cerr << "reconstruct_yeff: warning: Re(xi) leaves the cut-off interval at "
              << out_of_range << " vertices; A_eff is evaluated on the raw values\n";

  GradientProjector projector(mesh, anchor_vertex, 2);
  const auto row = [&](int component) {
    return [&, component](int t, Vec2 x) {
      const auto& tri = mesh.triangles()[t];
      const auto bary = barycentric(mesh, tri, x);
      const double g = bary[0] * gamma.values[tri[0]] + bary[1] * gamma.values[tri[1]] +
                       bary[2] * gamma.values[tri[2]];
      const double u = bary[0] * xi.values[tri[0]].real() + bary[1] * xi.values[tri[1]].real() +
                       bary[2] * xi.values[tri[2]].real();
      const Diag2d a = material.a_eff(u);
      const double c = std::cos(g), s = std::sin(g);
      // Row `component` of R(gamma) * diag(mu1, mu2).
      if (component == 0) return Vec2{c * a.d11, -s * a.d22};
      return Vec2{s * a.d11, c * a.d22};
    };
  };

  const ScalarField y0 = projector.solve(row(0));
  const ScalarField y1 = projector.solve(row(1));
  VectorField2 out(mesh);
  for (int v = 0; v < mesh.vertex_count(); ++v) out.values[v] = {y0.values[v], y1.values[v]};
  return out;
}

namespace {

void check_export_fields(const Triangulation2D& mesh, const ComplexField& xi,
                         const ScalarField& gamma, const VectorField2& yeff) {
  if (xi.mesh != &mesh || gamma.mesh != &mesh || yeff.mesh != &mesh)
    throw std::invalid_argument("export: fields do not share the mesh");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void export_vtk(const Triangulation2D& mesh, const ComplexField& xi, const ScalarField& gamma,
                const VectorField2& yeff, const std::string& path) {
  check_export_fields(mesh, xi, gamma, yeff);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_vtk: cannot open " + path);

  out << "# vtk DataFile Version 3.0\n";
  out << "kirigami slit-opening solution\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const Vec2& v : mesh.vertices()) out << fmt(v.x) << " " << fmt(v.y) << " 0\n";
  out << "CELLS " << mesh.triangle_count() << " " << 4 * mesh.triangle_count() << "\n";
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "CELL_TYPES " << mesh.triangle_count() << "\n";
  for (int t = 0; t < mesh.triangle_count(); ++t) out << "5\n";
  out << "POINT_DATA " << mesh.vertex_count() << "\n";
  out << "SCALARS xi_re double 1\nLOOKUP_TABLE default\n";
  for (const Complex& z : xi.values) out << fmt(z.real()) << "\n";
  out << "SCALARS xi_im double 1\nLOOKUP_TABLE default\n";
  for (const Complex& z : xi.values) out << fmt(z.imag()) << "\n";
  out << "SCALARS gamma double 1\nLOOKUP_TABLE default\n";
  for (double g : gamma.values) out << fmt(g) << "\n";
  out << "VECTORS yeff double\n";
  for (const Vec2& v : yeff.values) out << fmt(v.x) << " " << fmt(v.y) << " 0\n";
  if (!out) throw std::runtime_error("export_vtk: write failed for " + path);
}

void export_csv(const Triangulation2D& mesh, const ComplexField& xi, const ScalarField& gamma,
                const VectorField2& yeff, const std::string& path) {
  check_export_fields(mesh, xi, gamma, yeff);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_csv: cannot open " + path);
  out << "vertex,x,y,xi_re,xi_im,gamma,yeff_x,yeff_y\n";
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const Vec2 p = mesh.vertices()[v];
    out << v << "," << fmt(p.x) << "," << fmt(p.y) << "," << fmt(xi.values[v].real()) << ","
        << fmt(xi.values[v].imag()) << "," << fmt(gamma.values[v]) << ","
        << fmt(yeff.values[v].x) << "," << fmt(yeff.values[v].y) << "\n";
  }
  if (!out) throw std::runtime_error("export_csv: write failed for " + path);
}

TypeCensus census_types(const Triangulation2D& mesh, const MaterialModel& material,
                        const ComplexField& xi, int quadrature_order) {
  if (xi.mesh != &mesh) throw std::invalid_argument("census_types: field/mesh mismatch");
  const auto& rule = triangle_rule(quadrature_order);
  const int nt = mesh.triangle_count();
  long long ell = 0, deg = 0, hyp = 0;
#pragma omp parallel for schedule(static) reduction(+ : ell, deg, hyp) \
    num_threads(thread_count())
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles()[t];
    for (const TriQuadPoint& q : rule) {
      const double u = q.bary[0] * xi.values[tri[0]].real() +
                       q.bary[1] * xi.values[tri[1]].real() +
                       q.bary[2] * xi.values[tri[2]].real();
      switch (material.classify_type(u)) {
        case PdeType::elliptic: ++ell; break;
        case PdeType::degenerate: ++deg; break;
        case PdeType::hyperbolic: ++hyp; break;
      }
    }
  }
  return {ell, deg, hyp};
}

double clamp_active_fraction(const Triangulation2D& mesh, const MaterialModel& material,
                             const ComplexField& xi, int quadrature_order) {
  if (xi.mesh != &mesh) throw std::invalid_argument("clamp_active_fraction: field/mesh mismatch");
  const auto& rule = triangle_rule(quadrature_order);
  const int nt = mesh.triangle_count();
  long long active = 0, total = 0;
#pragma omp parallel for schedule(static) reduction(+ : active, total) \
    num_threads(thread_count())
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles()[t];
    for (const TriQuadPoint& q : rule) {
      const double u = q.bary[0] * xi.values[tri[0]].real() +
                       q.bary[1] * xi.values[tri[1]].real() +
                       q.bary[2] * xi.values[tri[2]].real();
      if (u < material.xi_minus() || u > material.xi_plus()) ++active;
      ++total;
    }
  }
  return total ? static_cast<double>(active) / static_cast<double>(total) : 0.0;
}

}  // namespace kirigami
