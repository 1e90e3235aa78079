#include "kirigami/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kirigami/parallel.hpp"
#include "kirigami/quadrature.hpp"

namespace kirigami {

namespace {

constexpr double kDegenerateAreaFactor = 1e-14;

struct TriGeom {
  double area;
  std::array<Vec2, 3> grad;
};

TriGeom triangle_geometry(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
  const Vec2 d1 = p1 - p0, d2 = p2 - p0;
  const double det = cross(d1, d2);
  const double longest = std::max({norm(d1), norm(d2), norm(p2 - p1)});
  if (det <= kDegenerateAreaFactor * longest * longest)
    throw std::invalid_argument("assembly: degenerate triangle");
  TriGeom g;
  g.area = 0.5 * det;
  g.grad[1] = {d2.y / det, -d2.x / det};
  g.grad[2] = {-d1.y / det, d1.x / det};
  g.grad[0] = {-g.grad[1].x - g.grad[2].x, -g.grad[1].y - g.grad[2].y};
  return g;
}

}  // namespace

std::array<Complex, 9> local_stiffness(const std::array<Vec2, 3>& tri,
                                       const std::function<Diag2c(Vec2)>& coeff,
                                       int quadrature_order) {
  const TriGeom g = triangle_geometry(tri[0], tri[1], tri[2]);
  Complex c11 = 0.0, c22 = 0.0;
  for (const TriQuadPoint& q : triangle_rule(quadrature_order)) {
    const Vec2 x = q.bary[0] * tri[0] + q.bary[1] * tri[1] + q.bary[2] * tri[2];
    const Diag2c c = coeff(x);
    c11 += q.weight * c.d11;
    c22 += q.weight * c.d22;
  }
  std::array<Complex, 9> k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      k[i * 3 + j] = g.area * (c11 * g.grad[j].x * g.grad[i].x + c22 * g.grad[j].y * g.grad[i].y);
  return k;
}

Assembler::Assembler(const ProblemSpec& spec) : spec_(&spec) {
  const Triangulation2D& mesh = *spec.mesh;
  const int nv = mesh.vertex_count();
  const int nt = mesh.triangle_count();

  // Vertex adjacency (including self) defines the CSR pattern.
  std::vector<std::vector<int>> adj(nv);
  for (int v = 0; v < nv; ++v) adj[v].push_back(v);
  for (const auto& tri : mesh.triangles())
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) adj[tri[a]].push_back(tri[b]);

  pattern_.rows = pattern_.cols = nv;
  pattern_.row_ptr.assign(nv + 1, 0);
  for (int v = 0; v < nv; ++v) {
    auto& row = adj[v];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    pattern_.row_ptr[v + 1] = pattern_.row_ptr[v] + static_cast<int>(row.size());
  }
  pattern_.col_idx.reserve(pattern_.row_ptr[nv]);
  for (int v = 0; v < nv; ++v)
    pattern_.col_idx.insert(pattern_.col_idx.end(), adj[v].begin(), adj[v].end());
  pattern_.values.assign(pattern_.col_idx.size(), Complex(0.0));

  slots_.resize(nt);
  area_.resize(nt);
  grad_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles()[t];
    const TriGeom g =
        triangle_geometry(mesh.vertices()[tri[0]], mesh.vertices()[tri[1]], mesh.vertices()[tri[2]]);
    area_[t] = g.area;
    grad_[t] = g.grad;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) slots_[t][i * 3 + j] = pattern_.find(tri[i], tri[j]);
  }

  dirichlet_values_.assign(nv, 0.0);
  for (int v : mesh.dirichlet_vertices()) {
    const Vec2 p = mesh.vertices()[v];
    dirichlet_values_[v] = spec.dirichlet_data ? spec.dirichlet_data(p.x, p.y) : 0.0;
  }
}

void Assembler::check_field(const ComplexField& xi) const {
  if (xi.mesh != spec_->mesh ||
      xi.values.size() != static_cast<size_t>(spec_->mesh->vertex_count()))
    throw std::invalid_argument("assembly: field does not live on the problem mesh");
}

namespace {

// Averaged diagonal coefficient (b_hat(Re xi) + i eps) over the quadrature
// rule of one triangle, and optionally the transport factors
// t[j] = sum_q w_q * db_hat(u_q) * phi_j(q) used by the Jacobian.
struct CoeffAverages {
  Complex c11, c22;
  std::array<double, 3> t11, t22;
};

CoeffAverages averaged_coefficient(const ProblemSpec& spec, const ComplexField& xi,
                                   const std::array<int, 3>& tri,
                                   const std::vector<TriQuadPoint>& rule, bool with_derivative) {
  CoeffAverages out{};
  const double u0 = xi.values[tri[0]].real();
  const double u1 = xi.values[tri[1]].real();
  const double u2 = xi.values[tri[2]].real();
  for (const TriQuadPoint& q : rule) {
    const double u = q.bary[0] * u0 + q.bary[1] * u1 + q.bary[2] * u2;
    Diag2d b;
    if (spec.coefficient_override)
      b = *spec.coefficient_override;
    else
      b = spec.material.b_hat(u);
    out.c11 += q.weight * b.d11;
    out.c22 += q.weight * b.d22;
    if (with_derivative && !spec.coefficient_override) {
      const Diag2d db = spec.material.db_hat_dxi(u);
      for (int j = 0; j < 3; ++j) {
        out.t11[j] += q.weight * db.d11 * q.bary[j];
        out.t22[j] += q.weight * db.d22 * q.bary[j];
      }
    }
  }
  out.c11 += Complex(0.0, spec.epsilon);
  out.c22 += Complex(0.0, spec.epsilon);
  return out;
}

}  // namespace

std::vector<Complex> Assembler::boundary_load() const {
  const Triangulation2D& mesh = *spec_->mesh;
  std::vector<Complex> load(mesh.vertex_count(), Complex(0.0));
  if (spec_->neumann_data) {
    for (const BoundaryEdge& be : mesh.boundary_edges()) {
      if (is_dirichlet(be.tag)) continue;
      const Vec2 pa = mesh.vertices()[be.a], pb = mesh.vertices()[be.b];
      const double len = norm(pb - pa);
      for (const EdgeQuadPoint& q : edge_rule()) {
        const Vec2 p = pa + q.t * (pb - pa);
        const double g = spec_->neumann_data(p.x, p.y);
        load[be.a] += q.weight * len * g * (1.0 - q.t);
        load[be.b] += q.weight * len * g * q.t;
      }
    }
  }
  if (spec_->source) {
    const auto& rule = triangle_rule(spec_->quadrature_order);
    for (int t = 0; t < mesh.triangle_count(); ++t) {
      const auto& tri = mesh.triangles()[t];
      for (const TriQuadPoint& q : rule) {
        const Vec2 x = q.bary[0] * mesh.vertices()[tri[0]] + q.bary[1] * mesh.vertices()[tri[1]] +
                       q.bary[2] * mesh.vertices()[tri[2]];
        const double f = spec_->source(x.x, x.y);
        for (int i = 0; i < 3; ++i) load[tri[i]] += area_[t] * q.weight * f * q.bary[i];
      }
    }
  }
  for (int v : mesh.dirichlet_vertices()) load[v] = Complex(0.0);
  return load;
}

AssembledSystem Assembler::system(const ComplexField& xi, AssemblyMode mode) const {
  check_field(xi);
  const Triangulation2D& mesh = *spec_->mesh;
  const int nt = mesh.triangle_count();
  const auto& rule = triangle_rule(spec_->quadrature_order);

  SparseComplexMatrix A = pattern_;

  auto local = [&](int t, std::array<Complex, 9>& k) {
    const auto& tri = mesh.triangles()[t];
    const CoeffAverages c = averaged_coefficient(*spec_, xi, tri, rule, false);
    const auto& g = grad_[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        k[i * 3 + j] =
            area_[t] * (c.c11 * g[j].x * g[i].x + c.c22 * g[j].y * g[i].y);
  };

  if (mode == AssemblyMode::serial) {
    std::array<Complex, 9> k;
    for (int t = 0; t < nt; ++t) {
      local(t, k);
      for (int e = 0; e < 9; ++e) A.values[slots_[t][e]] += k[e];
    }
  } else {
    std::vector<std::array<Complex, 9>> locals(nt);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int t = 0; t < nt; ++t) local(t, locals[t]);
    for (int t = 0; t < nt; ++t)
      for (int e = 0; e < 9; ++e) A.values[slots_[t][e]] += locals[t][e];
  }

  std::vector<Complex> rhs = boundary_load();

  // Dirichlet elimination: move tagged columns to the rhs, then overwrite
  // tagged rows with identity. Keeps the matrix structurally symmetric.
  for (int i = 0; i < A.rows; ++i) {
    if (mesh.vertex_is_dirichlet(i)) continue;
    for (int s = A.row_ptr[i]; s < A.row_ptr[i + 1]; ++s) {
      const int j = A.col_idx[s];
      if (mesh.vertex_is_dirichlet(j)) {
        rhs[i] -= A.values[s] * dirichlet_values_[j];
        A.values[s] = Complex(0.0);
      }
    }
  }
  for (int d : mesh.dirichlet_vertices()) {
    for (int s = A.row_ptr[d]; s < A.row_ptr[d + 1]; ++s)
      A.values[s] = (A.col_idx[s] == d) ? Complex(1.0) : Complex(0.0);
    rhs[d] = dirichlet_values_[d];
  }
  return {std::move(A), std::move(rhs)};
}

SparseComplexMatrix Assembler::operator_matrix(const ComplexField& xi, AssemblyMode mode) const {
  return system(xi, mode).matrix;
}

std::vector<Complex> Assembler::residual(const ComplexField& xi, AssemblyMode mode) const {
  check_field(xi);
  const Triangulation2D& mesh = *spec_->mesh;
  const int nt = mesh.triangle_count();
  const auto& rule = triangle_rule(spec_->quadrature_order);

  std::vector<Complex> F(mesh.vertex_count(), Complex(0.0));

  auto local = [&](int t, std::array<Complex, 3>& r) {
    const auto& tri = mesh.triangles()[t];
    const CoeffAverages c = averaged_coefficient(*spec_, xi, tri, rule, false);
    const auto& g = grad_[t];
    Complex gx = 0.0, gy = 0.0;
    for (int k = 0; k < 3; ++k) {
      gx += xi.values[tri[k]] * g[k].x;
      gy += xi.values[tri[k]] * g[k].y;
    }
    for (int i = 0; i < 3; ++i)
      r[i] = area_[t] * (c.c11 * gx * g[i].x + c.c22 * gy * g[i].y);
  };

  if (mode == AssemblyMode::serial) {
    std::array<Complex, 3> r;
    for (int t = 0; t < nt; ++t) {
      local(t, r);
      const auto& tri = mesh.triangles()[t];
      for (int i = 0; i < 3; ++i) F[tri[i]] += r[i];
    }
  } else {
    std::vector<std::array<Complex, 3>> locals(nt);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int t = 0; t < nt; ++t) local(t, locals[t]);
    for (int t = 0; t < nt; ++t) {
      const auto& tri = mesh.triangles()[t];
      for (int i = 0; i < 3; ++i) F[tri[i]] += locals[t][i];
    }
  }

  const std::vector<Complex> load = boundary_load();
  for (int v = 0; v < mesh.vertex_count(); ++v) F[v] -= load[v];
  for (int d : mesh.dirichlet_vertices()) F[d] = Complex(0.0);
  return F;
}

SparseRealMatrix Assembler::jacobian(const ComplexField& xi, AssemblyMode mode) const {
  check_field(xi);
  const Triangulation2D& mesh = *spec_->mesh;
  const int nv = mesh.vertex_count();
  const int nt = mesh.triangle_count();
  const auto& rule = triangle_rule(spec_->quadrature_order);

  // 2N pattern: each scalar entry (i, j) expands to a 2x2 block.
  SparseRealMatrix J;
  J.rows = J.cols = 2 * nv;
  J.row_ptr.assign(2 * nv + 1, 0);
  for (int i = 0; i < nv; ++i) {
    const int n = pattern_.row_ptr[i + 1] - pattern_.row_ptr[i];
    J.row_ptr[2 * i + 1] = J.row_ptr[2 * i] + 2 * n;
    J.row_ptr[2 * i + 2] = J.row_ptr[2 * i + 1] + 2 * n;
  }
  J.col_idx.resize(J.row_ptr[2 * nv]);
  for (int i = 0; i < nv; ++i) {
    int s0 = J.row_ptr[2 * i], s1 = J.row_ptr[2 * i + 1];
    for (int s = pattern_.row_ptr[i]; s < pattern_.row_ptr[i + 1]; ++s) {
      const int j = pattern_.col_idx[s];
      J.col_idx[s0++] = 2 * j;
      J.col_idx[s0++] = 2 * j + 1;
      J.col_idx[s1++] = 2 * j;
      J.col_idx[s1++] = 2 * j + 1;
    }
  }
  J.values.assign(J.col_idx.size(), 0.0);

  // Slot of block entry (2i+a, 2j+b) given the scalar slot s of (i, j).
  auto block_slot = [&](int i, int a, int s, int b) {
    const int pos = s - pattern_.row_ptr[i];
    return J.row_ptr[2 * i + a] + 2 * pos + b;
  };

  struct LocalJac {
    std::array<Complex, 9> P;  // principal: (b_hat + i eps) grad-grad
    std::array<Complex, 9> T;  // transport: db_hat * phi_j * grad(xi) . grad(phi_i)
  };

  auto local = [&](int t, LocalJac& lj) {
    const auto& tri = mesh.triangles()[t];
    const CoeffAverages c = averaged_coefficient(*spec_, xi, tri, rule, true);
    const auto& g = grad_[t];
    Complex gx = 0.0, gy = 0.0;
    for (int k = 0; k < 3; ++k) {
      gx += xi.values[tri[k]] * g[k].x;
      gy += xi.values[tri[k]] * g[k].y;
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        lj.P[i * 3 + j] =
            area_[t] * (c.c11 * g[j].x * g[i].x + c.c22 * g[j].y * g[i].y);
        lj.T[i * 3 + j] =
            area_[t] * (c.t11[j] * gx * g[i].x + c.t22[j] * gy * g[i].y);
      }
    }
  };

  auto scatter = [&](int t, const LocalJac& lj) {
    const auto& tri = mesh.triangles()[t];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int s = slots_[t][i * 3 + j];
        const Complex P = lj.P[i * 3 + j], T = lj.T[i * 3 + j];
        J.values[block_slot(tri[i], 0, s, 0)] += P.real() + T.real();
        J.values[block_slot(tri[i], 0, s, 1)] += -P.imag();
        J.values[block_slot(tri[i], 1, s, 0)] += P.imag() + T.imag();
        J.values[block_slot(tri[i], 1, s, 1)] += P.real();
      }
    }
  };

  if (mode == AssemblyMode::serial) {
    LocalJac lj;
    for (int t = 0; t < nt; ++t) {
      local(t, lj);
      scatter(t, lj);
    }
  } else {
    std::vector<LocalJac> locals(nt);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int t = 0; t < nt; ++t) local(t, locals[t]);
    for (int t = 0; t < nt; ++t) scatter(t, locals[t]);
  }

  // Dirichlet rows and columns (both real and imaginary dofs) to identity.
  std::vector<char> dmask(2 * nv, 0);
  for (int d : mesh.dirichlet_vertices()) dmask[2 * d] = dmask[2 * d + 1] = 1;
  for (int r = 0; r < 2 * nv; ++r) {
    for (int s = J.row_ptr[r]; s < J.row_ptr[r + 1]; ++s) {
      if (dmask[r])
        J.values[s] = (J.col_idx[s] == r) ? 1.0 : 0.0;
      else if (dmask[J.col_idx[s]])
        J.values[s] = 0.0;
    }
  }
  return J;
}

ComplexField Assembler::dirichlet_lift() const {
  ComplexField xi(*spec_->mesh);
  for (int v : spec_->mesh->dirichlet_vertices()) xi.values[v] = dirichlet_values_[v];
  return xi;
}

SparseComplexMatrix assemble_operator(const ProblemSpec& spec, const ComplexField& xi,
                                      AssemblyMode mode) {
  return Assembler(spec).operator_matrix(xi, mode);
}

AssembledSystem assemble_system(const ProblemSpec& spec, const ComplexField& xi,
                                AssemblyMode mode) {
  return Assembler(spec).system(xi, mode);
}

std::vector<Complex> assemble_load(const ProblemSpec& spec) {
  return Assembler(spec).boundary_load();
}

std::vector<Complex> assemble_residual(const ProblemSpec& spec, const ComplexField& xi,
                                       AssemblyMode mode) {
  return Assembler(spec).residual(xi, mode);
}

SparseRealMatrix assemble_jacobian(const ProblemSpec& spec, const ComplexField& xi,
                                   AssemblyMode mode) {
  return Assembler(spec).jacobian(xi, mode);
}

}  // namespace kirigami
