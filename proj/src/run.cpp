#include "kirigami/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "kirigami/fields.hpp"
#include "kirigami/norms.hpp"
#include "kirigami/quadrature.hpp"

namespace kirigami {

namespace manufactured {

double exact(double x, double y, double L) {
  return std::sin(M_PI * x / L) * std::cos(M_PI * y / L);
}

double source(double x, double y, double L) {
  const double k = M_PI / L;
  return (coeff_a + coeff_b) * k * k * exact(x, y, L);
}

}  // namespace manufactured

ProblemSpec build_problem(const RunConfig& cfg, const Triangulation2D& mesh) {
  MaterialModel material(cfg.alpha, cfg.beta, cfg.xi_minus, cfg.xi_plus);
  ProblemSpec spec(mesh, std::move(material));
  spec.epsilon = cfg.epsilon;
  spec.quadrature_order = cfg.quadrature_order;
  if (cfg.dirichlet.kind == DirichletData::Kind::constant) {
    const double v = cfg.dirichlet.value;
    spec.dirichlet_data = [v](double, double) { return v; };
  } else {
    const double l = cfg.dirichlet.left, r = cfg.dirichlet.right, L = cfg.L;
    spec.dirichlet_data = [l, r, L](double x, double) { return l + (r - l) * x / L; };
  }
  if (cfg.neumann != 0.0) {
    const double g = cfg.neumann;
    spec.neumann_data = [g](double, double) { return g; };
  }
  if (cfg.epsilon < 0.0) throw std::invalid_argument("run: epsilon must be >= 0");
  return spec;
}

namespace {

NonlinearSettings settings_from(const RunConfig& cfg) {
  NonlinearSettings s;
  s.r_tol = cfg.r_tol;
  s.a_tol = cfg.a_tol;
  s.max_iterations = cfg.max_iterations;
  return s;
}

std::pair<ComplexField, SolverReport> dispatch_solve(const ProblemSpec& spec,
                                                     const RunConfig& cfg) {
  const NonlinearSettings settings = settings_from(cfg);
  return cfg.solver == SolverKind::newton ? newton_solve(spec, settings)
                                          : picard_solve(spec, settings);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

RunArtifacts solve_case(const RunConfig& cfg) {
  RunArtifacts art;
  art.mesh = std::make_shared<Triangulation2D>(generate_crossed_mesh(cfg.nx, cfg.ny, cfg.L));
  const ProblemSpec spec = build_problem(cfg, *art.mesh);

  auto [xi, report] = dispatch_solve(spec, cfg);
  art.xi = std::move(xi);
  art.report = std::move(report);
  art.census = census_types(*art.mesh, spec.material, art.xi, cfg.quadrature_order);
  art.clamp_fraction = clamp_active_fraction(*art.mesh, spec.material, art.xi,
                                             cfg.quadrature_order);
  art.gamma = reconstruct_gamma(*art.mesh, spec.material, art.xi, 0);
  art.yeff = reconstruct_yeff(*art.mesh, spec.material, art.xi, art.gamma, 0);
  return art;
}

std::string format_report(const RunConfig& cfg, const RunArtifacts& art) {
  const MaterialModel material(cfg.alpha, cfg.beta, cfg.xi_minus, cfg.xi_plus);
  std::ostringstream out;
  out << "case: " << case_name(cfg.case_kind) << "\n";
  out << "solver: " << solver_name(cfg.solver) << "\n";
  out << "nx: " << cfg.nx << "\n";
  out << "ny: " << cfg.ny << "\n";
  out << "L: " << fmt(cfg.L) << "\n";
  out << "h: " << fmt(art.mesh->h()) << "\n";
  out << "dof_count: " << art.mesh->vertex_count() << "\n";
  out << "alpha: " << fmt(cfg.alpha) << "\n";
  out << "beta: " << fmt(cfg.beta) << "\n";
  out << "epsilon: " << fmt(cfg.epsilon) << "\n";
  out << "xi_minus: " << fmt(cfg.xi_minus) << "\n";
  out << "xi_plus: " << fmt(cfg.xi_plus) << "\n";
  out << "M: " << fmt(material.bound_M()) << "\n";
  out << "K: " << fmt(material.lipschitz_K()) << "\n";
  if (cfg.dirichlet.kind == DirichletData::Kind::constant)
    out << "dirichlet: constant " << fmt(cfg.dirichlet.value) << "\n";
  else
    out << "dirichlet: ramp " << fmt(cfg.dirichlet.left) << " " << fmt(cfg.dirichlet.right)
        << "\n";
  out << "neumann: " << fmt(cfg.neumann) << "\n";
  out << "quadrature_order: " << cfg.quadrature_order << "\n";
  out << "r_tol: " << fmt(cfg.r_tol) << "\n";
  out << "a_tol: " << fmt(cfg.a_tol) << "\n";
  out << "max_iterations: " << cfg.max_iterations << "\n";
  out << "converged: " << (art.report.converged ? "true" : "false") << "\n";
  out << "iterations: " << art.report.iterations << "\n";
  out << "final_relative_residual: " << fmt(art.report.final_relative_residual) << "\n";
  out << "residual_history:";
  for (double r : art.report.residual_history) out << " " << fmt(r);
  out << "\n";
  const double total = static_cast<double>(art.census.total());
  out << "census_elliptic: " << art.census.elliptic << "\n";
  out << "census_degenerate: " << art.census.degenerate << "\n";
  out << "census_hyperbolic: " << art.census.hyperbolic << "\n";
  out << "census_elliptic_fraction: " << fmt(art.census.elliptic / total) << "\n";
  out << "census_degenerate_fraction: " << fmt(art.census.degenerate / total) << "\n";
  out << "census_hyperbolic_fraction: " << fmt(art.census.hyperbolic / total) << "\n";
  out << "clamp_active_fraction: " << fmt(art.clamp_fraction) << "\n";
  return out.str();
}

int run_case(const RunConfig& cfg, std::ostream& log) {
  const RunArtifacts art = solve_case(cfg);
  const std::string prefix = cfg.output_prefix;

  export_vtk(*art.mesh, art.xi, art.gamma, art.yeff, prefix + ".vtk");
  export_csv(*art.mesh, art.xi, art.gamma, art.yeff, prefix + ".csv");
  {
    std::ofstream rep(prefix + ".report.txt");
    if (!rep) throw std::runtime_error("run: cannot open " + prefix + ".report.txt");
    rep << format_report(cfg, art);
  }

  log << "case " << case_name(cfg.case_kind) << ": "
      << (art.report.converged ? "converged" : "did NOT converge") << " in "
      << art.report.iterations << " iterations (relative residual "
      << art.report.final_relative_residual << ")\n";
  log << "wrote " << prefix << ".vtk, " << prefix << ".csv, " << prefix << ".report.txt\n";
  return art.report.converged ? 0 : 2;
}

namespace {

// L2 error against a smooth exact solution, degree-4 quadrature.
double l2_error_against(const Triangulation2D& mesh, const ComplexField& xi,
                        const std::function<double(double, double)>& exact) {
  double acc = 0.0;
  const auto& rule = triangle_rule(4);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const double area = mesh.triangle_area(t);
    for (const TriQuadPoint& q : rule) {
      const Vec2 x = q.bary[0] * mesh.vertices()[tri[0]] + q.bary[1] * mesh.vertices()[tri[1]] +
                     q.bary[2] * mesh.vertices()[tri[2]];
      Complex uh = 0.0;
      for (int k = 0; k < 3; ++k) uh += q.bary[k] * xi.values[tri[k]];
      acc += area * q.weight * std::norm(uh - exact(x.x, x.y));
    }
  }
  return std::sqrt(acc);
}

}  // namespace

std::vector<StudyLevel> run_study(const RunConfig& cfg) {
  if (cfg.levels < 3) throw std::invalid_argument("study: levels must be >= 3");

  std::vector<StudyLevel> out;
  std::shared_ptr<Triangulation2D> prev_mesh;
  ComplexField prev_xi;
  for (int k = 0; k < cfg.levels; ++k) {
    StudyLevel lv;
    lv.nx = 8 << k;
    auto mesh = std::make_shared<Triangulation2D>(generate_crossed_mesh(lv.nx, lv.nx, cfg.L));
    RunConfig level_cfg = cfg;
    level_cfg.nx = level_cfg.ny = lv.nx;
    ProblemSpec spec = build_problem(level_cfg, *mesh);
    if (cfg.manufactured) {
      const double L = cfg.L;
      spec.coefficient_override = Diag2d{manufactured::coeff_a, manufactured::coeff_b};
      spec.epsilon = 0.0;
      spec.dirichlet_data = [](double, double) { return 0.0; };
      spec.neumann_data = nullptr;
      spec.source = [L](double x, double y) { return manufactured::source(x, y, L); };
      level_cfg.solver = SolverKind::newton;  // linear problem
    }
    auto [xi, report] = dispatch_solve(spec, level_cfg);
    if (!report.converged)
      throw std::runtime_error("study: solver did not converge at nx = " +
                               std::to_string(lv.nx));
    lv.h = mesh->h();
    lv.dofs = mesh->vertex_count();
    lv.iterations = report.iterations;
    if (cfg.manufactured) {
      const double L = cfg.L;
      lv.l2_error = l2_error_against(
          *mesh, xi, [L](double x, double y) { return manufactured::exact(x, y, L); });
    } else if (k > 0) {
      // Coarse-to-fine nodal interpolation is exact for nested crossed meshes.
      const ComplexField coarse_on_fine = interpolate_to(prev_xi, *mesh);
      std::vector<Complex> diff(xi.values.size());
      for (size_t i = 0; i < diff.size(); ++i)
        diff[i] = xi.values[i] - coarse_on_fine.values[i];
      FieldNorms norms(*mesh);
      lv.cauchy_l2 = norms.l2(diff);
      lv.cauchy_v = norms.v_norm(diff);
    }
    prev_mesh = mesh;
    prev_xi = std::move(xi);
    out.push_back(lv);
  }
  return out;
}

int convergence_study(const RunConfig& cfg, std::ostream& out) {
  const std::vector<StudyLevel> levels = run_study(cfg);

  out << std::left;
  if (cfg.manufactured) {
    out << "manufactured frozen-coefficient study (diag(" << manufactured::coeff_a << ", "
        << manufactured::coeff_b << "), exact sin/cos solution)\n";
    out << std::setw(8) << "nx" << std::setw(12) << "h" << std::setw(10) << "dofs"
        << std::setw(8) << "iters" << std::setw(16) << "l2_error" << std::setw(10) << "order"
        << "\n";
    for (size_t k = 0; k < levels.size(); ++k) {
      const StudyLevel& lv = levels[k];
      out << std::setw(8) << lv.nx << std::setw(12) << lv.h << std::setw(10) << lv.dofs
          << std::setw(8) << lv.iterations << std::setw(16) << lv.l2_error;
      if (k > 0)
        out << std::setw(10) << std::log2(levels[k - 1].l2_error / lv.l2_error);
      else
        out << std::setw(10) << "-";
      out << "\n";
    }
  } else {
    out << "refinement study, case " << case_name(cfg.case_kind) << "\n";
    out << std::setw(8) << "nx" << std::setw(12) << "h" << std::setw(10) << "dofs"
        << std::setw(8) << "iters" << std::setw(16) << "cauchy_l2" << std::setw(16)
        << "cauchy_v" << std::setw(10) << "order_l2" << "\n";
    for (size_t k = 0; k < levels.size(); ++k) {
      const StudyLevel& lv = levels[k];
      out << std::setw(8) << lv.nx << std::setw(12) << lv.h << std::setw(10) << lv.dofs
          << std::setw(8) << lv.iterations;
      if (k > 0) {
        out << std::setw(16) << lv.cauchy_l2 << std::setw(16) << lv.cauchy_v;
        if (k > 1)
          out << std::setw(10) << std::log2(levels[k - 1].cauchy_l2 / lv.cauchy_l2);
        else
          out << std::setw(10) << "-";
      } else {
        out << std::setw(16) << "-" << std::setw(16) << "-" << std::setw(10) << "-";
      }
      out << "\n";
    }
  }
  return 0;
}

int epsilon_sweep(const RunConfig& cfg, std::ostream& out) {
  out << std::left;
  out << std::setw(12) << "epsilon" << std::setw(12) << "converged" << std::setw(8) << "iters"
      << std::setw(16) << "v_norm" << std::setw(16) << "im_l2" << "\n";
  bool all_ok = true;
  for (double eps : cfg.epsilons) {
    RunConfig row_cfg = cfg;
    row_cfg.epsilon = eps;
    try {
      const RunArtifacts art = solve_case(row_cfg);
      FieldNorms norms(*art.mesh);
      std::vector<Complex> im(art.xi.values.size());
      for (size_t i = 0; i < im.size(); ++i) im[i] = Complex(art.xi.values[i].imag(), 0.0);
      out << std::setw(12) << eps << std::setw(12)
          << (art.report.converged ? "true" : "false") << std::setw(8)
          << art.report.iterations << std::setw(16) << norms.v_norm(art.xi) << std::setw(16)
          << norms.l2(im) << "\n";
      if (!art.report.converged) all_ok = false;
    } catch (const std::exception& e) {
      out << std::setw(12) << eps << "failed: " << e.what() << "\n";
      all_ok = false;
    }
  }
  return all_ok ? 0 : 2;
}

}  // namespace kirigami
