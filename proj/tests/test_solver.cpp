#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "kirigami/norms.hpp"
#include "kirigami/solver.hpp"

using namespace kirigami;

namespace {

MaterialModel preset_material(double alpha, double beta) {
  // The mixed pattern (alpha = -1.6) has a mu1 pole at -atan(1/1.6); use the
  // narrower cut-off its preset ships with.
  const double xi_minus = alpha < -1.0 ? -M_PI / 8 : -M_PI / 4;
  return {alpha, beta, xi_minus, M_PI / 3};
}

SparseComplexMatrix from_dense(const std::vector<std::vector<Complex>>& dense) {
  const int n = static_cast<int>(dense.size());
  SparseComplexMatrix m;
  m.rows = m.cols = n;
  m.row_ptr.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (dense[i][j] != Complex(0.0) || dense[j][i] != Complex(0.0)) {
        m.col_idx.push_back(j);
        m.values.push_back(dense[i][j]);
      }
    }
    m.row_ptr[i + 1] = static_cast<int>(m.col_idx.size());
  }
  return m;
}

// Dense complex LU with partial pivoting; the independent reference route.
std::vector<Complex> dense_lu_solve(std::vector<std::vector<Complex>> a,
                                    std::vector<Complex> b) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < n; ++i) {
      const Complex f = a[i][k] / a[k][k];
      for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<Complex> x(n);
  for (int i = n - 1; i >= 0; --i) {
    Complex acc = b[i];
    for (int j = i + 1; j < n; ++j) acc -= a[i][j] * x[j];
    x[i] = acc / a[i][i];
  }
  return x;
}

ProblemSpec ramp_problem(const Triangulation2D& mesh, MaterialModel material, double eps,
                         double left, double right, double L) {
  ProblemSpec spec(mesh, std::move(material));
  spec.epsilon = eps;
  spec.dirichlet_data = [left, right, L](double x, double) {
    return left + (right - left) * x / L;
  };
  return spec;
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("solve_linear basics") {
  SUBCASE("identity") {
    std::vector<std::vector<Complex>> dense(3, std::vector<Complex>(3, 0.0));
    for (int i = 0; i < 3; ++i) dense[i][i] = 1.0;
    const std::vector<Complex> b = {Complex(1, 2), Complex(-3, 0.5), Complex(0, -1)};
    const auto x = solve_linear(from_dense(dense), b);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(x[i] - b[i]) < 1e-14);
  }
  SUBCASE("(1+i) times identity") {
    std::vector<std::vector<Complex>> dense(4, std::vector<Complex>(4, 0.0));
    for (int i = 0; i < 4; ++i) dense[i][i] = Complex(1, 1);
    const std::vector<Complex> b(4, Complex(1, 0));
    const auto x = solve_linear(from_dense(dense), b);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(x[i] - Complex(0.5, -0.5)) < 1e-14);
  }
  SUBCASE("random sparse system against the dense LU oracle") {
    const int n = 50;
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<std::vector<Complex>> dense(n, std::vector<Complex>(n, 0.0));
    for (int k = 0; k < 6 * n; ++k) {
      const int i = pick(rng), j = pick(rng);
      // pattern-symmetric, values independent
      dense[i][j] = Complex(dist(rng), dist(rng));
      if (dense[j][i] == Complex(0.0)) dense[j][i] = Complex(dist(rng), dist(rng));
    }
    for (int i = 0; i < n; ++i) dense[i][i] += 8.0;  // safely nonsingular
    std::vector<Complex> b(n);
    for (auto& v : b) v = Complex(dist(rng), dist(rng));

    const auto x = solve_linear(from_dense(dense), b);
    const auto ref = dense_lu_solve(dense, b);
    double rnorm = 0.0, bnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      Complex r = b[i];
      for (int j = 0; j < n; ++j) r -= dense[i][j] * x[j];
      rnorm += std::norm(r);
      bnorm += std::norm(b[i]);
      CHECK(std::abs(x[i] - ref[i]) < 1e-10);
    }
    CHECK(std::sqrt(rnorm) <= 1e-10 * std::sqrt(bnorm));
  }
  SUBCASE("singular matrix reported") {
    std::vector<std::vector<Complex>> dense = {{1.0, 1.0}, {1.0, 1.0}};
    CHECK_THROWS_WITH_AS(solve_linear(from_dense(dense), {1.0, 2.0}),
                         doctest::Contains("singular"), std::runtime_error);
  }
  SUBCASE("dimension mismatch") {
    std::vector<std::vector<Complex>> dense = {{1.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(solve_linear(from_dense(dense), {1.0}), std::invalid_argument);
  }
}

TEST_CASE("settings validation") {
  const auto mesh = generate_crossed_mesh(2, 2, 1.0);
  ProblemSpec spec(mesh, preset_material(-0.9, 0.9));
  spec.dirichlet_data = [](double, double) { return 0.1; };
  NonlinearSettings s;
  s.r_tol = 0.0;
  CHECK_THROWS_AS(newton_solve(spec, s), std::invalid_argument);
  s = {};
  s.max_iterations = 0;
  CHECK_THROWS_AS(picard_solve(spec, s), std::invalid_argument);
  s = {};
  s.damping = 0.0;
  CHECK_THROWS_AS(newton_solve(spec, s), std::invalid_argument);
  s = {};
  ComplexField bad(mesh);  // zero everywhere, violates xi_D = 0.1
  s.initial_guess = bad;
  CHECK_THROWS_AS(newton_solve(spec, s), std::invalid_argument);
}

TEST_CASE("frozen coefficient: picard converges in one sweep") {
  const auto mesh = generate_crossed_mesh(8, 8, 1.5);
  // Single-point cut-off makes b_hat globally constant.
  ProblemSpec spec = ramp_problem(mesh, MaterialModel(-0.9, 0.4, 0.0, 0.0), 0.0, 0.1, 0.4, 1.5);
  NonlinearSettings s;
  s.r_tol = 1e-8;
  const auto [xi, report] = picard_solve(spec, s);
  CHECK(report.converged);
  CHECK(report.iterations == 1);
  CHECK(report.residual_history.size() == 2);
}

TEST_CASE("frozen coefficient: newton converges in one iteration") {
  const auto mesh = generate_crossed_mesh(8, 8, 1.5);
  for (double right : {0.2, 0.5}) {
    ProblemSpec spec =
        ramp_problem(mesh, preset_material(-0.9, 0.9), 0.3, 0.05, right, 1.5);
    spec.coefficient_override = Diag2d{1.4, 0.6};
    NonlinearSettings s;
    s.r_tol = 1e-10;
    const auto [xi, report] = newton_solve(spec, s);
    CHECK(report.converged);
    CHECK(report.iterations == 1);
  }
}

TEST_CASE("small-data picard contraction") {
  // Shrinking the boundary data never increases the iteration count.
  const auto mesh = generate_crossed_mesh(16, 16, 1.5);
  int prev = 1 << 20;
  for (double delta : {1.0, 0.5, 0.25, 0.125}) {
    ProblemSpec spec = ramp_problem(mesh, preset_material(-0.9, 0.9), 0.0, 0.1 * delta,
                                    0.5 * delta, 1.5);
    NonlinearSettings s;
    s.r_tol = 1e-8;
    s.max_iterations = 200;
    const auto [xi, report] = picard_solve(spec, s);
    CHECK(report.converged);
    CHECK(report.iterations <= prev);
    prev = report.iterations;
  }
}

TEST_CASE("newton residual history is monotone and sized") {
  const auto mesh = generate_crossed_mesh(16, 16, 1.5);
  ProblemSpec spec = ramp_problem(mesh, preset_material(-0.9, 0.9), 0.0, 0.1, 0.5, 1.5);
  NonlinearSettings s;
  s.r_tol = 1e-8;
  const auto [xi, report] = newton_solve(spec, s);
  CHECK(report.converged);
  REQUIRE(report.residual_history.size() == static_cast<size_t>(report.iterations) + 1);
  for (size_t k = 1; k < report.residual_history.size(); ++k)
    CHECK(report.residual_history[k] <= report.residual_history[k - 1]);
  CHECK(report.final_relative_residual <= s.r_tol);

  // The returned field solves the discrete problem to tolerance.
  const double r = vector_norm2(assemble_residual(spec, xi));
  CHECK(r <= s.r_tol * report.residual_history.front());
}

TEST_CASE("max_iterations reached reports non-convergence") {
  const auto mesh = generate_crossed_mesh(16, 16, 1.5);
  ProblemSpec spec = ramp_problem(mesh, preset_material(-0.9, 0.9), 0.0, 0.1, 0.5, 1.5);
  NonlinearSettings s;
  s.r_tol = 1e-12;
  s.a_tol = 0.0;
  s.max_iterations = 2;
  const auto [xi, report] = newton_solve(spec, s);
  CHECK_FALSE(report.converged);
  CHECK(report.iterations == 2);
  CHECK(report.residual_history.size() == 3);
  // best-so-far iterate is returned, not the initial guess
  double far = 0.0;
  for (const Complex& v : xi.values) far = std::max(far, std::abs(v));
  CHECK(far > 0.0);
}

TEST_CASE("picard and newton limits agree (auxetic, 32x32)") {
  const auto mesh = generate_crossed_mesh(32, 32, 1.5);
  ProblemSpec spec = ramp_problem(mesh, preset_material(-0.9, 0.9), 0.0, 0.1, 0.5, 1.5);
  NonlinearSettings s;
  s.r_tol = 1e-11;
  s.a_tol = 1e-14;
  s.max_iterations = 300;
  const auto [xn, rn] = newton_solve(spec, s);
  const auto [xp, rp] = picard_solve(spec, s);
  REQUIRE(rn.converged);
  REQUIRE(rp.converged);
  FieldNorms norms(mesh);
  std::vector<Complex> diff(xn.values.size());
  for (size_t i = 0; i < diff.size(); ++i) diff[i] = xn.values[i] - xp.values[i];
  CHECK(norms.v_norm(diff) <= 1e-6 * norms.v_norm(xn.values));
}

TEST_CASE("epsilon stability of the frozen linear problem") {
  // g = 0, fixed xi_D; the V-norm may grow at most like 1/eps.
  const double L = 1.5;
  const auto mesh = generate_crossed_mesh(24, 24, L);
  FieldNorms norms(mesh);
  std::vector<double> inv_eps, vnorms;
  for (double eps : {1.0, 0.5, 0.25, 0.125}) {
    ProblemSpec spec = ramp_problem(mesh, preset_material(-1.6, 0.4), eps, 0.1, 0.5, L);
    Assembler assembler(spec);
    ComplexField frozen(mesh);  // crosses the type-change line
    for (int v = 0; v < mesh.vertex_count(); ++v)
      frozen.values[v] = 0.6 * mesh.vertices()[v].x / L;
    const AssembledSystem sys = assembler.system(frozen, AssemblyMode::parallel);
    const auto zeta = solve_linear(sys.matrix, sys.rhs);
    inv_eps.push_back(std::log(1.0 / eps));
    vnorms.push_back(std::log(norms.v_norm(zeta)));
  }
  // least-squares slope of log ||zeta|| against log(1/eps)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(inv_eps.size());
  for (int i = 0; i < n; ++i) {
    sx += inv_eps[i];
    sy += vnorms[i];
    sxx += inv_eps[i] * inv_eps[i];
    sxy += inv_eps[i] * vnorms[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope <= 1.1);
}

TEST_CASE("bit-reproducible solves") {
  const auto mesh = generate_crossed_mesh(16, 16, 1.5);
  auto once = [&] {
    ProblemSpec spec = ramp_problem(mesh, preset_material(-1.6, 0.4), 0.071, 0.35, 0.42, 1.5);
    NonlinearSettings s;
    s.r_tol = 1e-6;
    return newton_solve(spec, s).first;
  };
  const ComplexField a = once();
  const ComplexField b = once();
  REQUIRE(a.values.size() == b.values.size());
  CHECK(std::memcmp(a.values.data(), b.values.data(),
                    a.values.size() * sizeof(Complex)) == 0);
}

TEST_SUITE_END();
