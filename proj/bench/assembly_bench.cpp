// Times the OpenMP assembly kernels against the serial reference on one
// representative problem. Usage: kirigami_bench [nx] [repetitions]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "kirigami/assembly.hpp"
#include "kirigami/parallel.hpp"

using namespace kirigami;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double best_of(int reps, F&& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    body();
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (dt < best) best = dt;
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const int nx = argc > 1 ? std::atoi(argv[1]) : 192;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;

  const Triangulation2D mesh = generate_crossed_mesh(nx, nx, 1.5);
  MaterialModel material(-1.6, 0.4, -M_PI / 8, M_PI / 3);
  ProblemSpec spec(mesh, std::move(material));
  spec.epsilon = 0.071;
  spec.dirichlet_data = [](double x, double) { return 0.35 + 0.05 * x; };

  Assembler assembler(spec);
  ComplexField xi = assembler.dirichlet_lift();
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const Vec2 p = mesh.vertices()[v];
    xi.values[v] = Complex(0.35 + 0.1 * std::sin(p.x) * std::cos(p.y), 0.01 * p.y);
  }

  std::printf("mesh: %d x %d crossed (%d vertices, %d triangles), threads: %d\n", nx, nx,
              mesh.vertex_count(), mesh.triangle_count(), thread_count());
  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");

  struct Row {
    const char* name;
    double serial, parallel;
  };
  Row rows[3];

  rows[0] = {"operator+rhs",
             best_of(reps, [&] { assembler.system(xi, AssemblyMode::serial); }),
             best_of(reps, [&] { assembler.system(xi, AssemblyMode::parallel); })};
  rows[1] = {"residual",
             best_of(reps, [&] { assembler.residual(xi, AssemblyMode::serial); }),
             best_of(reps, [&] { assembler.residual(xi, AssemblyMode::parallel); })};
  rows[2] = {"jacobian",
             best_of(reps, [&] { assembler.jacobian(xi, AssemblyMode::serial); }),
             best_of(reps, [&] { assembler.jacobian(xi, AssemblyMode::parallel); })};

  for (const Row& r : rows)
    std::printf("%-22s %12.2f %12.2f %9.2f\n", r.name, 1e3 * r.serial, 1e3 * r.parallel,
                r.serial / r.parallel);
  return 0;
}
