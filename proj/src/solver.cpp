#include "kirigami/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "kirigami/norms.hpp"

namespace kirigami {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename Scalar>
std::vector<Scalar> sparse_lu_solve(const CsrMatrix<Scalar>& A, const std::vector<Scalar>& b) {
  if (A.rows != A.cols) throw std::invalid_argument("solve_linear: matrix must be square");
  if (static_cast<int>(b.size()) != A.rows)
    throw std::invalid_argument("solve_linear: dimension mismatch");

  using EigenSparse = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int>;
  Eigen::Map<const Eigen::SparseMatrix<Scalar, Eigen::RowMajor, int>> view(
      A.rows, A.cols, A.nnz(), A.row_ptr.data(), A.col_idx.data(), A.values.data());
  EigenSparse mat = view;

  Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(mat);
  lu.factorize(mat);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_linear: singular matrix (" + lu.lastErrorMessage() + ")");

  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Eigen::Map<const Vector> rhs(b.data(), b.size());
  Vector x = lu.solve(rhs);

  const double bnorm = rhs.norm();
  if (bnorm > 0.0) {
    for (int pass = 0; pass < 3; ++pass) {
      Vector r = rhs - mat * x;
      if (r.norm() <= 1e-10 * bnorm) break;
      x += lu.solve(r);
    }
  }
  return std::vector<Scalar>(x.data(), x.data() + x.size());
}

void validate_settings(const NonlinearSettings& s) {
  if (!(s.r_tol > 0.0 && s.r_tol < 1.0))
    throw std::invalid_argument("solver: r_tol must lie in (0, 1)");
  if (s.a_tol < 0.0) throw std::invalid_argument("solver: a_tol must be >= 0");
  if (s.max_iterations < 1) throw std::invalid_argument("solver: max_iterations must be >= 1");
  if (!(s.damping > 0.0 && s.damping <= 1.0))
    throw std::invalid_argument("solver: damping must lie in (0, 1]");
}

ComplexField initial_field(const Assembler& assembler, const NonlinearSettings& settings) {
  ComplexField lift = assembler.dirichlet_lift();
  if (!settings.initial_guess) return lift;
  const ComplexField& guess = *settings.initial_guess;
  if (guess.mesh != lift.mesh)
    throw std::invalid_argument("solver: initial guess does not live on the problem mesh");
  for (int d : lift.mesh->dirichlet_vertices()) {
    const Complex want = lift.values[d];
    if (std::abs(guess.values[d] - want) > 1e-12 * (1.0 + std::abs(want)))
      throw std::invalid_argument("solver: initial guess violates the Dirichlet constraints");
  }
  return guess;
}

}  // namespace

std::vector<Complex> solve_linear(const SparseComplexMatrix& A, const std::vector<Complex>& b) {
  return sparse_lu_solve(A, b);
}

std::vector<double> solve_linear(const SparseRealMatrix& A, const std::vector<double>& b) {
  return sparse_lu_solve(A, b);
}

std::pair<ComplexField, SolverReport> picard_solve(const ProblemSpec& spec,
                                                   const NonlinearSettings& settings) {
  validate_settings(settings);
  const auto t0 = Clock::now();
  Assembler assembler(spec);
  FieldNorms norms(*spec.mesh);

  ComplexField xi = initial_field(assembler, settings);
  SolverReport report;
  const double r0 = vector_norm2(assembler.residual(xi, settings.mode));
  report.residual_history.push_back(r0);
  if (r0 <= settings.a_tol) {
    report.converged = true;
    report.wall_time_seconds = seconds_since(t0);
    return {std::move(xi), std::move(report)};
  }

  double first_step = -1.0;
  std::vector<Complex> diff(xi.values.size());
  for (int k = 1; k <= settings.max_iterations; ++k) {
    AssembledSystem sys = assembler.system(xi, settings.mode);
    std::vector<Complex> next = solve_linear(sys.matrix, sys.rhs);

    for (size_t i = 0; i < diff.size(); ++i) diff[i] = next[i] - xi.values[i];
    const double step = norms.v_norm(diff);
    if (first_step < 0.0) first_step = step;

    xi.values = std::move(next);
    const double r = vector_norm2(assembler.residual(xi, settings.mode));
    report.residual_history.push_back(r);
    report.iterations = k;
    report.final_relative_residual = r / r0;
    if (step <= settings.r_tol * first_step || r <= settings.r_tol * r0 + settings.a_tol) {
      report.converged = true;
      break;
    }
  }
  report.wall_time_seconds = seconds_since(t0);
  return {std::move(xi), std::move(report)};
}

std::pair<ComplexField, SolverReport> newton_solve(const ProblemSpec& spec,
                                                   const NonlinearSettings& settings) {
  validate_settings(settings);
  const auto t0 = Clock::now();
  Assembler assembler(spec);
  const int nv = spec.mesh->vertex_count();

  ComplexField xi = initial_field(assembler, settings);
  SolverReport report;
  std::vector<Complex> F = assembler.residual(xi, settings.mode);
  double rnorm = vector_norm2(F);
  const double r0 = rnorm;
  report.residual_history.push_back(r0);
  if (r0 <= settings.a_tol) {
    report.converged = true;
    report.wall_time_seconds = seconds_since(t0);
    return {std::move(xi), std::move(report)};
  }

  auto picard_sweep = [&](ComplexField& field) {
    AssembledSystem sys = assembler.system(field, settings.mode);
    field.values = solve_linear(sys.matrix, sys.rhs);
  };

  int stalled = 0;
  bool force_picard = false;
  for (int k = 1; k <= settings.max_iterations; ++k) {
    ComplexField candidate = xi;
    if (force_picard) {
      picard_sweep(candidate);
      force_picard = false;
    } else {
      const SparseRealMatrix J = assembler.jacobian(xi, settings.mode);
      std::vector<double> rhs(2 * nv);
      for (int i = 0; i < nv; ++i) {
        rhs[2 * i] = -F[i].real();
        rhs[2 * i + 1] = -F[i].imag();
      }
      std::vector<double> delta;
      try {
        delta = solve_linear(J, rhs);
      } catch (const std::runtime_error& e) {
        throw std::runtime_error(
            std::string("newton_solve: singular Jacobian at iteration ") + std::to_string(k) +
            "; the linearized sign-changing operator is singular at this iterate, "
            "consider raising epsilon (" + e.what() + ")");
      }

      double lambda = settings.damping;
      bool accepted = false;
      for (int halvings = 0; halvings <= 8; ++halvings) {
        for (int i = 0; i < nv; ++i)
          candidate.values[i] =
              xi.values[i] + lambda * Complex(delta[2 * i], delta[2 * i + 1]);
        if (vector_norm2(assembler.residual(candidate, settings.mode)) <= rnorm) {
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) {
        candidate = xi;
        picard_sweep(candidate);
      }
    }

    xi = std::move(candidate);
    F = assembler.residual(xi, settings.mode);
    const double rprev = rnorm;
    rnorm = vector_norm2(F);
    report.residual_history.push_back(rnorm);
    report.iterations = k;
    report.final_relative_residual = rnorm / r0;
    if (rnorm <= settings.r_tol * r0 + settings.a_tol) {
      report.converged = true;
      break;
    }
    stalled = (rnorm > 0.999 * rprev) ? stalled + 1 : 0;
    if (stalled >= 2) {
      force_picard = true;
      stalled = 0;
    }
  }
  report.wall_time_seconds = seconds_since(t0);
  return {std::move(xi), std::move(report)};
}

}  // namespace kirigami
